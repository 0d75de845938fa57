import pytest
from hypothesis import given, settings, strategies as st

from pulsync.errors import ConfigurationError, ProtocolViolation, SchemaError
from pulsync.pulsers import build_strong_pulser
from pulsync.sim import FaultModel, NetworkSpec, inject_arbitrary_state, run
from pulsync.sim.adversary import CrashSchedule, Strategy, Tactic
from pulsync.sim.domains import OrBottom, field_value, iter_fields
from pulsync.sim.export import dumps, trace_to_json

from toy import LocalCounter


def test_presynchronised_counter_cycles():
    proto = LocalCounter(4, 3)
    trace = run(NetworkSpec(4, 0), proto, None, seed=1, horizon=6,
                initial=inject_arbitrary_state(proto, 0, zero=True))
    assert trace.channel("counter") == [[t % 3] * 4 for t in range(6)]


def test_crashed_node_delivers_nothing_after_its_crash_round():
    proto = LocalCounter(4, 3)
    schedule = CrashSchedule({1: (2, (0,))})
    trace = run(NetworkSpec(4, 1, FaultModel.CRASH, {1}), proto, schedule, seed=3, horizon=6)
    got = lambda t, w: trace.round(t).delivered[w][1]
    assert all(got(1, w) is not None for w in range(4))
    assert got(2, 0) is not None and got(2, 2) is None and got(2, 3) is None
    for t in range(3, 7):
        assert all(got(t, w) is None for w in range(4))
        assert trace.round(t).outputs[1] is None
    assert trace.crash_rounds == {1: 2}
    assert trace.judged(2) == (0, 2, 3)


def test_same_seed_gives_byte_identical_traces():
    proto, _ = build_strong_pulser(4, 1, 12)
    net = NetworkSpec(4, 1, FaultModel.BYZANTINE, {2})
    a = dumps(trace_to_json(run(net, proto, "spurious-pulser", seed=7, horizon=60)))
    b = dumps(trace_to_json(run(net, proto, "spurious-pulser", seed=7, horizon=60)))
    c = dumps(trace_to_json(run(net, proto, "spurious-pulser", seed=8, horizon=60)))
    assert a == b
    assert a != c


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_arbitrary_states_stay_in_their_domains(seed):
    proto = LocalCounter(5, 3)
    init = inject_arbitrary_state(proto, seed)
    assert all(s.c in (0, 1, 2) for s in init.states)
    assert all(p is None or p in (0, 1, 2) for row in init.inbox for p in row)


def test_arbitrary_states_vary_with_the_seed():
    proto = LocalCounter(5, 3)
    seen = {tuple(s.c for s in inject_arbitrary_state(proto, seed).states) for seed in range(20)}
    assert len(seen) > 10


def test_zero_state_is_canonical():
    proto = LocalCounter(4, 3)
    init = inject_arbitrary_state(proto, 123, zero=True)
    assert [s.c for s in init.states] == [0] * 4
    assert all(p is None for row in init.inbox for p in row)


def test_composite_pulser_state_randomises_every_declared_field():
    proto, _ = build_strong_pulser(4, 1, 12)
    paths = [p for p, _ in iter_fields(proto, 0)]
    assert {"c", "cursor"} <= set(paths)
    assert any(p.startswith("inst.") for p in paths)
    assert any(p.startswith("weak.inner.") for p in paths)
    assert any(p.startswith("weak.inst0.") for p in paths)
    values = {p: set() for p in paths}
    for seed in range(60):
        state = inject_arbitrary_state(proto, seed).states[0]
        for path, dom in iter_fields(proto, 0):
            x = field_value(state, path)
            assert x is None or dom.contains(x), path
            values[path].add(x)
    for path, dom in iter_fields(proto, 0):
        if isinstance(dom, OrBottom):
            assert None in values[path], path
        assert len(values[path]) > 1, path
    assert values["c"] == set(range(12))


def test_inputs_accept_mappings_and_callables():
    proto = LocalCounter(3, 3)
    net = NetworkSpec(3, 0)
    by_map = run(net, proto, None, horizon=3, inputs={2: [1]})
    by_fn = run(net, proto, None, horizon=3, inputs=lambda t, v: int(t == 2 and v == 1))
    assert by_map.inputs() == by_fn.inputs() == [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
    with pytest.raises(ConfigurationError):
        run(net, proto, None, horizon=3, inputs=[1, 2])


@pytest.mark.parametrize("kwargs", [{"horizon": 0}, {"horizon": 3, "record": "everything"}])
def test_bad_run_arguments(kwargs):
    with pytest.raises(ConfigurationError):
        run(NetworkSpec(3, 0), LocalCounter(3, 3), None, **kwargs)


def test_network_must_match_protocol_and_model():
    with pytest.raises(ConfigurationError):
        run(NetworkSpec(4, 0), LocalCounter(3, 3), None, horizon=2)
    with pytest.raises(ConfigurationError):
        run(NetworkSpec(4, 1, FaultModel.CRASH, {0}), LocalCounter(4, 3), "equivocator", horizon=2)
    with pytest.raises(ConfigurationError):
        NetworkSpec(3, 1)
    with pytest.raises(ConfigurationError):
        NetworkSpec(4, 1, faulty={0, 1})


def test_oversized_correct_messages_are_rejected():
    proto = LocalCounter(3, 8, message_bound=2)
    with pytest.raises(ProtocolViolation):
        run(NetworkSpec(3, 0), proto, None, horizon=2)


class _Forger(Strategy):
    name = "forger"
    kind = FaultModel.OMISSION

    def bind(self, ctx):
        class T(Tactic):
            def outgoing(self, t, u, honest, view):
                return [0 for _ in honest]
        return T()


def test_benign_adversaries_may_only_drop():
    proto = LocalCounter(3, 3)
    net = NetworkSpec(3, 1, FaultModel.OMISSION, {0})
    init = inject_arbitrary_state(proto, 0, zero=True)
    states = [s._replace(c=1) for s in init.states]
    with pytest.raises(ProtocolViolation):
        run(net, proto, _Forger(), horizon=3, initial=type(init)(states, init.inbox))


@pytest.mark.parametrize("adversary", ["drop-all", "drop-half", "alternating"])
def test_omission_never_drops_self_delivery(adversary):
    trace = run(NetworkSpec(5, 2, FaultModel.OMISSION, {0, 3}), LocalCounter(5, 3), adversary, horizon=8)
    for rec in trace.rounds:
        assert rec.delivered[0][0] is not None and rec.delivered[3][3] is not None
    if adversary == "drop-all":
        assert all(rec.delivered[w][0] is None for rec in trace.rounds for w in (1, 2, 3, 4))


def test_judged_nodes_follow_the_fault_model():
    proto = LocalCounter(4, 3)
    byz = run(NetworkSpec(4, 1, FaultModel.BYZANTINE, {2}), proto, "silent", horizon=2)
    omi = run(NetworkSpec(4, 1, FaultModel.OMISSION, {2}), proto, "drop-all", horizon=2)
    assert byz.judged(1) == (0, 1, 3)
    assert omi.judged(1) == (0, 1, 2, 3)


def test_unknown_channel_names_the_known_ones():
    trace = run(NetworkSpec(3, 0), LocalCounter(3, 3), None, horizon=1)
    with pytest.raises(SchemaError, match="counter"):
        trace.channel("pulse")


def test_outputs_mode_keeps_only_outputs():
    trace = run(NetworkSpec(3, 0), LocalCounter(3, 3), None, horizon=2, record="outputs")
    assert trace.round(1).states is None and trace.round(1).delivered is None
    assert trace.max_bits() == 2
