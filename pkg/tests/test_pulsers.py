import math

import pytest
from hypothesis import given, strategies as st

from pulsync.consensus import multivalued_consensus, phase_king, silent_consensus
from pulsync.errors import ConfigurationError
from pulsync.pulsers import (
    CounterPulser, FilterParams, LeaderCounter, LeaderPulser, PulserCounter, StrongPulser,
    build_strong_pulser, build_weak_pulser, compute_bounds, filter_step, split_nodes,
)
from pulsync.pulsers.weak import BOOK_BITS, filter_counts
from pulsync.sim import FaultModel, NetworkSpec, inject_arbitrary_state, run
from pulsync.sim.engine import InitialCondition
from pulsync.sim.properties import (
    CounterProperty, StrongPulseProperty, WeakPulseProperty, acceptance_spacing, union_spacing,
)

from toy import LocalCounter, Metronome, Tick


def _fresh(proto, states=None):
    init = inject_arbitrary_state(proto, 0, zero=True)
    return InitialCondition(states or init.states, init.inbox)


# -- conversions --------------------------------------------------------------

def _pulses_from_counter(modulus, period, rounds=12):
    proto = CounterPulser(LocalCounter(3, modulus), modulus, period)
    trace = run(NetworkSpec(3, 0), proto, None, horizon=rounds, initial=_fresh(proto))
    return [row[0] for row in trace.channel("pulse")], [row[0] for row in trace.channel("counter")]


def test_counter_pulses_on_multiples_of_the_period():
    pulses, counts = _pulses_from_counter(6, 3)
    assert counts[:7] == [0, 1, 2, 3, 4, 5, 0]
    assert [c for p, c in zip(pulses, counts) if p] == [0, 3, 0, 3]
    assert _pulses_from_counter(6, 6)[0][:7] == [1, 0, 0, 0, 0, 0, 1]
    assert _pulses_from_counter(6, 1)[0] == [1] * 12
    with pytest.raises(ConfigurationError):
        CounterPulser(LocalCounter(3, 6), 6, 4)


def _counter_from_pulses(period, modulus, rounds=14):
    proto = PulserCounter(Metronome(3, period), period, modulus)
    states = [type(s)(0, Tick(0)) for s in _fresh(proto).states]
    trace = run(NetworkSpec(3, 0), proto, None, horizon=rounds, initial=_fresh(proto, states))
    return [row[0] for row in trace.channel("counter")]


def test_pulses_drive_a_counter():
    assert _counter_from_pulses(6, 3)[:7] == [0, 1, 2, 0, 1, 2, 0]
    assert _counter_from_pulses(6, 6)[:8] == [0, 1, 2, 3, 4, 5, 0, 1]
    assert _counter_from_pulses(6, 1) == [0] * 14
    with pytest.raises(ConfigurationError):
        PulserCounter(Metronome(3, 6), 6, 4)


# -- leader base cases ---------------------------------------------------------

def test_leader_pulser_stabilises_after_one_period():
    proto = LeaderPulser(3, 5)
    assert (proto.stabilisation, proto.message_bound) == (6, 1)
    for seed in range(50):
        trace = run(NetworkSpec(3, 0), proto, None, seed, horizon=40)
        verdict = StrongPulseProperty(5).check(trace)
        assert verdict.holds and verdict.round <= 6
        assert trace.max_bits() <= 1


def test_leader_counter_agrees_from_round_two():
    proto = LeaderCounter(4, 3)
    for seed in range(30):
        trace = run(NetworkSpec(4, 0), proto, None, seed, horizon=12)
        verdict = CounterProperty(3).check(trace)
        assert verdict.holds and verdict.round <= 2


# -- strong from weak ----------------------------------------------------------

def _driven_strong(period, n, f, gap, countdown):
    routine = multivalued_consensus(phase_king(n, f), period)
    proto = StrongPulser(Metronome(n, gap), routine, period)
    return proto, routine


@pytest.mark.parametrize("adversary", ["honest", "equivocator", "spurious-pulser", "random"])
def test_one_good_weak_pulse_synchronises_counters(adversary):
    proto, routine = _driven_strong(12, 4, 1, 40, 39)
    T = routine.rounds
    for seed in range(10):
        init = inject_arbitrary_state(proto, seed)
        # the weak pulser pulses everywhere in round 2 and then stays quiet for 40 rounds
        states = [s._replace(weak=Tick(39)) for s in init.states]
        net = NetworkSpec(4, 1, FaultModel.BYZANTINE, {seed % 4} if adversary != "honest" else ())
        trace = run(net, proto, adversary, seed, horizon=40, initial=InitialCondition(states, init.inbox))
        counters = trace.channel("counter")
        for t in range(2 + T + 1, 41):
            assert len({counters[t - 1][v] for v in trace.judged(t)}) == 1, (seed, t)


def test_agreeing_counters_are_left_alone():
    proto, routine = _driven_strong(12, 4, 1, 20, 19)
    init = inject_arbitrary_state(proto, 0, zero=True)
    states = [s._replace(c=5, cursor=None, weak=Tick(19)) for s in init.states]
    trace = run(NetworkSpec(4, 1, FaultModel.BYZANTINE, {1}), proto, "equivocator", 3, horizon=60,
                initial=InitialCondition(states, init.inbox))
    counters = [row[0] for row in trace.channel("counter")]
    assert counters == [(5 + t) % 12 for t in range(60)]


def test_period_two_alternates_after_stabilisation():
    routine = multivalued_consensus(phase_king(4, 0), 2)
    gap = routine.rounds
    proto = StrongPulser(Metronome(4, gap), routine, 2)
    for seed in range(20):
        init = inject_arbitrary_state(proto, seed)
        states = [s._replace(weak=Tick(0)) for s in init.states]
        trace = run(NetworkSpec(4, 0), proto, None, seed, horizon=30, initial=InitialCondition(states, init.inbox))
        pulses = [row[0] for row in trace.channel("pulse")]
        counts = [row[0] for row in trace.channel("counter")]
        start = gap + 2
        assert pulses[start:] == [1 - counts[start] % 2 if i % 2 == 0 else counts[start] % 2
                                  for i in range(len(pulses) - start)]
        assert all(p == (c == 0) for p, c in zip(pulses, counts))
        assert StrongPulseProperty(2).check(trace).holds


# -- filtering rules -----------------------------------------------------------

PARAMS = FilterParams(block_quorum=2, quorum=3, listen_reset=2, period=6, cooldown=10)


def test_filter_cooldown_decrements_on_an_expected_pulse():
    out = filter_counts(0, 3, PARAMS.period - 1, 4, PARAMS)
    assert out.M == 1 and out.cool == 3


def test_filter_cooldown_resets_on_an_unexpected_pulse():
    out = filter_counts(0, 3, 2, 4, PARAMS)
    assert out.M == 1 and out.cool == PARAMS.cooldown and out.b == 0


def test_filter_listen_reset_needs_enough_m_votes():
    assert filter_counts(0, 2, 4, 0, PARAMS).listen == 0
    assert filter_counts(0, 1, 4, 0, PARAMS).listen == 5
    assert filter_counts(0, 1, 6, 0, PARAMS).listen == 6


def test_filter_accepts_only_with_cooldown_zero_and_a_vote():
    assert filter_counts(0, 3, 5, 1, PARAMS).b == 1
    assert filter_counts(0, 3, 5, 2, PARAMS).b == 0
    assert filter_counts(0, 0, 5, 0, PARAMS).b == 0


def test_filter_step_counts_ones_only():
    out = filter_step([1, 1, None], [1, 0, 1, None], 3, 0, PARAMS)
    assert out.m == 1 and out.M == 0 and out.listen == 0


@given(
    a=st.integers(0, 6), m=st.integers(0, 7), listen=st.integers(0, 6), cool=st.integers(0, 10),
)
def test_filter_invariants(a, m, listen, cool):
    out = filter_counts(a, m, listen, cool, PARAMS)
    assert out.m == (a >= PARAMS.block_quorum)
    assert out.M == (m >= PARAMS.quorum)
    assert 0 <= out.listen <= PARAMS.period
    assert 0 <= out.cool <= PARAMS.cooldown
    assert out.b == (out.cool == 0 and out.M == 1)
    if m >= PARAMS.listen_reset:
        assert out.listen == 0
    if out.M and listen != PARAMS.period - 1:
        assert out.cool == PARAMS.cooldown


# -- recursion and bounds --------------------------------------------------------

def test_split_rule():
    assert split_nodes(4, 1) == (2, 2, 0, 0)
    assert split_nodes(13, 4)[2:] == (2, 1)
    for f in range(1, 17):
        n0, n1, f0, f1 = split_nodes(3 * f + 1, f)
        assert f0 + f1 + 1 == f
        assert f0 == math.ceil((f - 1) / 2)
        assert n0 > 3 * f0 and n1 > 3 * f1 and n0 + n1 == 3 * f + 1
    with pytest.raises(ConfigurationError):
        split_nodes(4, 0)


def test_recursion_depth_is_logarithmic():
    for f in range(1, 17):
        assert compute_bounds(3 * f + 1, f, 12).depth == math.ceil(math.log2(f + 1))


def _oracle(f, period):
    """Closed-form bounds, recomputed from the building blocks' declared costs."""
    if f == 0:
        return period + 1, 1
    pk_rounds, pk_bits = 3 * (f + 1), 2
    multi_rounds = 2 * math.ceil(math.log2(period)) + pk_rounds
    silent_rounds = pk_rounds + 2
    gap = max(multi_rounds, silent_rounds + 2)
    f0, f1 = math.ceil((f - 1) / 2), (f - 1) // 2
    t0, m0 = _oracle(f0, 2 * gap)
    t1, m1 = _oracle(f1, 3 * gap)
    cooldown = 3 * gap + gap + 2
    weak_t = max(t0, t1) + 2 * cooldown + silent_rounds + 1 + 3 * gap
    weak_m = max(m0, m1) + 5 + 2 * pk_bits
    return weak_t + multi_rounds + period, weak_m + pk_bits


def test_leaf_bound():
    plan = compute_bounds(3, 0, 5)
    assert (plan.stabilisation, plan.message_bits) == (6, 1)


@pytest.mark.parametrize("n,f,period", [(4, 1, 12), (10, 3, 24), (7, 2, 16), (13, 4, 12), (22, 7, 12)])
def test_bounds_match_the_closed_form(n, f, period):
    plan = compute_bounds(n, f, period)
    assert (plan.stabilisation, plan.message_bits) == _oracle(f, period)


def test_pinned_bounds():
    p1 = compute_bounds(4, 1, 12)
    assert (p1.stabilisation, p1.message_bits) == (236, 12)
    assert (p1.weak.gap, p1.weak.cooldown, p1.weak.stabilisation) == (14, 58, 210)
    p3 = compute_bounds(10, 3, 24)
    assert (p3.stabilisation, p3.message_bits) == (687, 23)
    assert p3.weak.stabilisation == 641
    assert [b.stabilisation for b in p3.weak.blocks] == [328, 380]
    assert p3.stabilisation > p1.stabilisation and p3.message_bits > p1.message_bits


def test_strong_node_adds_consensus_and_period():
    plan = compute_bounds(4, 1, 12)
    assert plan.stabilisation == plan.weak.stabilisation + plan.consensus_rounds + 12
    assert plan.weak.message_bits == 1 + BOOK_BITS + 2 * 2


def test_built_protocol_declares_its_plan():
    proto, spec = build_strong_pulser(4, 1, 12)
    assert spec.stabilisation == proto.stabilisation == 236
    assert spec.message_bits == proto.message_bound == 12
    assert tuple(proto.plan.as_dict()["weak"]["split"]) == (2, 2)


@pytest.mark.parametrize("args", [(3, 1, 12), (4, 1, 1), (6, 2, 12)])
def test_misconfigured_pulsers_are_rejected(args):
    with pytest.raises(ConfigurationError):
        build_strong_pulser(*args)


# -- weak pulser -------------------------------------------------------------------

@pytest.fixture(scope="module")
def weak_f1():
    return build_weak_pulser(4, 1, 12)


def test_weak_pulser_gets_a_good_pulse_with_a_faulty_block(weak_f1):
    weak, spec = weak_f1
    horizon = 2 * spec.stabilisation + 4 * spec.gap
    for seed in range(1000):
        faulty = frozenset({2 + seed % 2})
        trace = run(NetworkSpec(4, 1, FaultModel.BYZANTINE, faulty), weak, "spurious-pulser", seed,
                    horizon, record="outputs")
        verdict = WeakPulseProperty(spec.gap).check(trace)
        assert verdict.holds and verdict.round <= spec.stabilisation, (seed, verdict)


def test_correct_block_output_becomes_periodic(weak_f1):
    weak, spec = weak_f1
    plan = weak.plan
    block0 = plan.blocks[0]
    bound = block0.stabilisation + 2 * plan.cooldown + plan.consensus_rounds + 1
    for seed in range(60):
        trace = run(NetworkSpec(4, 1, FaultModel.BYZANTINE, {3}), weak, "spurious-pulser", seed,
                    2 * spec.stabilisation, record="outputs")
        verdict = StrongPulseProperty(block0.period, channel="B0").check(trace)
        assert verdict.holds and verdict.round <= bound, (seed, verdict)


def test_block_votes_agree_after_the_pruning_window(weak_f1):
    weak, spec = weak_f1
    start = weak.plan.consensus_rounds + 3
    for seed in range(60):
        trace = run(NetworkSpec(4, 1, FaultModel.BYZANTINE, {seed % 4}), weak, "spurious-pulser", seed,
                    300, record="outputs")
        for channel in ("B0", "B1"):
            rows = trace.channel(channel)
            for t in range(start, 301):
                assert len({rows[t - 1][v] for v in trace.judged(t)}) == 1, (seed, channel, t)


def test_per_node_acceptance_spacing_counterexample(weak_f1):
    """One node that starts with its cooldown expired accepts alone; the others catch up later.

    Per node pair the gap is neither one period nor more than the cooldown,
    but the acceptance rounds across all nodes are still exactly one period apart.
    """
    weak, spec = weak_f1
    plan = weak.plan
    trace = run(NetworkSpec(4, 1, FaultModel.BYZANTINE, {1}), weak, "spurious-pulser", 33,
                2 * spec.stabilisation + 4 * spec.gap, record="outputs")
    period0 = plan.blocks[0].period
    pairs = acceptance_spacing(trace, "b0", period0, plan.cooldown)
    assert (0, 55, 2, 111) in pairs and (0, 55, 3, 111) in pairs
    assert union_spacing(trace, "b0", period0, plan.cooldown) == []
