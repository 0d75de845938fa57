"""Lockstep round engine.

Round ``t`` has three phases: every live node computes from what it received
in round ``t-1``, the adversary rewrites what faulty nodes send, and the
resulting payloads are delivered (a node always hears its own messages).
The payloads a node holds before round 1 are part of its arbitrary initial
state, just like its variables.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..errors import ConfigurationError, ProtocolViolation, SchemaError
from .adversary import AdversaryView, BindContext, Strategy, get_strategy
from .model import FaultModel, NetworkSpec
from .protocol import Protocol


def derive_rng(seed: int, stream: str) -> random.Random:
    """Independent, platform-stable random stream for ``(seed, stream)``."""
    return random.Random(f"{seed}/{stream}")


@dataclass
class InitialCondition:
    states: list
    inbox: list  # inbox[v][u]: what v holds from u before round 1


def inject_arbitrary_state(proto: Protocol, seed: int, *, zero: bool = False) -> InitialCondition:
    """Draw every state variable (and every pre-round-1 receive buffer) from its domain.

    With ``zero=True`` the canonical all-zero state with empty buffers is
    returned instead, which is how non-stabilising routines are started.
    """
    n = proto.n
    if zero:
        return InitialCondition([proto.zero_state(v) for v in range(n)], [[None] * n for _ in range(n)])
    rng = derive_rng(seed, "init")
    states = [proto.random_state(v, rng) for v in range(n)]
    inbox = [[proto.schema_for(u).random(rng) for u in range(n)] for _ in range(n)]
    return InitialCondition(states, inbox)


class RoundRecord:
    __slots__ = ("outputs", "bits", "states", "delivered", "inputs")

    def __init__(self, outputs, bits, states=None, delivered=None, inputs=None):
        self.outputs = outputs
        self.bits = bits
        self.states = states
        self.delivered = delivered
        self.inputs = inputs


@dataclass
class Trace:
    meta: dict
    output_names: tuple[str, ...]
    rounds: list[RoundRecord]
    n: int
    faulty: frozenset[int]
    fault_model: FaultModel
    crash_rounds: dict[int, int] = field(default_factory=dict)
    initial: InitialCondition | None = None
    message_bound: int | None = None

    @property
    def horizon(self) -> int:
        return len(self.rounds)

    def round(self, t: int) -> RoundRecord:
        return self.rounds[t - 1]

    def channel(self, name: str) -> list[list]:
        """``values[t-1][v]`` for output ``name`` (``None`` for crashed nodes)."""
        try:
            k = self.output_names.index(name)
        except ValueError:
            raise SchemaError(
                f"trace has no output channel {name!r} (has {', '.join(self.output_names) or 'none'})"
            ) from None
        return [[None if o is None else o[k] for o in rec.outputs] for rec in self.rounds]

    def inputs(self) -> list[list]:
        return [rec.inputs if rec.inputs is not None else [None] * self.n for rec in self.rounds]

    def crashed_by(self, t: int) -> frozenset[int]:
        return frozenset(u for u, r in self.crash_rounds.items() if r <= t)

    def judged(self, t: int) -> tuple[int, ...]:
        """Nodes whose outputs the correctness conditions constrain in round ``t``."""
        if self.fault_model is FaultModel.CRASH:
            gone = self.crashed_by(t)
            return tuple(v for v in range(self.n) if v not in gone)
        # the judged set is fixed outside the crash model
        cached = self.__dict__.get("_static_judged")
        if cached is None:
            if self.fault_model is FaultModel.OMISSION:
                cached = tuple(range(self.n))
            else:
                cached = tuple(v for v in range(self.n) if v not in self.faulty)
            self.__dict__["_static_judged"] = cached
        return cached

    def max_bits(self, nodes: Sequence[int] | None = None) -> int:
        best = 0
        for t, rec in enumerate(self.rounds, 1):
            for v in nodes if nodes is not None else self.judged(t):
                b = rec.bits[v]
                if b is not None and b > best:
                    best = b
        return best


InputFn = Callable[[int, int], Any]


def _normalise_inputs(inputs) -> InputFn | None:
    if inputs is None or callable(inputs):
        return inputs
    if isinstance(inputs, Mapping):
        table = {int(t): row for t, row in inputs.items()}

        def lookup(t: int, v: int):
            row = table.get(t)
            if row is None:
                return 0
            if isinstance(row, Mapping):
                return row.get(v, 0)
            return 1 if v in row else 0

        return lookup
    raise ConfigurationError("inputs must be a callable (t, v) -> value or a round->nodes mapping")


def run(
    spec: NetworkSpec,
    proto: Protocol,
    adversary: Strategy | str | None = None,
    seed: int = 0,
    horizon: int | None = None,
    *,
    inputs=None,
    initial: InitialCondition | None = None,
    record: str = "full",
    meta: Mapping[str, Any] | None = None,
) -> Trace:
    """Execute ``proto`` for ``horizon`` rounds and return the trace.

    ``record`` is ``"full"`` (states and delivered payloads kept) or
    ``"outputs"`` (outputs, inputs and bit counts only).  A correct node that
    sends more than ``proto.message_bound`` bits on some link raises
    :class:`ProtocolViolation`.
    """
    if spec.n != proto.n:
        raise ConfigurationError(f"network has {spec.n} nodes but protocol expects {proto.n}")
    if horizon is None:
        horizon = getattr(proto, "default_horizon", None)
        if horizon is None:
            raise ConfigurationError("no horizon given and the protocol has no default")
    if horizon < 1:
        raise ConfigurationError(f"horizon must be positive, got {horizon}")
    if record not in ("full", "outputs"):
        raise ConfigurationError(f"unknown record mode {record!r}")
    strategy = get_strategy(adversary or "honest")
    model = spec.fault_model
    if spec.faulty and not strategy.compatible(model):
        raise ConfigurationError(
            f"adversary {strategy.name!r} ({strategy.kind.value}) is not admissible under the "
            f"{model.value} fault model"
        )
    if initial is None:
        initial = inject_arbitrary_state(proto, seed)

    n = spec.n
    faulty = sorted(spec.faulty)
    tactic = strategy.bind(
        BindContext(n, spec.f, spec.faulty, proto.schema_for, derive_rng(seed, "adversary"), horizon)
    )
    crash_rounds = dict(tactic.crash_rounds) if model is FaultModel.CRASH else {}
    benign = model is not FaultModel.BYZANTINE
    bound_all = model is FaultModel.OMISSION
    rushing = strategy.rushing
    sanitize = not strategy.well_formed
    correct = [v for v in range(n) if v not in spec.faulty]
    input_fn = _normalise_inputs(inputs)
    full = record == "full"

    step = proto.step
    bits_of = proto.payload_bits
    bound = proto.message_bound
    silent = [None] * n
    states = list(initial.states)
    inboxes = [list(row) for row in initial.inbox]
    rounds: list[RoundRecord] = []
    dead: set[int] = set()
    # nodes not stepped because nothing would read their honest shadow
    skipped = set(spec.faulty) if (model is FaultModel.BYZANTINE and not strategy.uses_honest) else set()
    placeholder = [None] * n

    for t in range(1, horizon + 1):
        ext_row = [input_fn(t, v) for v in range(n)] if input_fn else None
        outs: list = [silent] * n
        outputs: list = [None] * n
        for v in range(n):
            if v in dead:
                continue
            if v in skipped:
                outs[v] = placeholder
                continue
            st, ob, o = step(v, states[v], inboxes[v], ext_row[v] if ext_row else None)
            states[v] = st
            outs[v] = ob
            outputs[v] = o
        if faulty:
            view = AdversaryView(t, {v: outs[v] for v in correct} if rushing else None)
            for u in faulty:
                if u in dead:
                    continue
                honest = outs[u]
                sent = tactic.outgoing(t, u, honest, view)
                if len(sent) != n:
                    raise ProtocolViolation(f"adversary produced {len(sent)} payloads, expected {n}")
                if benign:
                    for w in range(n):
                        if sent[w] is not None and sent[w] is not honest[w]:
                            raise ProtocolViolation(
                                f"{strategy.name!r} altered a payload under the {model.value} model"
                            )
                elif sanitize:
                    schema = proto.schema_for(u)
                    sent = [schema.sanitize(p) for p in sent]
                outs[u] = sent
            for u, r in crash_rounds.items():
                if r == t:
                    dead.add(u)
        bits = [None] * n
        for v in range(n):
            ob = outs[v]
            if ob is silent:
                bits[v] = 0
                continue
            if not benign and v in spec.faulty:
                continue  # Byzantine senders are not bound by the protocol
            last = None
            last_bits = mx = 0
            for p in ob:
                if p is None:
                    continue
                if p is not last:
                    last = p
                    last_bits = bits_of(v, p)
                if last_bits > mx:
                    mx = last_bits
            bits[v] = mx
            if mx > bound and (bound_all or v not in spec.faulty):
                raise ProtocolViolation(
                    f"node {v} sent {mx} bits in round {t}, bound is {bound} ({proto.name})"
                )
        inboxes = [[ob[w] for ob in outs] for w in range(n)]
        if full:
            rounds.append(RoundRecord(outputs, bits, list(states), inboxes, ext_row))
        else:
            rounds.append(RoundRecord(outputs, bits, None, None, ext_row))

    info = {
        "protocol": proto.name,
        "seed": seed,
        "adversary": strategy.name,
        "horizon": horizon,
        "n": n,
        "f": spec.f,
        "fault_model": model.value,
        "faulty": faulty,
        "message_bound": bound,
    }
    if crash_rounds:
        info["crash_rounds"] = {str(u): r for u, r in sorted(crash_rounds.items())}
    if meta:
        info.update(meta)
    return Trace(
        meta=info,
        output_names=tuple(proto.outputs),
        rounds=rounds,
        n=n,
        faulty=spec.faulty,
        fault_model=model,
        crash_rounds=crash_rounds,
        initial=initial if full else None,
        message_bound=bound,
    )


def default_horizon(bound: int, period: int) -> int:
    """Twice the stabilisation bound plus four periods."""
    return 2 * bound + 4 * period
