"""Running a consensus routine on its own, from a clean start."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

from ..errors import ConfigurationError
from ..sim.domains import IntRange, Nested, OrBottom
from ..sim.engine import Trace, inject_arbitrary_state, run
from ..sim.model import NetworkSpec
from ..sim.protocol import Protocol, broadcast
from .base import ConsensusRoutine


class RunnerState(NamedTuple):
    cursor: Any     # 0 before starting, r while waiting for round-r messages, None when done
    inner: Any
    decision: Any


class ConsensusProtocol(Protocol):
    """Adapts a routine to the engine: start in round 1, decide after the last round."""

    outputs = ("decision",)

    def __init__(self, routine: ConsensusRoutine, inputs: Sequence[int]):
        if len(inputs) != routine.spec.n:
            raise ConfigurationError(f"need {routine.spec.n} inputs, got {len(inputs)}")
        self.routine = routine
        self.inputs = list(inputs)
        self.n = routine.spec.n
        self.name = routine.name
        self.schema = routine.schema
        self.message_bound = routine.spec.message_bits
        self.default_horizon = routine.rounds + 1
        self._fields = (
            ("cursor", OrBottom(IntRange(0, routine.rounds))),
            ("inner", Nested(routine)),
            ("decision", OrBottom(IntRange(0, routine.spec.values - 1))),
        )

    def zero_state(self, v):
        return RunnerState(0, self.routine.start(v, self.inputs[v]), None)

    def step(self, v, state, inbox, ext=None):
        rt = self.routine
        r, s, y = state
        if r is None:
            return state, broadcast(self.n, None), (y,)
        if r == 0:
            s = rt.start(v, self.inputs[v])
            return RunnerState(1, s, None), broadcast(self.n, rt.send(v, s, 1)), (None,)
        s = rt.receive(v, s, r, inbox)
        if r == rt.rounds:
            y = rt.decide(v, s)
            return RunnerState(None, s, y), broadcast(self.n, None), (y,)
        return RunnerState(r + 1, s, None), broadcast(self.n, rt.send(v, s, r + 1)), (None,)

    def state_fields(self, v):
        return self._fields

    def state_type(self, v):
        return RunnerState


@dataclass
class ConsensusOutcome:
    decisions: list          # per node, None for nodes the fault model does not judge
    decision_round: int | None  # last communication round consumed before deciding
    trace: Trace

    def agreed(self) -> bool:
        vals = {d for d in self.decisions if d is not None}
        return len(vals) <= 1


def run_consensus(
    routine: ConsensusRoutine,
    inputs: Sequence[int],
    faulty: Sequence[int] = (),
    adversary=None,
    seed: int = 0,
    record: str = "outputs",
) -> ConsensusOutcome:
    spec = NetworkSpec(routine.spec.n, routine.spec.f, routine.spec.fault_model, frozenset(faulty))
    proto = ConsensusProtocol(routine, inputs)
    trace = run(
        spec, proto, adversary, seed, proto.default_horizon,
        initial=inject_arbitrary_state(proto, seed, zero=True), record=record,
    )
    final = trace.round(trace.horizon)
    judged = set(trace.judged(trace.horizon))
    decisions = [final.outputs[v][0] if v in judged and final.outputs[v] else None for v in range(spec.n)]
    first = None
    for t, rec in enumerate(trace.rounds, 1):
        if all(rec.outputs[v] is not None and rec.outputs[v][0] is not None for v in judged):
            first = t - 1
            break
    return ConsensusOutcome(decisions, first, trace)
