"""Self-stabilising firing squad on top of a strong pulser.

A node latches GO once enough GO votes arrive.  Each pulse starts a binary
consensus on the latched value; a decision of 1 makes every correct node
fire in the same round.  The pulse period must exceed the consensus
duration so each instance finishes before the next pulse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, NamedTuple

from ..consensus import MultiValued, PhaseKing
from ..consensus.base import ConsensusRoutine
from ..errors import ConfigurationError
from ..pulsers.build import build_strong_pulser, squad_period
from ..sim.domains import IntRange, Nested, OrBottom
from ..sim.model import FaultModel
from ..sim.protocol import Protocol
from ..sim.schema import Leaf, Record
from ..thresholds import thresholds

GO = Leaf("go", 2)


@dataclass(frozen=True)
class FiringSquadSpec:
    n: int
    f: int
    period: int
    stabilisation: int
    response: int
    message_bits: int
    fault_model: FaultModel = FaultModel.BYZANTINE


class SquadState(NamedTuple):
    x: int
    m: int
    cursor: Any
    inst: Any
    pulser: Any


class FiringSquad(Protocol):
    outputs = ("fire", "pulse")

    def __init__(self, pulser: Protocol, routine: ConsensusRoutine, period: int, go_votes: int):
        if period <= routine.rounds:
            raise ConfigurationError(
                f"pulse period {period} must exceed the consensus duration {routine.rounds}"
            )
        if routine.spec.values != 2:
            raise ConfigurationError("the firing squad needs a binary consensus routine")
        self.pulser = pulser
        self.routine = routine
        self.n = pulser.n
        self.period = period
        self.go_votes = go_votes
        self.message_bound = pulser.message_bound + GO.width + routine.spec.message_bits
        self.name = f"firing-squad(n={self.n},period={period})"
        self._schemas = [Record("squad", (pulser.schema_for(u), GO, routine.schema)) for u in range(self.n)]
        self.schema = self._schemas[0]
        T = routine.rounds
        self._fields = [
            (
                ("x", IntRange(0, 1)),
                ("m", IntRange(0, 1)),
                ("cursor", OrBottom(IntRange(1, T))),
                ("inst", Nested(routine, v)),
                ("pulser", Nested(pulser, v)),
            )
            for v in range(self.n)
        ]

    def schema_for(self, u):
        return self._schemas[u]

    def payload_bits(self, u, p):
        if p is None:
            return 0
        pp, go, c = p
        bits = self.pulser.payload_bits(u, pp) if pp is not None else 0
        if go is not None:
            bits += GO.width
        if c is not None:
            bits += self.routine.schema.width
        return bits

    def state_fields(self, v):
        return self._fields[v]

    def state_type(self, v):
        return SquadState

    def step(self, v, s, inbox, ext=None):
        pst, pout, po = self.pulser.step(v, s.pulser, [None if p is None else p[0] for p in inbox], None)
        pulse = po[0]
        go = 1 if ext == 1 else 0
        votes = 0
        for p in inbox:
            if p is not None and p[1] == 1:
                votes += 1
        x, m = s.x, s.m
        if votes >= self.go_votes:
            x = m = 1
        rt = self.routine
        cursor, inst = s.cursor, s.inst
        send = None
        decision = None
        if pulse == 1:
            # a fresh instance replaces any unfinished (or just finishing) one
            inst = rt.start(v, x)
            cursor = 1
            send = rt.send(v, inst, 1)
            m = 0
        elif cursor is not None:
            inst = rt.receive(v, inst, cursor, [None if p is None else p[2] for p in inbox])
            if cursor == rt.rounds:
                decision = rt.decide(v, inst)
                cursor = None
            else:
                cursor += 1
                send = rt.send(v, inst, cursor)
        fire = 0
        if decision == 1:
            fire = 1
            x = 0
        elif decision == 0 and m == 0:
            x = 0
        out = []
        last = object()
        cur = None
        for pp in pout:
            if pp is not last:
                last = pp
                cur = (pp, go, send)
            out.append(cur)
        return SquadState(x, m, cursor, inst, pst), out, (fire, pulse)


def firing_squad(n: int, f: int, period: int | None = None, consensus: ConsensusRoutine | None = None,
                 fault_model: FaultModel | str = FaultModel.BYZANTINE, family=None):
    """Returns ``(protocol, FiringSquadSpec)`` with the default phase king and pulser."""
    model = FaultModel.parse(fault_model)
    routine = consensus or PhaseKing(n, f, model)
    period = period or squad_period(routine.rounds)
    pulser, pspec = build_strong_pulser(n, f, period, family, model)
    go_votes = thresholds(model, n, f).go
    proto = FiringSquad(pulser, routine, period, go_votes)
    spec = FiringSquadSpec(n, f, period, pspec.stabilisation + period, period + routine.rounds,
                           proto.message_bound, model)
    proto.stabilisation = spec.stabilisation
    return proto, spec


class GoWindow:
    """Stretch GO inputs: ``GO'(v, t) = 1`` if ``GO(v, t')`` was 1 for some ``t - window < t' <= t``.

    Feeding the squad ``GO'`` lets GO signals that reach different nodes up to
    ``window - 1`` rounds apart count as simultaneous.
    """

    def __init__(self, window: int):
        if window < 1:
            raise ConfigurationError(f"window must be positive, got {window}")
        self.window = window

    def __call__(self, go: Callable[[int, int], int]) -> Callable[[int, int], int]:
        w = self.window

        def windowed(t: int, v: int) -> int:
            return 1 if any(go(u, v) == 1 for u in range(max(1, t - w + 1), t + 1)) else 0

        return windowed


def go_window_adapter(window: int) -> GoWindow:
    return GoWindow(window)


def go_schedule(events) -> Callable[[int, int], int]:
    """GO function from ``{round: nodes}`` or an iterable of ``(round, node)`` pairs."""
    table: dict[int, set[int]] = {}
    items = events.items() if isinstance(events, dict) else None
    if items is not None:
        for t, nodes in items:
            table.setdefault(int(t), set()).update(nodes)
    else:
        for t, v in events:
            table.setdefault(int(t), set()).add(v)

    def go(t: int, v: int) -> int:
        return 1 if v in table.get(t, ()) else 0

    go.table = table  # type: ignore[attr-defined]
    return go
