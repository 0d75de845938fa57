from __future__ import annotations

from typing import Any, NamedTuple

from ..consensus.base import ConsensusRoutine
from ..errors import ConfigurationError
from ..sim.domains import IntRange, Nested, OrBottom
from ..sim.protocol import Protocol
from ..sim.schema import Record


class StrongState(NamedTuple):
    c: int
    cursor: Any
    inst: Any
    weak: Any


class StrongPulser(Protocol):
    """Strong pulser (and ``period``-counter) driven by a weak pulser.

    Each node keeps a counter modulo ``period`` and pulses when it wraps to 0.
    Every weak pulse starts a multivalued consensus on the counter value; the
    decision, advanced by the instance's duration, overwrites the counter.
    The decision is applied before a weak pulse in the same round starts the
    next instance.
    """

    outputs = ("pulse", "counter")

    def __init__(self, weak: Protocol, routine: ConsensusRoutine, period: int):
        if period < 2:
            raise ConfigurationError(f"period must be at least 2, got {period}")
        if routine.spec.values != period:
            raise ConfigurationError("consensus must agree on values 0..period-1")
        self.weak = weak
        self.routine = routine
        self.n = weak.n
        self.f = getattr(weak, "f", 0)
        self.period = period
        self.message_bound = weak.message_bound + routine.spec.message_bits
        self.name = f"strong-pulser(n={self.n},f={self.f},period={period})"
        self._schemas = [Record("strong", (weak.schema_for(u), routine.schema)) for u in range(self.n)]
        self.schema = self._schemas[0]
        T = routine.rounds
        self._fields = [
            (
                ("c", IntRange(0, period - 1)),
                ("cursor", OrBottom(IntRange(1, T))),
                ("inst", Nested(routine, v)),
                ("weak", Nested(weak, v)),
            )
            for v in range(self.n)
        ]
        self._pulse = ((1, 0),)

    def schema_for(self, u):
        return self._schemas[u]

    def payload_bits(self, u, p):
        if p is None:
            return 0
        w, c = p
        bits = self.weak.payload_bits(u, w) if w is not None else 0
        return bits + (self.routine.schema.width if c is not None else 0)

    def state_fields(self, v):
        return self._fields[v]

    def state_type(self, v):
        return StrongState

    def step(self, v, s, inbox, ext=None):
        wst, wout, wo = self.weak.step(v, s.weak, [None if p is None else p[0] for p in inbox], None)
        rt = self.routine
        period = self.period
        c = s.c
        out_c = c
        cursor, inst = s.cursor, s.inst
        send = None
        if cursor is not None:
            inst = rt.receive(v, inst, cursor, [None if p is None else p[1] for p in inbox])
            if cursor == rt.rounds:
                c = (rt.decide(v, inst) + rt.rounds) % period
                cursor = None
            else:
                cursor += 1
                send = rt.send(v, inst, cursor)
        pulse = 1 if c == 0 else 0
        out_c = c
        if wo[0] == 1:
            inst = rt.start(v, c)
            cursor = 1
            send = rt.send(v, inst, 1)
        nxt = c + 1
        state = StrongState(0 if nxt == period else nxt, cursor, inst, wst)
        out = []
        last = object()
        cur = None
        for wp in wout:
            if wp is not last:
                last = wp
                cur = (wp, send)
            out.append(cur)
        return state, out, (pulse, out_c)
