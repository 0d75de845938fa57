"""Crash-fault constructions.

Under crash faults the counter needs no consensus at all: everyone
broadcasts its value and adopts the strict majority among what arrived (plus
one), or 0 if there is none.  The first round without a crash leaves all
surviving nodes with identical views, after which they stay in step.
"""
from __future__ import annotations

from typing import NamedTuple

from ..applications.squad import FiringSquad, FiringSquadSpec
from ..consensus.crash import MinFlood
from ..errors import ConfigurationError
from ..pulsers.build import squad_period
from ..pulsers.convert import CounterPulser
from ..pulsers.spec import CounterSpec
from ..sim.domains import IntRange
from ..sim.model import FaultModel, resilience_ok
from ..sim.protocol import Protocol
from ..sim.schema import Leaf
from ..thresholds import thresholds


class CrashCounterState(NamedTuple):
    c: int


def crash_counter_bound(n: int, f: int) -> int:
    # with a single survivor possible, f crash rounds leave nobody to disagree with
    return f + 1 if n - f <= 1 else f + 2


class CrashCounter(Protocol):
    outputs = ("counter",)

    def __init__(self, n: int, f: int, modulus: int):
        if not resilience_ok(n, f, FaultModel.CRASH):
            raise ConfigurationError(f"n={n} cannot tolerate f={f} crashes")
        if modulus < 2:
            raise ConfigurationError(f"modulus must be at least 2, got {modulus}")
        self.n, self.f = n, f
        self.modulus = modulus
        self.schema = Leaf("count", modulus)
        self.message_bound = self.schema.width
        self.name = f"crash-counter(n={n},f={f},C={modulus})"
        self.stabilisation = crash_counter_bound(n, f)
        self._fields = (("c", IntRange(0, modulus - 1)),)

    def step(self, v, s, inbox, ext=None):
        C = self.modulus
        tally: dict[int, int] = {}
        heard = 0
        for p in inbox:
            if type(p) is int and 0 <= p < C:
                tally[p] = tally.get(p, 0) + 1
                heard += 1
        if not heard:
            c = s.c  # nothing buffered at all: keep the current value
        else:
            c = 0
            for x, k in tally.items():
                if 2 * k > heard:
                    c = (x + 1) % C
                    break
        return CrashCounterState(c), [c] * self.n, (c,)

    def state_fields(self, v):
        return self._fields

    def state_type(self, v):
        return CrashCounterState


def crash_counter(n: int, f: int, modulus: int):
    proto = CrashCounter(n, f, modulus)
    return proto, CounterSpec(n, f, modulus, proto.stabilisation, proto.message_bound, FaultModel.CRASH)


def crash_consensus(n: int, f: int) -> MinFlood:
    return MinFlood(n, f)


def crash_firing_squad(n: int, f: int, period: int | None = None):
    """Firing squad from the crash counter, min-flooding consensus and a GO threshold of 1."""
    routine = MinFlood(n, f)
    period = period or squad_period(routine.rounds)
    counter = CrashCounter(n, f, period)
    pulser = CounterPulser(counter, period, period)
    pulser_bound = counter.stabilisation + period - 1
    proto = FiringSquad(pulser, routine, period, thresholds(FaultModel.CRASH, n, f).go)
    spec = FiringSquadSpec(n, f, period, pulser_bound + period, period + routine.rounds,
                           proto.message_bound, FaultModel.CRASH)
    proto.stabilisation = spec.stabilisation
    return proto, spec
