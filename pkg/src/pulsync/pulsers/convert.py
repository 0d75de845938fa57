from __future__ import annotations

from typing import Any, NamedTuple

from ..errors import ConfigurationError
from ..sim.domains import IntRange, Nested
from ..sim.protocol import Protocol


class CounterPulser(Protocol):
    """Pulse whenever an underlying counter is a multiple of ``period``."""

    outputs = ("pulse", "counter")

    def __init__(self, counter: Protocol, modulus: int, period: int, channel: str = "counter"):
        if period < 1 or modulus % period:
            raise ConfigurationError(f"period {period} must divide the counter modulus {modulus}")
        self.inner = counter
        self.n = counter.n
        self.period = period
        self.schema = counter.schema
        self.message_bound = counter.message_bound
        self.name = f"pulser({counter.name},period={period})"
        self._k = counter.outputs.index(channel)

    def schema_for(self, u):
        return self.inner.schema_for(u)

    def payload_bits(self, u, payload):
        return self.inner.payload_bits(u, payload)

    def step(self, v, state, inbox, ext=None):
        st, out, o = self.inner.step(v, state, inbox, ext)
        c = o[self._k]
        return st, out, (1 if c % self.period == 0 else 0, c)

    def state_fields(self, v):
        return self.inner.state_fields(v)

    def state_type(self, v):
        return self.inner.state_type(v)


class PulseCountState(NamedTuple):
    c: int
    inner: Any


class PulserCounter(Protocol):
    """Count rounds since the last pulse, modulo ``modulus`` (which must divide the period)."""

    outputs = ("counter", "pulse")

    def __init__(self, pulser: Protocol, period: int, modulus: int):
        if modulus < 1 or period % modulus:
            raise ConfigurationError(f"modulus {modulus} must divide the pulse period {period}")
        self.inner = pulser
        self.n = pulser.n
        self.modulus = modulus
        self.schema = pulser.schema
        self.message_bound = pulser.message_bound
        self.name = f"counter({pulser.name},C={modulus})"

    def schema_for(self, u):
        return self.inner.schema_for(u)

    def payload_bits(self, u, payload):
        return self.inner.payload_bits(u, payload)

    def step(self, v, state, inbox, ext=None):
        st, out, o = self.inner.step(v, state.inner, inbox, ext)
        c = 0 if o[0] == 1 else (state.c + 1) % self.modulus
        return PulseCountState(c, st), out, (c, o[0])

    def state_fields(self, v):
        return (("c", IntRange(0, self.modulus - 1)), ("inner", Nested(self.inner, v)))

    def state_type(self, v):
        return PulseCountState


def counter_to_strong_pulser(counter: Protocol, modulus: int, period: int, stabilisation: int,
                             channel: str = "counter"):
    """Returns the pulser and its stabilisation bound (``stabilisation + period - 1``)."""
    return CounterPulser(counter, modulus, period, channel), stabilisation + period - 1


def strong_pulser_to_counter(pulser: Protocol, period: int, modulus: int, stabilisation: int):
    """Returns the counter and its stabilisation bound (unchanged)."""
    return PulserCounter(pulser, period, modulus), stabilisation
