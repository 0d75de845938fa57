"""Fault-free base cases: a designated leader (node 0) drives everyone."""
from __future__ import annotations

from typing import NamedTuple

from ..errors import ConfigurationError
from ..sim.domains import IntRange
from ..sim.protocol import Protocol
from ..sim.schema import Leaf


class LeaderState(NamedTuple):
    c: int


class LeaderPulser(Protocol):
    """The leader announces every ``period`` rounds; all nodes pulse on hearing it.

    Stable from round ``period + 1``; one-bit messages, sent only on announcements.
    """

    outputs = ("pulse",)
    schema = Leaf("lead", 2)

    def __init__(self, n: int, period: int):
        if period < 1:
            raise ConfigurationError(f"period must be positive, got {period}")
        self.n = n
        self.period = period
        self.name = f"leader-pulser(n={n},period={period})"
        self.message_bound = 1
        self.stabilisation = period + 1
        self._fields = (("c", IntRange(0, period - 1)),)
        self._quiet = [None] * n
        self._announce = [1] * n
        self._yes = (1,)
        self._no = (0,)

    def step(self, v, state, inbox, ext=None):
        c = state.c
        out = self._announce if (v == 0 and c == 0) else self._quiet
        nxt = c + 1
        return (LeaderState(0 if nxt == self.period else nxt), out,
                self._yes if inbox[0] == 1 else self._no)

    def state_fields(self, v):
        return self._fields

    def state_type(self, v):
        return LeaderState


class LeaderCounter(Protocol):
    """The leader broadcasts its counter; everyone adopts leader value + 1."""

    outputs = ("counter",)

    def __init__(self, n: int, modulus: int):
        if modulus < 2:
            raise ConfigurationError(f"modulus must be at least 2, got {modulus}")
        self.n = n
        self.modulus = modulus
        self.schema = Leaf("count", modulus)
        self.name = f"leader-counter(n={n},C={modulus})"
        self.message_bound = self.schema.width
        self.stabilisation = 2
        self._fields = (("c", IntRange(0, modulus - 1)),)

    def step(self, v, state, inbox, ext=None):
        heard = inbox[0]
        c = heard + 1 if isinstance(heard, int) and 0 <= heard < self.modulus else state.c + 1
        if c == self.modulus:
            c = 0
        out = [c] * self.n if v == 0 else [None] * self.n
        return LeaderState(c), out, (c,)

    def state_fields(self, v):
        return self._fields

    def state_type(self, v):
        return LeaderState
