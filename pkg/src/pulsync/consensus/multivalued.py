"""Multivalued consensus from a binary routine.

Values in ``0..L-1`` are broadcast bit-serially (most significant bit first)
over ``k = ceil(log2 L)`` rounds, twice: first every node's input, then the
candidate value of those nodes that saw one value from a quorum.  The binary
routine then decides whether the candidate can be trusted.  Output is the
candidate on 1 and 0 otherwise.
"""
from __future__ import annotations

from typing import Any, NamedTuple

from ..errors import ConfigurationError
from ..sim.domains import IntRange, Nested, OrBottom, Vector
from ..thresholds import thresholds
from .base import ConsensusRoutine, ConsensusSpec

MISSING = -1


class MultiState(NamedTuple):
    x: int
    first: tuple       # per-sender value being assembled, MISSING once a bit is lost
    candidate: Any     # value seen from a quorum in the first pass, or None
    second: tuple
    fallback: Any      # value with enough support in the second pass, or None
    inner: Any


def value_bits(values: int) -> int:
    return max(1, (values - 1).bit_length())


class MultiValued(ConsensusRoutine):
    def __init__(self, inner: ConsensusRoutine, values: int):
        spec = inner.spec
        if values < 2:
            raise ConfigurationError(f"need at least two values, got {values}")
        if spec.values != 2:
            raise ConfigurationError("multivalued reduction needs a binary routine")
        th = thresholds(spec.fault_model, spec.n, spec.f)
        self.inner = inner
        self.schema = inner.schema
        self.n, self.f = spec.n, spec.f
        self.values = values
        self.k = value_bits(values)
        self.quorum = th.quorum
        self.support = th.fallback
        self.spec = ConsensusSpec(
            f"multi({spec.name},{values})", spec.n, spec.f, values, 2 * self.k + spec.rounds,
            max(spec.message_bits, 1), spec.fault_model, silent=False,
        )
        acc = Vector(IntRange(MISSING, (1 << self.k) - 1), spec.n)
        self._fields = (
            ("x", IntRange(0, values - 1)),
            ("first", acc),
            ("candidate", OrBottom(IntRange(0, values - 1))),
            ("second", acc),
            ("fallback", OrBottom(IntRange(0, values - 1))),
            ("inner", Nested(inner)),
        )
        self._empty = (MISSING,) * spec.n
        self._blank = inner.start(0, 0)

    def start(self, v, x):
        if not 0 <= x < self.values:
            x = 0
        return MultiState(x, self._empty, None, self._empty, None, self._blank)

    def send(self, v, s, r):
        k = self.k
        if r <= k:
            return (s.x >> (k - r)) & 1
        if r <= 2 * k:
            c = s.candidate
            return None if c is None else (c >> (2 * k - r)) & 1
        return self.inner.send(v, s.inner, r - 2 * k)

    def _collect(self, acc, r_local, inbox):
        if r_local == 1:
            return tuple(p if (p == 0 or p == 1) else MISSING for p in inbox)
        return tuple(
            MISSING if (a < 0 or not (p == 0 or p == 1)) else (a << 1) | p
            for a, p in zip(acc, inbox)
        )

    def _tally(self, acc):
        counts: dict[int, int] = {}
        limit = self.values
        for a in acc:
            if 0 <= a < limit:
                counts[a] = counts.get(a, 0) + 1
        return counts

    def receive(self, v, s, r, inbox):
        k = self.k
        if r <= k:
            first = self._collect(s.first, r, inbox)
            cand = s.candidate
            if r == k:
                cand = None
                for value, c in self._tally(first).items():
                    if c >= self.quorum:
                        cand = value
            return s._replace(first=first, candidate=cand)
        if r <= 2 * k:
            second = self._collect(s.second, r - k, inbox)
            if r < 2 * k:
                return s._replace(second=second)
            counts = self._tally(second)
            strong = any(c >= self.quorum for c in counts.values())
            best = None
            for value, c in sorted(counts.items()):
                if c >= self.support and (best is None or c > counts[best]):
                    best = value
            inner = self.inner.start(v, 1 if strong else 0)
            return MultiState(s.x, s.first, s.candidate, second, best, inner)
        return s._replace(inner=self.inner.receive(v, s.inner, r - 2 * k, inbox))

    def decide(self, v, s):
        y = self.inner.decide(v, s.inner)
        if y == 1 and s.fallback is not None:
            return s.fallback
        return 0

    def state_fields(self, v=0):
        return self._fields

    def state_type(self, v=0):
        return MultiState
