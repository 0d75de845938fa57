"""Silent wrapper around a binary consensus routine.

Two announcement rounds precede the wrapped routine.  A node announces "1"
only while it still holds input 1, and joins the wrapped routine only if
enough announcements suggest that some correct node did.  When every correct
node starts with 0, correct nodes send nothing at all.
"""
from __future__ import annotations

from typing import Any, NamedTuple

from ..errors import ConfigurationError, ConsensusAbort
from ..sim.domains import IntRange, Nested
from ..thresholds import thresholds
from .base import ConsensusRoutine, ConsensusSpec

ANNOUNCE = 1


class SilentState(NamedTuple):
    x: int
    joined: int
    trusted: int
    aborted: int
    inner: Any


class SilentConsensus(ConsensusRoutine):
    def __init__(self, inner: ConsensusRoutine):
        spec = inner.spec
        if spec.values != 2:
            raise ConfigurationError("the silent wrapper needs a binary routine")
        if ANNOUNCE >= inner.schema.size:
            raise ConfigurationError("wrapped routine's payload cannot carry an announcement")
        th = thresholds(spec.fault_model, spec.n, spec.f)
        self.inner = inner
        self.schema = inner.schema
        self.n, self.f = spec.n, spec.f
        self.keep = th.demote
        self.join = th.participate
        self.trust = th.final
        self.spec = ConsensusSpec(
            f"silent({spec.name})", spec.n, spec.f, 2, spec.rounds + 2, spec.message_bits,
            spec.fault_model, silent=True,
        )
        self._fields = (
            ("x", IntRange(0, 1)),
            ("joined", IntRange(0, 1)),
            ("trusted", IntRange(0, 1)),
            ("aborted", IntRange(0, 1)),
            ("inner", Nested(inner)),
        )
        self._blank = inner.start(0, 0)

    def start(self, v, x):
        return SilentState(1 if x else 0, 0, 0, 0, self._blank)

    def send(self, v, s, r):
        if r <= 2:
            return ANNOUNCE if s.x == 1 else None
        if not s.joined or s.aborted:
            return None
        return self.inner.send(v, s.inner, r - 2)

    def receive(self, v, s, r, inbox):
        if r <= 2:
            ones = 0
            for p in inbox:
                if p == ANNOUNCE:
                    ones += 1
            x = s.x if ones >= self.keep else 0
            if r == 1:
                return SilentState(x, 1 if ones >= self.join else 0, s.trusted, 0, s.inner)
            inner = self.inner.start(v, x) if s.joined else s.inner
            return SilentState(x, s.joined, 1 if ones >= self.trust else 0, s.aborted, inner)
        if not s.joined or s.aborted:
            return s
        try:
            inner = self.inner.receive(v, s.inner, r - 2, inbox)
        except ConsensusAbort:
            return s._replace(aborted=1)
        return s._replace(inner=inner)

    def decide(self, v, s):
        if not (s.joined and s.trusted) or s.aborted:
            return 0
        try:
            y = self.inner.decide(v, s.inner)
        except ConsensusAbort:
            return 0
        return 1 if y == 1 else 0

    def state_fields(self, v=0):
        return self._fields

    def state_type(self, v=0):
        return SilentState
