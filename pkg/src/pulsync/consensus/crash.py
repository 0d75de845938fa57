from __future__ import annotations

from typing import NamedTuple

from ..sim.domains import IntRange
from ..sim.model import FaultModel
from ..sim.schema import Leaf
from .base import ConsensusRoutine, ConsensusSpec, check_resilience


class FloodState(NamedTuple):
    est: int


class MinFlood(ConsensusRoutine):
    """Crash-tolerant binary consensus: flood the minimum for f+1 rounds."""

    schema = Leaf("est", 2)

    def __init__(self, n: int, f: int):
        check_resilience(n, f, FaultModel.CRASH)
        self.n, self.f = n, f
        self.spec = ConsensusSpec("min-flood", n, f, 2, f + 1, 1, FaultModel.CRASH)

    def start(self, v, x):
        return FloodState(1 if x else 0)

    def send(self, v, s, r):
        return s.est

    def receive(self, v, s, r, inbox):
        if s.est == 0:
            return s
        for p in inbox:
            if p == 0:
                return FloodState(0)
        return s

    def decide(self, v, s):
        return s.est

    def state_fields(self, v=0):
        return (("est", IntRange(0, 1)),)

    def state_type(self, v=0):
        return FloodState
