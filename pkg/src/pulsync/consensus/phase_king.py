"""Binary phase king: f+1 phases of three rounds each, 2-bit messages.

Values on the wire are 0, 1 or 2, where 2 stands for "no strong opinion".
Phase ``k`` is led by node ``k``.  With ``omission=True`` the adoption
threshold drops to a single vote, which lets faulty-but-honest nodes agree too
and needs only ``n > 2f``.
"""
from __future__ import annotations

from typing import NamedTuple

from ..sim.domains import IntRange
from ..sim.model import FaultModel
from ..sim.schema import Leaf
from ..thresholds import thresholds
from .base import ConsensusRoutine, ConsensusSpec, check_resilience

UNDECIDED = 2


class PhaseKingState(NamedTuple):
    x: int
    proposal: int
    strong: int


_FIELDS = (("x", IntRange(0, 1)), ("proposal", IntRange(0, 2)), ("strong", IntRange(0, 1)))


class PhaseKing(ConsensusRoutine):
    schema = Leaf("pk", 3)

    def __init__(self, n: int, f: int, fault_model: FaultModel | str = FaultModel.BYZANTINE):
        model = FaultModel.parse(fault_model)
        check_resilience(n, f, model)
        th = thresholds(model, n, f)
        self.n, self.f = n, f
        self.quorum = th.quorum
        self.adopt = th.king_adopt
        label = "phase-king" if model is FaultModel.BYZANTINE else "phase-king[omission]"
        self.spec = ConsensusSpec(label, n, f, 2, 3 * (f + 1), 2, model, silent=False)

    def start(self, v, x):
        return PhaseKingState(1 if x else 0, UNDECIDED, 0)

    def send(self, v, s, r):
        sub = (r - 1) % 3
        if sub == 0:
            return s.x
        if sub == 1:
            return s.proposal
        return s.x if v == (r - 1) // 3 else None

    def receive(self, v, s, r, inbox):
        sub = (r - 1) % 3
        if sub == 2:
            if s.strong:
                return s
            king = inbox[(r - 1) // 3]
            if king == 0 or king == 1:
                return PhaseKingState(king, s.proposal, s.strong)
            return s
        c0 = c1 = 0
        for p in inbox:
            if p == 0:
                c0 += 1
            elif p == 1:
                c1 += 1
        if sub == 0:
            q = self.quorum
            prop = 0 if c0 >= q else 1 if c1 >= q else UNDECIDED
            return PhaseKingState(s.x, prop, 0)
        z, c = (0, c0) if c0 >= c1 else (1, c1)
        x = z if c >= self.adopt else s.x
        return PhaseKingState(x, s.proposal, 1 if c >= self.quorum else 0)

    def decide(self, v, s):
        return s.x

    def state_fields(self, v=0):
        return _FIELDS

    def state_type(self, v=0):
        return PhaseKingState
