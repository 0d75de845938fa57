"""Send-omission variants: the Byzantine constructions with the benign threshold row.

Omission-faulty nodes run the protocol faithfully and only fail to deliver,
so their outputs are judged like everyone else's.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..applications.counter import counter
from ..applications.squad import firing_squad
from ..consensus import MultiValued, PhaseKing, SilentConsensus
from ..pulsers.build import build_strong_pulser
from ..sim.model import FaultModel
from ..thresholds import Thresholds, thresholds

OMISSION = FaultModel.OMISSION


@dataclass(frozen=True)
class OmissionSuite:
    n: int
    f: int
    thresholds: Thresholds

    def consensus(self) -> PhaseKing:
        return PhaseKing(self.n, self.f, OMISSION)

    def silent_consensus(self) -> SilentConsensus:
        return SilentConsensus(self.consensus())

    def multivalued(self, values: int) -> MultiValued:
        return MultiValued(self.consensus(), values)

    def pulser(self, period: int):
        return build_strong_pulser(self.n, self.f, period, fault_model=OMISSION)

    def counter(self, modulus: int):
        return counter(self.n, self.f, modulus, fault_model=OMISSION)

    def firing_squad(self, period: int | None = None):
        return firing_squad(self.n, self.f, period, fault_model=OMISSION)


def omission_suite(n: int, f: int) -> OmissionSuite:
    return OmissionSuite(n, f, thresholds(OMISSION, n, f))
