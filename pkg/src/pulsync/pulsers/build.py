"""Recursive construction of strong pulsers and its bound arithmetic.

:func:`plan_strong_pulser` does the arithmetic only, producing the whole
construction tree with the gap, periods, cooldown, consensus choices and
bounds at every level.  :func:`build_strong_pulser` instantiates a plan.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

from ..consensus import MultiValued, PhaseKing, SilentConsensus
from ..consensus.base import ConsensusRoutine
from ..errors import ConfigurationError
from ..sim.model import FaultModel, resilience_ok
from ..sim.protocol import Protocol
from ..thresholds import thresholds
from .leader import LeaderPulser
from .spec import PulserSpec, WeakPulserSpec
from .strong import StrongPulser
from .weak import BOOK_BITS, WeakPulser, split_nodes

Family = Callable[[int, int], ConsensusRoutine]


def default_family(model: FaultModel | str = FaultModel.BYZANTINE) -> Family:
    model = FaultModel.parse(model)

    def family(n: int, f: int) -> ConsensusRoutine:
        return PhaseKing(n, f, model)

    family.label = "phase-king"  # type: ignore[attr-defined]
    return family


@dataclass(frozen=True)
class WeakPlan:
    n: int
    f: int
    gap: int
    cooldown: int
    split: tuple[int, int]
    block_faults: tuple[int, int]
    blocks: tuple["PulserPlan", "PulserPlan"]
    consensus: str
    consensus_rounds: int
    consensus_bits: int
    stabilisation: int
    message_bits: int


@dataclass(frozen=True)
class PulserPlan:
    kind: str            # "leader" or "strong"
    n: int
    f: int
    period: int
    fault_model: str
    stabilisation: int
    message_bits: int
    consensus: str | None = None
    consensus_rounds: int | None = None
    consensus_bits: int | None = None
    weak: WeakPlan | None = None

    @property
    def depth(self) -> int:
        if self.weak is None:
            return 0
        return 1 + max(b.depth for b in self.weak.blocks)

    def as_dict(self) -> dict:
        return asdict(self)

    def spec(self) -> PulserSpec:
        return PulserSpec(self.n, self.f, self.period, self.stabilisation, self.message_bits,
                          FaultModel(self.fault_model))


def _label(family: Family) -> str:
    return getattr(family, "label", getattr(family, "__name__", "custom"))


def weak_gap(n: int, f: int, period: int, family: Family) -> tuple[int, ConsensusRoutine, ConsensusRoutine]:
    base = family(n, f)
    multi = MultiValued(base, period)
    silent = SilentConsensus(base)
    return max(multi.rounds, silent.rounds + 2), multi, silent


def plan_strong_pulser(n: int, f: int, period: int, family: Family | None = None,
                       fault_model: FaultModel | str = FaultModel.BYZANTINE) -> PulserPlan:
    model = FaultModel.parse(fault_model)
    family = family or default_family(model)
    if not resilience_ok(n, f, model):
        raise ConfigurationError(f"n={n} cannot tolerate f={f} {model.value} faults")
    if period < 2:
        raise ConfigurationError(f"period must be at least 2, got {period}")
    if f == 0:
        return PulserPlan("leader", n, 0, period, model.value, period + 1, 1)
    gap, multi, silent = weak_gap(n, f, period, family)
    n0, n1, f0, f1 = split_nodes(n, f, model)
    b0 = plan_strong_pulser(n0, f0, 2 * gap, family, model)
    b1 = plan_strong_pulser(n1, f1, 3 * gap, family, model)
    longest = max(b0.period, b1.period)
    cooldown = longest + gap + 2
    weak_T = max(b0.stabilisation, b1.stabilisation) + 2 * cooldown + silent.rounds + 1 + longest
    weak_M = max(b0.message_bits, b1.message_bits) + BOOK_BITS + 2 * silent.spec.message_bits
    weak = WeakPlan(n, f, gap, cooldown, (n0, n1), (f0, f1), (b0, b1), silent.name,
                    silent.rounds, silent.spec.message_bits, weak_T, weak_M)
    return PulserPlan(
        "strong", n, f, period, model.value,
        weak_T + multi.rounds + period, weak_M + multi.spec.message_bits,
        multi.name, multi.rounds, multi.spec.message_bits, weak,
    )


def compute_bounds(n: int, f: int, period: int, family: Family | None = None,
                   fault_model: FaultModel | str = FaultModel.BYZANTINE) -> PulserPlan:
    return plan_strong_pulser(n, f, period, family, fault_model)


def _instantiate(plan: PulserPlan, family: Family) -> Protocol:
    if plan.kind == "leader":
        proto = LeaderPulser(plan.n, plan.period)
    else:
        weak = _instantiate_weak(plan.weak, family, FaultModel(plan.fault_model))
        proto = StrongPulser(weak, MultiValued(family(plan.n, plan.f), plan.period), plan.period)
    proto.plan = plan
    proto.stabilisation = plan.stabilisation
    return proto


def _instantiate_weak(wp: WeakPlan, family: Family, model: FaultModel) -> WeakPulser:
    blocks = tuple(_instantiate(b, family) for b in wp.blocks)
    weak = WeakPulser(wp.n, wp.f, wp.gap, blocks, wp.block_faults,
                      SilentConsensus(family(wp.n, wp.f)), model)
    weak.plan = wp
    weak.stabilisation = wp.stabilisation
    if weak.cooldown != wp.cooldown or weak.message_bound != wp.message_bits:
        raise AssertionError("weak pulser disagrees with its plan")
    return weak


def build_strong_pulser(n: int, f: int, period: int, family: Family | None = None,
                        fault_model: FaultModel | str = FaultModel.BYZANTINE):
    """Returns ``(protocol, PulserSpec)``; ``protocol.plan`` holds the construction tree."""
    model = FaultModel.parse(fault_model)
    family = family or default_family(model)
    plan = plan_strong_pulser(n, f, period, family, model)
    proto = _instantiate(plan, family)
    if proto.message_bound != plan.message_bits:
        raise AssertionError("pulser disagrees with its plan")
    return proto, plan.spec()


def build_weak_pulser(n: int, f: int, period: int, family: Family | None = None,
                      fault_model: FaultModel | str = FaultModel.BYZANTINE):
    """The weak pulser used inside the strong pulser of the given parameters."""
    model = FaultModel.parse(fault_model)
    family = family or default_family(model)
    plan = plan_strong_pulser(n, f, period, family, model)
    if plan.weak is None:
        raise ConfigurationError("f=0 pulsers have no weak layer")
    wp = plan.weak
    weak = _instantiate_weak(wp, family, model)
    return weak, WeakPulserSpec(n, f, wp.gap, wp.stabilisation, wp.message_bits, model)


def squad_period(consensus_rounds: int) -> int:
    """Smallest power of two strictly above the consensus duration."""
    p = 1
    while p <= consensus_rounds:
        p *= 2
    return p


def threshold_table(model: FaultModel | str, n: int, f: int) -> dict:
    return thresholds(FaultModel.parse(model), n, f).as_dict()
