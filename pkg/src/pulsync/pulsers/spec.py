from __future__ import annotations

from dataclasses import dataclass

from ..sim.model import FaultModel


@dataclass(frozen=True)
class PulserSpec:
    """Guarantees of a strong pulser: pulses every ``period`` rounds from round ``stabilisation`` on."""

    n: int
    f: int
    period: int
    stabilisation: int
    message_bits: int
    fault_model: FaultModel = FaultModel.BYZANTINE


@dataclass(frozen=True)
class WeakPulserSpec:
    """Guarantees of a weak pulser: a good pulse (``gap - 1`` quiet rounds after it) by ``stabilisation``."""

    n: int
    f: int
    gap: int
    stabilisation: int
    message_bits: int
    fault_model: FaultModel = FaultModel.BYZANTINE


@dataclass(frozen=True)
class CounterSpec:
    n: int
    f: int
    modulus: int
    stabilisation: int
    message_bits: int
    fault_model: FaultModel = FaultModel.BYZANTINE
