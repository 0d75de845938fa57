from __future__ import annotations

import re

from ..errors import ConfigurationError
from ..sim.model import FaultModel
from .base import ConsensusRoutine, ConsensusSpec
from .crash import MinFlood
from .multivalued import MultiValued
from .phase_king import PhaseKing
from .runner import ConsensusOutcome, ConsensusProtocol, run_consensus
from .silent import SilentConsensus


def phase_king(n: int, f: int, fault_model=FaultModel.BYZANTINE) -> PhaseKing:
    return PhaseKing(n, f, fault_model)


def silent_consensus(inner: ConsensusRoutine) -> SilentConsensus:
    return SilentConsensus(inner)


def multivalued_consensus(inner: ConsensusRoutine, values: int) -> MultiValued:
    return MultiValued(inner, values)


_BINARY = {"phase-king": phase_king, "min-flood": lambda n, f, model=None: MinFlood(n, f)}


def from_name(name: str, n: int, f: int, fault_model=FaultModel.BYZANTINE) -> ConsensusRoutine:
    """Build a routine from names like ``phase-king``, ``silent(phase-king)`` or ``multi(phase-king,8)``."""
    name = name.strip()
    m = re.fullmatch(r"silent\((.+)\)", name)
    if m:
        return SilentConsensus(from_name(m.group(1), n, f, fault_model))
    m = re.fullmatch(r"multi\((.+),\s*(\d+)\)", name)
    if m:
        return MultiValued(from_name(m.group(1), n, f, fault_model), int(m.group(2)))
    if name in _BINARY:
        return _BINARY[name](n, f, fault_model)
    raise ConfigurationError(f"unknown consensus routine {name!r}")


__all__ = [
    "ConsensusOutcome", "ConsensusProtocol", "ConsensusRoutine", "ConsensusSpec", "MinFlood",
    "MultiValued", "PhaseKing", "SilentConsensus", "from_name", "multivalued_consensus",
    "phase_king", "run_consensus", "silent_consensus",
]
