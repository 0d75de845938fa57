from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import ConfigurationError

NodeId = int


class FaultModel(str, Enum):
    BYZANTINE = "byzantine"
    CRASH = "crash"
    OMISSION = "send_omission"

    @classmethod
    def parse(cls, value: "FaultModel | str") -> "FaultModel":
        if isinstance(value, FaultModel):
            return value
        aliases = {"omission": cls.OMISSION, "send-omission": cls.OMISSION}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise ConfigurationError(f"unknown fault model {value!r}") from None


def resilience_ok(n: int, f: int, model: FaultModel) -> bool:
    """Whether ``n`` nodes can tolerate ``f`` faults under ``model``."""
    if n < 1 or f < 0:
        return False
    if model is FaultModel.BYZANTINE:
        return n > 3 * f
    if model is FaultModel.OMISSION:
        return n > 2 * f
    return n > f


@dataclass(frozen=True)
class NetworkSpec:
    n: int
    f: int
    fault_model: FaultModel = FaultModel.BYZANTINE
    faulty: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "fault_model", FaultModel.parse(self.fault_model))
        object.__setattr__(self, "faulty", frozenset(self.faulty))
        if self.n < 1:
            raise ConfigurationError(f"need at least one node, got n={self.n}")
        if not resilience_ok(self.n, self.f, self.fault_model):
            raise ConfigurationError(
                f"n={self.n} cannot tolerate f={self.f} {self.fault_model.value} faults"
            )
        if len(self.faulty) > self.f:
            raise ConfigurationError(f"{len(self.faulty)} faulty nodes exceed f={self.f}")
        bad = [v for v in self.faulty if not 0 <= v < self.n]
        if bad:
            raise ConfigurationError(f"faulty ids out of range: {sorted(bad)}")

    @property
    def nodes(self) -> range:
        return range(self.n)

    @property
    def correct(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if v not in self.faulty)

    def with_faulty(self, faulty) -> "NetworkSpec":
        return NetworkSpec(self.n, self.f, self.fault_model, frozenset(faulty))
