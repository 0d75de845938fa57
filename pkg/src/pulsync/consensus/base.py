from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Sequence

from ..errors import ConfigurationError
from ..sim.domains import random_state, zero_state
from ..sim.model import FaultModel, resilience_ok
from ..sim.schema import Leaf


@dataclass(frozen=True)
class ConsensusSpec:
    name: str
    n: int
    f: int
    values: int          # inputs and outputs are 0..values-1
    rounds: int          # communication rounds until the decision
    message_bits: int    # per-link bits in any round
    fault_model: FaultModel = FaultModel.BYZANTINE
    silent: bool = False


class ConsensusRoutine:
    """A synchronous consensus algorithm driven one round at a time by its caller.

    The caller keeps the round cursor.  For an instance started with
    :meth:`start` it broadcasts ``send(v, s, 1)``; after round ``r``'s
    messages arrive it calls ``receive(v, s, r, inbox)`` and, unless
    ``r == rounds``, broadcasts ``send(v, s, r + 1)``.  After processing the
    last round, :meth:`decide` gives the output.  Routines must accept any
    state drawn from their descriptors and any payloads in ``inbox``.
    """

    spec: ConsensusSpec
    schema: Leaf

    @property
    def rounds(self) -> int:
        return self.spec.rounds

    def start(self, v: int, x: int):
        raise NotImplementedError

    def send(self, v: int, state, r: int):
        raise NotImplementedError

    def receive(self, v: int, state, r: int, inbox: Sequence[Any]):
        raise NotImplementedError

    def decide(self, v: int, state) -> int:
        raise NotImplementedError

    def state_fields(self, v: int = 0):
        raise NotImplementedError

    def state_type(self, v: int = 0):
        raise NotImplementedError

    def random_state(self, v: int, rng: random.Random):
        return random_state(self, v, rng)

    def zero_state(self, v: int = 0):
        return zero_state(self, v)

    @property
    def name(self) -> str:
        return self.spec.name


def check_resilience(n: int, f: int, model: FaultModel) -> None:
    if not resilience_ok(n, f, model):
        raise ConfigurationError(f"n={n} cannot tolerate f={f} {FaultModel.parse(model).value} faults")
