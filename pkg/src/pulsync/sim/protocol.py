from __future__ import annotations

import random
from typing import Any, Sequence

from .domains import random_state, zero_state
from .schema import Schema

Inbox = Sequence[Any]
Outbox = list


class Protocol:
    """A deterministic per-node transition rule for synchronous rounds.

    Subclasses implement :meth:`step`.  In round ``t`` node ``v`` is handed the
    state it ended round ``t-1`` with and the payloads delivered to it in round
    ``t-1`` (``inbox[u]`` came from ``u``; ``None`` means nothing arrived).  It
    returns its new state, one payload per recipient, and a tuple of outputs
    named by :attr:`outputs`.  Nodes never learn the global round number.
    """

    name: str = "protocol"
    n: int
    outputs: tuple[str, ...] = ()
    message_bound: int = 0
    schema: Schema

    def step(self, v: int, state: Any, inbox: Inbox, ext: Any = None):
        raise NotImplementedError

    # -- payloads --------------------------------------------------------
    def schema_for(self, u: int) -> Schema:
        return self.schema

    def payload_bits(self, u: int, payload: Any) -> int:
        return self.schema_for(u).bits(payload)

    # -- states ----------------------------------------------------------
    def state_fields(self, v: int):
        raise NotImplementedError

    def state_type(self, v: int):
        raise NotImplementedError

    def random_state(self, v: int, rng: random.Random):
        return random_state(self, v, rng)

    def zero_state(self, v: int):
        return zero_state(self, v)

    def describe(self) -> dict:
        return {"name": self.name, "n": self.n, "message_bound": self.message_bound}


def broadcast(n: int, payload: Any) -> list:
    return [payload] * n


def per_recipient(n: int, members: Sequence[int], inside: Any, outside: Any) -> list:
    out = [outside] * n
    for w in members:
        out[w] = inside
    return out
