"""Payload schemas.

A payload is either ``None`` (nothing sent), an ``int`` leaf, or a tuple whose
entries follow a :class:`Record`.  Entries may be ``None`` when a field is not
sent on a given link.  Bit counts are the sum of the widths of present leaves.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Union


@dataclass(frozen=True)
class Leaf:
    name: str
    size: int  # values are 0..size-1
    width: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "width", max(1, (self.size - 1).bit_length()))

    def bits(self, p: Any) -> int:
        return 0 if p is None else self.width

    def valid(self, p: Any) -> bool:
        return type(p) is int and 0 <= p < self.size

    def sanitize(self, p: Any):
        return p if self.valid(p) else None

    def random(self, rng: random.Random, p_absent: float = 0.2):
        if rng.random() < p_absent:
            return None
        return rng.randrange(self.size)

    def fill(self, value: int):
        return min(value, self.size - 1)

    def flip(self, p: Any):
        return None if p is None else self.size - 1 - p

    def claim(self, p: Any, names: frozenset, value: int):
        return self.fill(value) if self.name in names else p

    def max_bits(self) -> int:
        return self.width

    def leaf_names(self) -> set[str]:
        return {self.name}


@dataclass(frozen=True)
class Record:
    name: str
    fields: tuple["Schema", ...]

    def bits(self, p: Any) -> int:
        if p is None:
            return 0
        total = 0
        for sub, x in zip(self.fields, p):
            if x is not None:
                total += sub.bits(x)
        return total

    def valid(self, p: Any) -> bool:
        return (
            type(p) is tuple
            and len(p) == len(self.fields)
            and all(x is None or sub.valid(x) for sub, x in zip(self.fields, p))
        )

    def sanitize(self, p: Any):
        if p is None:
            return None
        if type(p) is not tuple or len(p) != len(self.fields):
            return None
        return tuple(None if x is None else sub.sanitize(x) for sub, x in zip(self.fields, p))

    def random(self, rng: random.Random, p_absent: float = 0.2):
        if rng.random() < p_absent / 2:
            return None
        return tuple(sub.random(rng, p_absent) for sub in self.fields)

    def fill(self, value: int):
        return tuple(sub.fill(value) for sub in self.fields)

    def flip(self, p: Any):
        if p is None:
            return None
        return tuple(None if x is None else sub.flip(x) for sub, x in zip(self.fields, p))

    def claim(self, p: Any, names: frozenset, value: int):
        if p is None:
            return None
        return tuple(
            x if x is None and not isinstance(sub, Leaf) else sub.claim(x, names, value)
            for sub, x in zip(self.fields, p)
        )

    def max_bits(self) -> int:
        return sum(sub.max_bits() for sub in self.fields)

    def leaf_names(self) -> set[str]:
        out: set[str] = set()
        for sub in self.fields:
            out |= sub.leaf_names()
        return out


Schema = Union[Leaf, Record]


def payload_to_json(p: Any):
    if isinstance(p, tuple):
        return [payload_to_json(x) for x in p]
    return p


def payload_from_json(p: Any):
    if isinstance(p, list):
        return tuple(payload_from_json(x) for x in p)
    return p


def bits_of(schema: Schema, payloads: Iterable[Any]) -> int:
    """Largest bit count among ``payloads`` (0 if all are absent)."""
    return max((schema.bits(p) for p in payloads), default=0)
