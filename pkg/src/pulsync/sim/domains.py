"""State descriptors.

Every protocol declares, for each node, the fields of its state together
with a finite domain per field.  The engine uses these descriptors to draw
arbitrary initial states, to build the canonical all-zero state and to
enumerate fields when checking coverage.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterator, Protocol as _Proto

from ..errors import ConfigurationError


class Domain:
    def sample(self, rng: random.Random) -> Any:
        raise NotImplementedError

    def zero(self) -> Any:
        raise NotImplementedError

    def contains(self, value: Any) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class IntRange(Domain):
    """Integers ``lo..hi`` inclusive."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ConfigurationError(f"empty integer range {self.lo}..{self.hi}")

    def sample(self, rng):
        return rng.randint(self.lo, self.hi)

    def zero(self):
        return 0 if self.lo <= 0 <= self.hi else self.lo

    def contains(self, value):
        return isinstance(value, int) and self.lo <= value <= self.hi


@dataclass(frozen=True)
class OrBottom(Domain):
    """Either a value of ``inner`` or ``None`` (bottom).  Zero is bottom."""

    inner: Domain

    def sample(self, rng):
        # bottom gets a fair share so idle and busy components both show up
        return None if rng.random() < 0.25 else self.inner.sample(rng)

    def zero(self):
        return None

    def contains(self, value):
        return value is None or self.inner.contains(value)


@dataclass(frozen=True)
class Vector(Domain):
    inner: Domain
    length: int

    def sample(self, rng):
        return tuple(self.inner.sample(rng) for _ in range(self.length))

    def zero(self):
        return tuple(self.inner.zero() for _ in range(self.length))

    def contains(self, value):
        return (
            isinstance(value, tuple)
            and len(value) == self.length
            and all(self.inner.contains(x) for x in value)
        )


class _HasState(_Proto):
    def state_fields(self, v: int): ...

    def state_type(self, v: int): ...


@dataclass(frozen=True, eq=False)
class Nested(Domain):
    """The complete state of a sub-component, as seen by local node ``v``."""

    owner: Any
    v: int = 0

    def sample(self, rng):
        return random_state(self.owner, self.v, rng)

    def zero(self):
        return zero_state(self.owner, self.v)

    def contains(self, value):
        fields = self.owner.state_fields(self.v)
        if not isinstance(value, tuple) or len(value) != len(fields):
            return False
        return all(d.contains(x) for (_, d), x in zip(fields, value))


@dataclass(frozen=True)
class Unbounded(Domain):
    """Marks a field that has no finite domain; arbitrary states cannot be drawn."""

    what: str = "value"

    def sample(self, rng):
        raise ConfigurationError(f"state field {self.what!r} has no bounded domain")

    def zero(self):
        raise ConfigurationError(f"state field {self.what!r} has no bounded domain")

    def contains(self, value):
        return True


def random_state(owner: _HasState, v: int, rng: random.Random):
    cls = owner.state_type(v)
    return cls(*(d.sample(rng) for _, d in owner.state_fields(v)))


def zero_state(owner: _HasState, v: int):
    cls = owner.state_type(v)
    return cls(*(d.zero() for _, d in owner.state_fields(v)))


def iter_fields(owner: _HasState, v: int, prefix: str = "") -> Iterator[tuple[str, Domain]]:
    """Yield ``(dotted_path, domain)`` for every leaf field, descending into nested states."""
    for name, dom in owner.state_fields(v):
        path = f"{prefix}{name}"
        base = dom.inner if isinstance(dom, OrBottom) else dom
        if isinstance(base, Nested):
            yield from iter_fields(base.owner, base.v, path + ".")
        else:
            yield path, dom


def field_value(state, path: str):
    """Look up a dotted path produced by :func:`iter_fields` (``None`` if a parent is bottom)."""
    value = state
    for part in path.split("."):
        if value is None:
            return None
        value = getattr(value, part)
    return value
