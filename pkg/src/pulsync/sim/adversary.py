"""Fault strategies.

A :class:`Strategy` is an immutable recipe; :meth:`Strategy.bind` turns it into
a per-run :class:`Tactic` that owns the run's adversarial randomness.  Each
round the engine first steps every node honestly (faulty nodes included, as a
shadow) and then asks the tactic what the faulty nodes really send.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from ..errors import ConfigurationError
from .model import FaultModel
from .schema import Schema

_RANK = {FaultModel.CRASH: 0, FaultModel.OMISSION: 1, FaultModel.BYZANTINE: 2}

PULSE_CLAIMS = frozenset({"a", "m0", "m1", "b0", "b1", "lead", "go"})


@dataclass
class BindContext:
    n: int
    f: int
    faulty: frozenset[int]
    schema_for: Callable[[int], Schema]
    rng: random.Random
    horizon: int


@dataclass
class AdversaryView:
    t: int
    correct_out: Mapping[int, list] | None = None  # only filled for rushing strategies


class Tactic:
    """Per-run adversary.  ``outgoing`` maps the honest outbox of faulty ``u`` to what it sends."""

    crash_rounds: dict[int, int]

    def __init__(self) -> None:
        self.crash_rounds = {}

    def outgoing(self, t: int, u: int, honest: list, view: AdversaryView) -> list:
        return honest


class Strategy:
    name = "honest"
    kind = FaultModel.CRASH  # weakest model whose behaviour this stays within
    rushing = False
    well_formed = True
    uses_honest = True  # False: the honest shadow outbox of faulty nodes is never read

    def compatible(self, model: FaultModel) -> bool:
        return _RANK[self.kind] <= _RANK[FaultModel.parse(model)]

    def bind(self, ctx: BindContext) -> Tactic:
        return Tactic()

    def __repr__(self) -> str:
        return f"<strategy {self.name}>"


# -- Byzantine -------------------------------------------------------------

class _Silent(Tactic):
    def __init__(self, n: int) -> None:
        super().__init__()
        self._none = [None] * n

    def outgoing(self, t, u, honest, view):
        return self._none


class Silent(Strategy):
    name = "silent"
    kind = FaultModel.BYZANTINE
    uses_honest = False

    def bind(self, ctx):
        return _Silent(ctx.n)


class _CrashLike(Tactic):
    def __init__(self, ctx: BindContext, latest: int) -> None:
        super().__init__()
        self.n = ctx.n
        self.delivered: dict[int, frozenset[int]] = {}
        for u in sorted(ctx.faulty):
            self.crash_rounds[u] = ctx.rng.randint(1, max(1, latest))
            self.delivered[u] = frozenset(w for w in range(ctx.n) if ctx.rng.random() < 0.5)

    def outgoing(self, t, u, honest, view):
        r = self.crash_rounds.get(u)
        if r is None or t < r:
            return honest
        if t > r:
            return [None] * self.n
        keep = self.delivered[u]
        return [p if w in keep else None for w, p in enumerate(honest)]


class CrashMimic(Strategy):
    """Behave honestly, then stop mid-round after a seeded crash round."""

    name = "crash-mimic"
    kind = FaultModel.BYZANTINE

    def bind(self, ctx):
        return _CrashLike(ctx, ctx.horizon // 2)


class _Random(Tactic):
    def __init__(self, ctx: BindContext) -> None:
        super().__init__()
        self.ctx = ctx

    def outgoing(self, t, u, honest, view):
        rng = self.ctx.rng
        schema = self.ctx.schema_for(u)
        pool = (schema.random(rng), schema.random(rng), schema.fill(0), schema.fill(1))
        return [pool[rng.randrange(4)] for _ in honest]


class RandomPayloads(Strategy):
    name = "random"
    kind = FaultModel.BYZANTINE
    uses_honest = False

    def bind(self, ctx):
        return _Random(ctx)


class _Equivocate(Tactic):
    def __init__(self, ctx: BindContext) -> None:
        super().__init__()
        self.ctx = ctx
        self.polar = {u: (ctx.schema_for(u).fill(0), ctx.schema_for(u).fill(1)) for u in ctx.faulty}

    def outgoing(self, t, u, honest, view):
        zero, one = self.polar[u]
        rng = self.ctx.rng
        order = list(range(len(honest)))
        rng.shuffle(order)
        out = [zero] * len(honest)
        for w in order[: len(order) // 2]:
            out[w] = one
        return out


class Equivocator(Strategy):
    """Tell a random half of the recipients 'all ones' and the other half 'all zeros'."""

    name = "equivocator"
    kind = FaultModel.BYZANTINE
    uses_honest = False

    def bind(self, ctx):
        return _Equivocate(ctx)


class _Spurious(Tactic):
    def __init__(self, ctx: BindContext, rate: float, claims: frozenset) -> None:
        super().__init__()
        self.ctx = ctx
        self.rate = rate
        self.claims = claims

    def outgoing(self, t, u, honest, view):
        rng = self.ctx.rng
        if rng.random() >= self.rate:
            return honest
        schema = self.ctx.schema_for(u)
        cache: dict[int, Any] = {}
        out = list(honest)
        for w, p in enumerate(honest):
            if rng.random() < 0.5:
                key = id(p)
                if key not in cache:
                    cache[key] = schema.claim(p, self.claims, 1)
                out[w] = cache[key]
        return out


@dataclass(frozen=True)
class SpuriousPulser(Strategy):
    """Honest traffic with intermittent false pulse claims sent to random subsets."""

    rate: float = 0.3
    claims: frozenset = PULSE_CLAIMS
    name = "spurious-pulser"
    kind = FaultModel.BYZANTINE

    def bind(self, ctx):
        return _Spurious(ctx, self.rate, self.claims)


class _Flip(Tactic):
    def __init__(self, ctx: BindContext) -> None:
        super().__init__()
        self.ctx = ctx

    def outgoing(self, t, u, honest, view):
        schema = self.ctx.schema_for(u)
        cache: dict[int, Any] = {}
        out = []
        for p in honest:
            key = id(p)
            if key not in cache:
                cache[key] = schema.flip(p)
            out.append(cache[key])
        return out


class InputFlipper(Strategy):
    """Run the honest code but invert every value it sends."""

    name = "input-flipper"
    kind = FaultModel.BYZANTINE

    def bind(self, ctx):
        return _Flip(ctx)


class _Mixed(Tactic):
    def __init__(self, ctx: BindContext, parts: Sequence[Strategy]) -> None:
        super().__init__()
        self.rng = ctx.rng
        self.parts = [s.bind(ctx) for s in parts]

    def outgoing(self, t, u, honest, view):
        return self.parts[self.rng.randrange(len(self.parts))].outgoing(t, u, honest, view)


class Mixed(Strategy):
    """Each round every faulty node picks one of the other Byzantine behaviours at random."""

    name = "mixed"
    kind = FaultModel.BYZANTINE

    def bind(self, ctx):
        parts = [Silent(), RandomPayloads(), Equivocator(), SpuriousPulser(), InputFlipper(), Strategy()]
        return _Mixed(ctx, parts)


class _Splitter(Tactic):
    """Rushing: reads the correct round-t leaves and reports each recipient the minority view."""

    def __init__(self, ctx: BindContext) -> None:
        super().__init__()
        self.ctx = ctx

    def outgoing(self, t, u, honest, view):
        schema = self.ctx.schema_for(u)
        sample = None
        for out in (view.correct_out or {}).values():
            sample = out[0]
            break
        if sample is None:
            return honest
        flipped = schema.flip(sample)
        return [sample if w % 2 else flipped for w in range(len(honest))]


class Splitter(Strategy):
    name = "splitter"
    kind = FaultModel.BYZANTINE
    rushing = True

    def bind(self, ctx):
        return _Splitter(ctx)


# -- omission ----------------------------------------------------------------

class _Drop(Tactic):
    def __init__(self, ctx: BindContext, rule: str) -> None:
        super().__init__()
        self.ctx = ctx
        self.rule = rule

    def outgoing(self, t, u, honest, view):
        if self.rule == "all":
            drop = True
        elif self.rule == "alternating":
            drop = t % 2 == 1
        else:
            drop = None
        rng = self.ctx.rng
        out = []
        for w, p in enumerate(honest):
            if w == u:
                out.append(p)  # a node always hears itself
            elif drop is None:
                out.append(None if rng.random() < 0.5 else p)
            else:
                out.append(None if drop else p)
        return out


class DropAll(Strategy):
    name = "drop-all"
    kind = FaultModel.OMISSION

    def bind(self, ctx):
        return _Drop(ctx, "all")


class DropHalf(Strategy):
    name = "drop-half"
    kind = FaultModel.OMISSION

    def bind(self, ctx):
        return _Drop(ctx, "half")


class Alternating(Strategy):
    name = "alternating"
    kind = FaultModel.OMISSION

    def bind(self, ctx):
        return _Drop(ctx, "alternating")


# -- crash ---------------------------------------------------------------------

class _Scheduled(_CrashLike):
    def __init__(self, ctx: BindContext, schedule: Mapping[int, tuple[int, Sequence[int]]]) -> None:
        Tactic.__init__(self)
        self.n = ctx.n
        self.delivered = {}
        for u, (r, keep) in schedule.items():
            if u not in ctx.faulty:
                raise ConfigurationError(f"crash schedule names correct node {u}")
            self.crash_rounds[u] = r
            self.delivered[u] = frozenset(keep)


@dataclass(frozen=True)
class CrashSchedule(Strategy):
    """Explicit crashes: ``{node: (round, recipients reached in that round)}``."""

    schedule: Mapping[int, tuple[int, tuple[int, ...]]] = field(default_factory=dict)
    name = "crash-schedule"
    kind = FaultModel.CRASH

    def bind(self, ctx):
        return _Scheduled(ctx, self.schedule)


@dataclass(frozen=True)
class RandomCrashes(Strategy):
    """Every faulty node crashes at a seeded round in ``1..latest`` with a random partial send."""

    latest: int = 0
    name = "random-crash"
    kind = FaultModel.CRASH

    def bind(self, ctx):
        return _CrashLike(ctx, self.latest or ctx.horizon // 2)


BYZANTINE_SUITE = ("silent", "crash-mimic", "random", "equivocator", "spurious-pulser", "input-flipper")
OMISSION_SUITE = ("drop-all", "drop-half", "alternating")

_REGISTRY: dict[str, Callable[[], Strategy]] = {
    "honest": Strategy,
    "silent": Silent,
    "crash-mimic": CrashMimic,
    "random": RandomPayloads,
    "equivocator": Equivocator,
    "spurious-pulser": SpuriousPulser,
    "input-flipper": InputFlipper,
    "mixed": Mixed,
    "splitter": Splitter,
    "drop-all": DropAll,
    "drop-half": DropHalf,
    "alternating": Alternating,
    "random-crash": RandomCrashes,
}


def get_strategy(name: str | Strategy) -> Strategy:
    if isinstance(name, Strategy):
        return name
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ConfigurationError(
            f"unknown adversary {name!r}; known: {', '.join(sorted(_REGISTRY))}"
        ) from None


def strategy_names() -> list[str]:
    return sorted(_REGISTRY)
