"""Weak pulser assembled from two strong pulsers running on disjoint blocks.

Each node runs the strong pulser of its own block and every round tells all
nodes whether its block pulsed (``a``), whether it believes each block pulsed
(``m0``, ``m1``) and whether it accepts each block's pulse (``b0``, ``b1``).
Acceptance is filtered through a listen counter and a cooldown counter so that
accepted pulses of one block are either one block period apart or far apart.
An accepted pulse (re)starts a silent binary consensus instance for that
block; its decision is the block's vote and the weak pulse is the OR of both.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

from ..consensus.base import ConsensusRoutine
from ..errors import ConfigurationError
from ..sim.domains import IntRange, Nested, OrBottom
from ..sim.model import FaultModel
from ..sim.protocol import Protocol
from ..sim.schema import Leaf, Record
from ..thresholds import thresholds

BOOK = Record("book", (Leaf("a", 2), Leaf("m0", 2), Leaf("m1", 2), Leaf("b0", 2), Leaf("b1", 2)))
BOOK_BITS = BOOK.max_bits()


@dataclass(frozen=True)
class FilterParams:
    block_quorum: int   # a-votes from the block that make m = 1
    quorum: int         # m-votes that make M = 1
    listen_reset: int   # m-votes that reset the listen counter
    period: int         # period of the block's pulser
    cooldown: int


class FilterOutcome(NamedTuple):
    m: int
    M: int
    listen: int
    cool: int
    b: int


def _filter(a_votes, m_votes, listen, cool, p):
    big = 1 if m_votes >= p.quorum else 0
    if m_votes >= p.listen_reset:
        new_listen = 0
    else:
        new_listen = listen + 1 if listen < p.period else p.period
    if (big == 0 and new_listen == 0) or (big == 1 and listen != p.period - 1):
        new_cool = p.cooldown
    else:
        new_cool = cool - 1 if cool > 0 else 0
    return (1 if a_votes >= p.block_quorum else 0, big, new_listen, new_cool,
            1 if (new_cool == 0 and big == 1) else 0)


def filter_counts(a_votes: int, m_votes: int, listen: int, cool: int, p: FilterParams) -> FilterOutcome:
    return FilterOutcome(*_filter(a_votes, m_votes, listen, cool, p))


def filter_step(a_received: Sequence[Any], m_received: Sequence[Any], listen: int, cool: int,
                params: FilterParams) -> FilterOutcome:
    """One filtering update from the block's a-values and everyone's m-values of the last round."""
    return filter_counts(
        sum(1 for x in a_received if x == 1), sum(1 for x in m_received if x == 1), listen, cool, params
    )


def split_nodes(n: int, f: int, model: FaultModel = FaultModel.BYZANTINE) -> tuple[int, int, int, int]:
    """Fault budgets ``ceil((f-1)/2)``, ``floor((f-1)/2)`` and block sizes proportional to them."""
    if f < 1:
        raise ConfigurationError("a block split needs f >= 1")
    f0, f1 = f // 2, (f - 1) // 2
    mult = 3 if FaultModel.parse(model) is FaultModel.BYZANTINE else 2
    lo0, lo1 = mult * f0 + 1, mult * f1 + 1
    if lo0 + lo1 > n:
        raise ConfigurationError(f"n={n} too small to split f={f}")
    n0 = round(n * (f0 + 1) / (f0 + f1 + 2))
    n0 = max(lo0, min(n - lo1, n0))
    return n0, n - n0, f0, f1


class PruneOutcome(NamedTuple):
    cursor: Any
    instance: Any
    send: Any
    vote: int


def prune_step(routine: ConsensusRoutine, v: int, cursor, instance, b_votes: int, reset: int,
               one: int, inbox_fn) -> PruneOutcome:
    """Advance a block's consensus instance; restart it when enough b-votes arrived.

    A completing instance yields its vote before a restart in the same round
    replaces it.  ``inbox_fn`` lazily produces the instance's inbox.
    """
    send = None
    vote = 0
    if cursor is not None:
        instance = routine.receive(v, instance, cursor, inbox_fn())
        if cursor == routine.rounds:
            vote = routine.decide(v, instance)
            cursor = None
        else:
            cursor += 1
            send = routine.send(v, instance, cursor)
    if b_votes >= reset:
        instance = routine.start(v, 1 if b_votes >= one else 0)
        cursor = 1
        send = routine.send(v, instance, 1)
    return PruneOutcome(cursor, instance, send, 1 if vote == 1 else 0)


class WeakState(NamedTuple):
    listen0: int
    cool0: int
    listen1: int
    cool1: int
    cursor0: Any
    inst0: Any
    cursor1: Any
    inst1: Any
    inner: Any


class WeakPulser(Protocol):
    outputs = ("pulse", "b0", "b1", "B0", "B1")

    def __init__(self, n: int, f: int, gap: int, blocks: tuple[Protocol, Protocol],
                 block_faults: tuple[int, int], routine: ConsensusRoutine,
                 fault_model: FaultModel = FaultModel.BYZANTINE):
        model = FaultModel.parse(fault_model)
        p0, p1 = blocks
        if p0.n + p1.n != n:
            raise ConfigurationError("block sizes must add up to n")
        if routine.spec.n != n or routine.spec.f != f:
            raise ConfigurationError("consensus routine must run on all n nodes")
        self.n, self.f = n, f
        self.gap = gap
        self.blocks = blocks
        self.periods = (p0.period, p1.period)
        self.routine = routine
        self.fault_model = model
        self.n0 = p0.n
        th = thresholds(model, n, f)
        self.cooldown = max(self.periods) + gap + 2
        self.params = tuple(
            FilterParams(blk.n - fb, th.quorum, th.listen_reset, blk.period, self.cooldown)
            for blk, fb in zip(blocks, block_faults)
        )
        self.prune_reset = th.prune_reset
        self.prune_input = th.prune_input
        self.members = (range(0, self.n0), range(self.n0, n))
        self.message_bound = max(p0.message_bound, p1.message_bound) + BOOK_BITS + 2 * routine.spec.message_bits
        self.name = f"weak-pulser(n={n},f={f},gap={gap})"
        self._schemas = [
            Record("weak", (BOOK, routine.schema, routine.schema, self._block(u)[0].schema_for(self._block(u)[1])))
            for u in range(n)
        ]
        self.schema = self._schemas[0]
        self._cons_width = routine.schema.width
        self._where = [self._block(u) for u in range(n)]
        T = routine.rounds
        self._fields = []
        for v in range(n):
            blk, j = self._block(v)
            pa, pb = self.params
            self._fields.append((
                ("listen0", IntRange(0, pa.period)),
                ("cool0", IntRange(0, self.cooldown)),
                ("listen1", IntRange(0, pb.period)),
                ("cool1", IntRange(0, self.cooldown)),
                ("cursor0", OrBottom(IntRange(1, T))),
                ("inst0", Nested(routine, v)),
                ("cursor1", OrBottom(IntRange(1, T))),
                ("inst1", Nested(routine, v)),
                ("inner", Nested(blk, j)),
            ))

    def _block(self, u: int) -> tuple[Protocol, int]:
        return (self.blocks[0], u) if u < self.n0 else (self.blocks[1], u - self.n0)

    def schema_for(self, u):
        return self._schemas[u]

    def payload_bits(self, u, p):
        if p is None:
            return 0
        bits = 0
        book, c0, c1, inner = p
        if book is not None:
            bits += BOOK_BITS - book.count(None)  # every book leaf is one bit
        w = self._cons_width
        if c0 is not None:
            bits += w
        if c1 is not None:
            bits += w
        if inner is not None:
            blk, j = self._where[u]
            bits += blk.payload_bits(j, inner)
        return bits

    def state_fields(self, v):
        return self._fields[v]

    def state_type(self, v):
        return WeakState

    def step(self, v, s, inbox, ext=None):
        n, n0 = self.n, self.n0
        mine = 0 if v < n0 else 1
        blk = self.blocks[mine]
        lo = 0 if mine == 0 else n0
        hi = n0 if mine == 0 else n
        inner_in = [None if p is None else p[3] for p in inbox[lo:hi]]
        ist, iout, io = blk.step(v - lo, s.inner, inner_in, None)
        a = io[0]

        a0 = a1 = m0 = m1 = b0 = b1 = 0
        for u in range(n):
            p = inbox[u]
            if p is None:
                continue
            book = p[0]
            if book is None:
                continue
            au, mu0, mu1, bu0, bu1 = book
            if au == 1:
                if u < n0:
                    a0 += 1
                else:
                    a1 += 1
            if mu0 == 1:
                m0 += 1
            if mu1 == 1:
                m1 += 1
            if bu0 == 1:
                b0 += 1
            if bu1 == 1:
                b1 += 1

        pa, pb = self.params
        ma, _, la, wa, ba = _filter(a0, m0, s.listen0, s.cool0, pa)
        mb, _, lb, wb, bb = _filter(a1, m1, s.listen1, s.cool1, pb)

        rt = self.routine
        reset, one = self.prune_reset, self.prune_input
        if s.cursor0 is None and b0 < reset:
            r0 = (None, s.inst0, None, 0)
        else:
            r0 = prune_step(rt, v, s.cursor0, s.inst0, b0, reset, one,
                            lambda: [None if p is None else p[1] for p in inbox])
        if s.cursor1 is None and b1 < reset:
            r1 = (None, s.inst1, None, 0)
        else:
            r1 = prune_step(rt, v, s.cursor1, s.inst1, b1, reset, one,
                            lambda: [None if p is None else p[2] for p in inbox])

        book = (a, ma, mb, ba, bb)
        c0, c1 = r0[2], r1[2]
        outside = (book, c0, c1, None)
        out = [outside] * n
        last = object()
        cur = None
        for k, w in enumerate(range(lo, hi)):
            ip = iout[k]
            if ip is not last:
                last = ip
                cur = (book, c0, c1, ip)
            out[w] = cur
        state = WeakState(la, wa, lb, wb, r0[0], r0[1], r1[0], r1[1], ist)
        v0, v1 = r0[3], r1[3]
        return state, out, (1 if (v0 or v1) else 0, ba, bb, v0, v1)
