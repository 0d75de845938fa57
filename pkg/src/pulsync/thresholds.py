"""Every vote threshold used by the constructions, in one table per fault model.

Keeping them here means the omission variants differ from the Byzantine
ones only by which row of this table they read, which the tests audit.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .sim.model import FaultModel


@dataclass(frozen=True)
class Thresholds:
    quorum: int            # n - f: enough that a majority of it is correct
    support: int           # smallest count that proves at least one correct sender
    demote: int            # silent wrapper keeps x=1 only with this many ones
    participate: int       # silent wrapper joins the binary routine
    final: int             # silent wrapper trusts the binary result
    king_adopt: int        # phase king adopts a proposal seen this often
    fallback: int          # multivalued fallback value support
    listen_reset: int      # filter: m-votes that reset the listen counter
    prune_reset: int       # pruning: b-votes that (re)start the silent instance
    prune_input: int       # pruning: b-votes that make the instance input 1
    go: int                # firing squad: GO votes that latch x

    def as_dict(self) -> dict:
        return asdict(self)


def thresholds(model: FaultModel, n: int, f: int) -> Thresholds:
    model = FaultModel.parse(model)
    q = n - f
    if model is FaultModel.BYZANTINE:
        s = f + 1
        return Thresholds(q, s, q, s, s, s, s, s, n - 2 * f, q, s)
    # benign models: any single received vote is genuine
    return Thresholds(q, 1, q, 1, 1, 1, 1, 1, 1, q, 1)


def block_threshold(model: FaultModel, n_block: int, f_block: int) -> int:
    """Votes from a block needed before a node believes the block pulsed."""
    return n_block - f_block
