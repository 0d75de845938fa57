import pytest
from hypothesis import given, strategies as st

from pulsync.sim.model import FaultModel
from pulsync.thresholds import block_threshold, thresholds


def test_byzantine_row_for_four_nodes():
    th = thresholds(FaultModel.BYZANTINE, 4, 1)
    assert th.as_dict() == {
        "quorum": 3, "support": 2, "demote": 3, "participate": 2, "final": 2, "king_adopt": 2,
        "fallback": 2, "listen_reset": 2, "prune_reset": 2, "prune_input": 3, "go": 2,
    }


@pytest.mark.parametrize("model", [FaultModel.OMISSION, FaultModel.CRASH])
def test_benign_rows_trust_single_votes(model):
    th = thresholds(model, 5, 2)
    assert th.quorum == th.demote == th.prune_input == 3
    assert {th.support, th.participate, th.final, th.king_adopt, th.fallback,
            th.listen_reset, th.prune_reset, th.go} == {1}


@given(st.integers(0, 30).flatmap(lambda f: st.tuples(st.just(f), st.integers(3 * f + 1, 3 * f + 20))))
def test_byzantine_support_exceeds_the_liars(fn):
    f, n = fn
    th = thresholds("byzantine", n, f)
    assert th.support == f + 1
    # two quorums share a correct node, and a quorum always contains a support set of correct nodes
    assert 2 * th.quorum - n > f
    assert th.quorum - f >= th.support
    assert th.prune_reset >= th.support


def test_block_threshold():
    assert block_threshold(FaultModel.BYZANTINE, 5, 1) == 4
    assert block_threshold(FaultModel.OMISSION, 3, 1) == 2
