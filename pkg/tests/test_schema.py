import random

from hypothesis import given, strategies as st

from pulsync.sim.schema import Leaf, Record, bits_of, payload_from_json, payload_to_json

sizes = st.integers(min_value=1, max_value=300)


@given(sizes)
def test_leaf_width_is_the_bits_needed_for_its_largest_value(size):
    leaf = Leaf("x", size)
    assert leaf.width == max(1, (size - 1).bit_length())
    assert 2 ** leaf.width >= size
    assert leaf.bits(None) == 0 and leaf.bits(size - 1) == leaf.width


@given(sizes, st.integers(min_value=-5, max_value=400) | st.none() | st.text(max_size=2))
def test_sanitized_leaf_values_are_valid_or_absent(size, x):
    leaf = Leaf("x", size)
    out = leaf.sanitize(x)
    assert out is None or leaf.valid(out)
    if leaf.valid(x):
        assert out == x


@given(sizes, st.data())
def test_flip_is_an_involution_on_valid_values(size, data):
    leaf = Leaf("x", size)
    x = data.draw(st.integers(min_value=0, max_value=size - 1))
    assert leaf.valid(leaf.flip(x))
    assert leaf.flip(leaf.flip(x)) == x


RECORD = Record("r", (Leaf("a", 2), Record("inner", (Leaf("b", 5), Leaf("c", 2))), Leaf("d", 9)))


@given(st.integers(min_value=0, max_value=10**6))
def test_random_record_payloads_are_valid_and_within_max_bits(seed):
    rng = random.Random(seed)
    for _ in range(20):
        p = RECORD.random(rng)
        assert p is None or RECORD.valid(p)
        assert 0 <= RECORD.bits(p) <= RECORD.max_bits() == 1 + 3 + 1 + 4
        assert payload_from_json(payload_to_json(p)) == p


def test_record_helpers():
    assert RECORD.fill(1) == (1, (1, 1), 1)
    assert RECORD.flip((0, (1, None), 8)) == (1, (3, None), 0)
    assert RECORD.claim((0, (0, 0), 3), frozenset({"b", "d"}), 1) == (0, (1, 0), 1)
    assert RECORD.leaf_names() == {"a", "b", "c", "d"}
    assert RECORD.sanitize((0, (7, 1), 2)) == (0, (None, 1), 2)
    assert RECORD.sanitize((0, 1)) is None
    assert bits_of(RECORD, [None, (1, None, None), (1, (0, 0), 0)]) == 9
