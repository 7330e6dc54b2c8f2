"""Stream determinism and splitting behavior."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgtri import RngStream


def test_same_seed_same_sequence():
    a = RngStream(123, ("x", 4))
    b = RngStream(123, ("x", 4))
    assert [a.next_u64() for _ in range(20)] == [b.next_u64() for _ in range(20)]


def test_known_values_pinned():
    # Frozen output of the counter-based generator; a change here means
    # every seeded artifact in the repo silently changed.
    s = RngStream(0)
    assert [s.next_u64() for _ in range(3)] == [
        12035550249420947055,
        12935080325729570654,
        7141179953334974231,
    ]


def test_child_streams_do_not_disturb_parent():
    parent = RngStream(9)
    first = parent.next_u64()
    parent.child("a").next_u64()
    parent.child("b", 7).next_u64()
    again = RngStream(9)
    assert [first, parent.next_u64()] == [again.next_u64(), again.next_u64()]


def test_children_with_distinct_labels_differ():
    base = RngStream(5)
    seqs = {
        tuple(base.child(label).next_u64() for _ in range(4))
        for label in ("a", "b", 0, 1, "0")
    }
    assert len(seqs) == 5


def test_label_types_are_distinguished():
    assert RngStream(1, (0,)).next_u64() != RngStream(1, ("0",)).next_u64()


@given(st.integers(min_value=1, max_value=1000), st.integers(min_value=0))
@settings(max_examples=200)
def test_randrange_in_bounds(n, seed):
    value = RngStream(seed).randrange(n)
    assert 0 <= value < n


def test_randrange_roughly_uniform():
    stream = RngStream(77)
    counts = [0, 0, 0]
    for _ in range(30000):
        counts[stream.randrange(3)] += 1
    for c in counts:
        assert abs(c / 30000 - 1 / 3) < 0.02


def test_permutation_is_a_permutation():
    perm = RngStream(3).permutation(40)
    assert sorted(perm) == list(range(40))


def test_sample_distinct():
    got = RngStream(8).sample_distinct(10, 7)
    assert len(got) == 7 and len(set(got)) == 7
    with pytest.raises(ValueError):
        RngStream(8).sample_distinct(3, 5)


def test_bernoulli_validation():
    with pytest.raises(ValueError):
        RngStream(1).bernoulli(3, 2)
