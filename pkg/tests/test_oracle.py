import pytest
from hypothesis import given, settings, strategies as st

from srq.heap_build import build_colors, build_min_dfuds
from srq.oracle import QuerySpec, oracle_answer, oracle_min_tree

from conftest import small_arrays


def test_definitions():
    a = list(range(1, 9))
    assert [oracle_answer(a, QuerySpec("PSV", i)) for i in range(1, 9)] == list(range(8))
    assert oracle_answer(a, QuerySpec("NLV", 8)) == 9
    assert oracle_answer([2, 1, 1, 2], QuerySpec("RKMINQ", 1, 4, 2)) == 3
    assert oracle_answer([2, 1, 1, 2], QuerySpec("RKMINQ", 1, 4, 3)) is None
    assert oracle_answer([2, 1, 1, 2], QuerySpec("RMINQ", 1, 4)) == 3


def test_single_leaf_tree():
    t = oracle_min_tree([1])
    assert t.children[0] == [1] and t.children[1] == []
    assert t.dfuds() == "(())"


@pytest.mark.parametrize("bad", [
    dict(kind="FOO", i=1), dict(kind="PSV", i=1, j=2), dict(kind="RMINQ", i=1),
    dict(kind="RKMINQ", i=1, j=2), dict(kind="RKMINQ", i=1, j=2, k=0),
    dict(kind="RMINQ", i=1, j=2, k=1)])
def test_malformed(bad):
    with pytest.raises(ValueError):
        QuerySpec(**bad)


def test_out_of_range():
    with pytest.raises(ValueError):
        oracle_answer([1, 2], QuerySpec("RMINQ", 2, 3))
    with pytest.raises(ValueError):
        oracle_answer([1, 2], QuerySpec("PSV", 0))


def test_tree_matches_builders_exhaustive():
    for a in small_arrays(7):
        t = oracle_min_tree(a)
        assert t.dfuds() == build_min_dfuds(a)
        assert t.colors() == build_colors(a, "min").to_string()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=30), st.data())
def test_self_consistency(a, data):
    n = len(a)
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(i, n))
    for side in ("MIN", "MAX"):
        left = oracle_answer(a, QuerySpec(f"RL{side}Q", i, j))
        right = oracle_answer(a, QuerySpec(f"RR{side}Q", i, j))
        best = (min if side == "MIN" else max)(a[i - 1:j])
        assert left <= right and a[left - 1] == a[right - 1] == best
        hits = [p for p in range(i, j + 1) if a[p - 1] == best]
        ks = [oracle_answer(a, QuerySpec(f"RK{side}Q", i, j, k)) for k in range(1, len(hits) + 2)]
        assert ks == hits + [None]
