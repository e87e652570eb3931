import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srq.cheap_query import HeapEncoding
from srq.oracle import QuerySpec, oracle_answer

from conftest import WORKED_A, WORKED_NODE_V, small_arrays

MIN_KINDS = {"prev": "PSV", "next": "NSV", "rr": "RRMINQ", "rl": "RLMINQ", "rk": "RKMINQ"}
MAX_KINDS = {"prev": "PLV", "next": "NLV", "rr": "RRMAXQ", "rl": "RLMAXQ", "rk": "RKMAXQ"}


def check_all(a):
    n = len(a)
    for side, kinds in (("min", MIN_KINDS), ("max", MAX_KINDS)):
        h = HeapEncoding.from_array(a, side)
        for i in range(1, n + 1):
            assert h.prev(i) == oracle_answer(a, QuerySpec(kinds["prev"], i))
            assert h.next(i) == oracle_answer(a, QuerySpec(kinds["next"], i))
            for j in range(i, n + 1):
                assert h.rr(i, j) == oracle_answer(a, QuerySpec(kinds["rr"], i, j))
                assert h.rl(i, j) == oracle_answer(a, QuerySpec(kinds["rl"], i, j))
                for k in range(1, j - i + 3):
                    assert h.rk(i, j, k) == oracle_answer(a, QuerySpec(kinds["rk"], i, j, k))


@pytest.fixture(scope="module")
def worked():
    return HeapEncoding.from_array(WORKED_A, "min")


def test_worked_colors(worked):
    assert worked.node_color_index(3) == 4
    assert worked.node_color_index(9) == 1
    assert worked.node_color_index(12) == 7
    assert worked.node_color_index(2) is None  # leftmost child of node 1
    assert worked.node_color_index(0) is None
    assert [worked.node_of_color_index(v) for v in range(1, 8)] == WORKED_NODE_V
    for v in range(1, 8):
        assert worked.node_color_index(worked.node_of_color_index(v)) == v


def test_trivial_cases():
    inc = HeapEncoding.from_array([1, 2, 3, 4, 5], "min")
    assert [inc.psv(i) for i in range(1, 6)] == [0, 1, 2, 3, 4]
    assert inc.rrminq(2, 5) == 2
    dec = HeapEncoding.from_array([5, 4, 3, 2, 1], "min")
    assert [dec.nsv(i) for i in range(1, 6)] == [2, 3, 4, 5, 6]
    h = HeapEncoding.from_array([2, 1, 1, 2], "min")
    assert h.rlminq(1, 4) == 2
    assert h.rkminq(1, 4, 2) == 3
    assert h.rkminq(1, 4, 3) is None
    mx = HeapEncoding.from_array([1, 2, 3], "max")
    assert mx.plv(1) == 0 and [mx.nlv(i) for i in (1, 2)] == [2, 3]


def test_errors():
    h = HeapEncoding.from_array([3, 1, 2], "min")
    with pytest.raises((IndexError, ValueError)):
        h.psv(0)
    with pytest.raises(ValueError):
        h.rrminq(3, 2)
    with pytest.raises(ValueError):
        h.rkminq(1, 3, 0)
    with pytest.raises((IndexError, ValueError)):
        h.node_of_color_index(99)


def test_exhaustive_length_6():
    for a in small_arrays(6):
        check_all(list(a))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=40))
def test_random_differential(a):
    check_all(a)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=60), st.data())
def test_answer_properties(a, data):
    n = len(a)
    h = HeapEncoding.from_array(a, "min")
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(i, n))
    r, left = h.rrminq(i, j), h.rlminq(i, j)
    assert i <= left <= r <= j and a[r - 1] == a[left - 1] == min(a[i - 1:j])
    ks = []
    k = 1
    while (p := h.rkminq(i, j, k)) is not None:
        ks.append(p)
        k += 1
    assert ks[0] == left and ks[-1] == r and ks == sorted(set(ks))
    p, q = h.psv(i), h.nsv(i)
    assert p < i < q
    assert p == 0 or a[p - 1] < a[i - 1]
    assert all(a[t - 1] >= a[i - 1] for t in range(p + 1, i))


def test_batch_matches_single():
    rng = np.random.default_rng(9)
    a = rng.integers(0, 50, 2000)
    h = HeapEncoding.from_array(a, "max")
    i = rng.integers(1, 2001, 500)
    j = np.maximum(i, rng.integers(1, 2001, 500))
    kinds = rng.integers(0, 5, 500)
    k = rng.integers(1, 3, 500)
    got = h.batch(kinds, i, j, k)
    single = [h.prev, h.next, h.rr, h.rl, h.rk]
    for t in range(500):
        args = (i[t],) if kinds[t] < 2 else (i[t], j[t]) if kinds[t] < 4 else (i[t], j[t], k[t])
        want = single[kinds[t]](*map(int, args))
        assert got[t] == (-1 if want is None else want)
