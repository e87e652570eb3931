import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srq.bitseq import BitSeq
from srq.dfuds import DfudsTree
from srq.heap_build import dfuds_bits
from srq.oracle import oracle_min_tree

from conftest import WORKED_A, WORKED_D, WORKED_PRE_RANK, WORKED_PRE_SELECT, small_arrays


@pytest.fixture(scope="module")
def worked():
    return DfudsTree.from_string(WORKED_D)


def test_worked_rows(worked):
    assert [worked.pre_rank(i) for i in range(1, 27)] == WORKED_PRE_RANK
    assert [worked.pre_select(x) for x in range(13)] == WORKED_PRE_SELECT
    assert worked.pre_rank(11) == 3


def test_worked_navigation(worked):
    assert worked.parent(0) is None
    assert worked.degree(0) == 4
    assert [worked.child(0, i) for i in range(1, 5)] == [1, 7, 8, 9]
    assert worked.parent(3) == 1
    assert worked.next_sibling(2) == 3
    assert worked.next_sibling(9) is None
    assert worked.child_rank(0) == 0
    assert worked.depth(0) == 0
    assert worked.subtree_size(0) == 13
    assert worked.level_anc(6, 0) == 0


def test_worked_parents_are_psv():
    t = DfudsTree.from_string(WORKED_D)
    tree = oracle_min_tree(WORKED_A)
    assert [t.parent(x) for x in range(1, 13)] == tree.parent[1:]


def test_errors(worked):
    with pytest.raises((IndexError, ValueError)):
        worked.parent(13)
    with pytest.raises((IndexError, ValueError)):
        worked.child(5, 1)
    with pytest.raises((IndexError, ValueError)):
        worked.level_anc(3, 5)


def check_against_oracle(a):
    t = DfudsTree(BitSeq.build(dfuds_bits(a), "plain"))
    o = oracle_min_tree(a)
    nodes = len(a) + 1
    depth = [0] * nodes
    for x in range(1, nodes):
        depth[x] = depth[o.parent[x]] + 1

    def ancestors(x):
        out = [x]
        while x:
            x = o.parent[x]
            out.append(x)
        return out

    size = [1] * nodes
    for x in range(nodes - 1, 0, -1):
        size[o.parent[x]] += size[x]
    assert sum(t.degree(x) for x in range(nodes)) == nodes - 1
    for x in range(nodes):
        assert t.pre_rank(t.pre_select(x)) == x
        assert t.parent(x) == (None if x == 0 else o.parent[x])
        kids = o.children[x]
        assert t.degree(x) == len(kids)
        assert [t.child(x, i) for i in range(1, len(kids) + 1)] == kids
        assert t.depth(x) == depth[x]
        assert t.subtree_size(x) == size[x]
        if x:
            sib = o.children[o.parent[x]]
            r = sib.index(x)
            assert t.child_rank(x) == r
            assert t.next_sibling(x) == (sib[r + 1] if r + 1 < len(sib) else None)
            assert t.prev_sibling(x) == (sib[r - 1] if r else None)
        anc = ancestors(x)
        for d in range(depth[x] + 1):
            assert t.level_anc(x, d) == anc[depth[x] - d]
    for x in range(0, nodes, 2):
        for y in range(nodes):
            ax = set(ancestors(x))
            assert t.lca(x, y) == next(z for z in ancestors(y) if z in ax)


def test_exhaustive_small_trees():
    for a in small_arrays(6):
        check_against_oracle(list(a))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=60))
def test_random_trees(a):
    check_against_oracle(a)


def test_deep_tree_level_anc():
    n = 3000
    a = np.arange(n)  # increasing: a path of depth n
    t = DfudsTree(BitSeq.build(dfuds_bits(a), "plain"))
    assert t.depth(n) == n
    for d in (0, 1, 63, 64, 65, 1000, 2999, n):
        assert t.level_anc(n, d) == d
    assert t.lca(n, 1500) == 1500
