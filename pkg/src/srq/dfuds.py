"""Ordinal-tree navigation over a DFUDS parenthesis sequence.

Node labels are preorder ranks ``0..N-1``. Node ``x`` owns the segment
``pre_select(x) .. select0(x + 1)``: its degree in opens followed by one
close, with the root segment preceded by the extra open at position 1.
The i-th child of ``x`` is reached through the open at ``select0(x+1) - i``.

All navigation kernels take the tuple ``K`` from :meth:`DfudsTree.kernel`
so that query code can call them from compiled loops.
"""
from __future__ import annotations

import numpy as np

from ._jit import njit
from .bitseq import BitSeq, rank1p, select_bit_p
from .bp import ParenSeq, excess_at, findclose, findopen, fwd_search, min_excess_pos

MARK_STEP = 64  # depth spacing of sampled ancestors


@njit
def rank0(K, i):
    return i - rank1p(K[0], K[2], i)


@njit
def select0(K, k):
    return select_bit_p(K[0], K[1], K[2], K[4], 0, k) + 1


@njit
def bit_at(K, i):
    words = K[0]
    return np.int64((words[(i - 1) >> 6] >> np.uint64((i - 1) & 63)) & np.uint64(1))


@njit
def pre_rank(K, i):
    return rank0(K, i - 1)


@njit
def pre_select(K, x):
    return 1 if x == 0 else select0(K, x) + 1


@njit
def node_close(K, x):
    return select0(K, x + 1)


@njit
def degree(K, x):
    d = node_close(K, x) - pre_select(K, x)
    return d - 1 if x == 0 else d


@njit
def child(K, x, i):
    words, n, cum, s1, s0, tree, size = K
    return rank0(K, findclose(words, n, cum, tree, size, node_close(K, x) - i))


@njit
def _opener(K, x):
    """Open in the parent's segment that points at non-root node x."""
    words, n, cum, s1, s0, tree, size = K
    return findopen(words, n, cum, tree, size, pre_select(K, x) - 1)


@njit
def parent(K, x):
    if x == 0:
        return -1
    return pre_rank(K, _opener(K, x))


@njit
def child_rank(K, x):
    """Number of left siblings of x (0 for the root)."""
    if x == 0:
        return 0
    o = _opener(K, x)
    return select0(K, rank0(K, o) + 1) - o - 1


@njit
def next_sibling(K, x):
    if x == 0:
        return -1
    o = _opener(K, x)
    if o - 1 >= 2 and bit_at(K, o - 1) == 1:
        words, n, cum, s1, s0, tree, size = K
        return rank0(K, findclose(words, n, cum, tree, size, o - 1))
    return -1


@njit
def prev_sibling(K, x):
    if x == 0:
        return -1
    o = _opener(K, x)
    if bit_at(K, o + 1) == 1:
        words, n, cum, s1, s0, tree, size = K
        return rank0(K, findclose(words, n, cum, tree, size, o + 1))
    return -1


@njit
def subtree_size(K, x):
    words, n, cum, s1, s0, tree, size = K
    if x == 0:
        return n // 2
    p = pre_select(K, x)
    e = fwd_search(words, n, cum, tree, size, p - 1, excess_at(words, cum, p - 1) - 1)
    return (e - p + 2) // 2


@njit
def _marked(M, x):
    labels = M[0]
    idx = np.searchsorted(labels, x)
    if idx < labels.shape[0] and labels[idx] == x:
        return idx
    return -1


@njit
def depth(K, M, x):
    c = 0
    while x != 0:
        idx = _marked(M, x)
        if idx >= 0:
            return c + M[1][idx]
        x = parent(K, x)
        c += 1
    return c


@njit
def level_anc(K, M, x, d):
    """Ancestor of x at depth d (requires d <= depth(x))."""
    dx = depth(K, M, x)
    while dx > d:
        idx = _marked(M, x)
        if idx >= 0 and dx - d >= MARK_STEP:
            up = M[2]
            k = (dx - d) // MARK_STEP
            b = 0
            while k:
                if k & 1:
                    idx = up[b, idx]
                k >>= 1
                b += 1
            x = M[0][idx]
            dx = M[1][idx]
            continue
        x = parent(K, x)
        dx -= 1
    return x


@njit
def lca(K, x, y):
    if x == y:
        return x
    if x > y:
        x, y = y, x
    if y < x + subtree_size(K, x):
        return x
    words, n, cum, s1, s0, tree, size = K
    q = min_excess_pos(words, n, cum, tree, size, pre_select(K, x), pre_select(K, y) - 1)
    return parent(K, pre_rank(K, q + 1))


@njit
def _tree_shape(close_pos):
    """Parent and depth of every node from the positions of the closes."""
    N = close_pos.shape[0]
    par = np.full(N, -1, dtype=np.int64)
    dep = np.zeros(N, dtype=np.int64)
    stack_node = np.zeros(N + 1, dtype=np.int64)
    stack_left = np.zeros(N + 1, dtype=np.int64)
    top = 0
    for x in range(N):
        deg = close_pos[x] - (close_pos[x - 1] if x else 0) - 1 - (1 if x == 0 else 0)
        if x:
            p = stack_node[top - 1]
            par[x] = p
            dep[x] = dep[p] + 1
            stack_left[top - 1] -= 1
            if stack_left[top - 1] == 0:
                top -= 1
        if deg > 0:
            stack_node[top] = x
            stack_left[top] = deg
            top += 1
    return par, dep


def _marks(par, dep):
    N = par.shape[0]
    height = np.zeros(N, dtype=np.int64)
    for x in range(N - 1, 0, -1):  # children follow parents in preorder
        p = par[x]
        if height[x] + 1 > height[p]:
            height[p] = height[x] + 1
    labels = np.flatnonzero((dep % MARK_STEP == 0) & (height >= MARK_STEP)).astype(np.int64)
    depths = dep[labels].astype(np.int64)
    m = labels.shape[0]
    levels = max(1, int(m).bit_length())
    up = np.full((levels, max(m, 1)), -1, dtype=np.int64)
    if m:
        pos = {int(v): t for t, v in enumerate(labels)}
        for t, v in enumerate(labels):
            a = int(v)
            for _ in range(MARK_STEP):
                a = int(par[a])
                if a < 0:
                    break
            up[0, t] = pos.get(a, -1)
        for b in range(1, levels):
            prev = up[b - 1]
            up[b] = np.where(prev >= 0, prev[np.maximum(prev, 0)], -1)
    return labels, depths, up


def _opt(v):
    return None if v < 0 else int(v)


class DfudsTree:
    """Navigation over the DFUDS encoding of an ordinal tree."""

    def __init__(self, bits):
        ps = bits if isinstance(bits, ParenSeq) else ParenSeq(bits)
        if ps.n == 0 or ps.n % 2 or not ps.is_open(1) or not ps.is_balanced():
            raise ValueError("not a DFUDS sequence: must start with '(' and be balanced")
        self.ps = ps
        self.node_count = ps.n // 2
        words, cum, s1, s0 = ps.bits.plain_view()
        self.K = (words, ps.n, cum, s1, s0, ps.tree, ps.size)
        arr = ps.bits.to_array()
        par, dep = _tree_shape(np.flatnonzero(arr == 0).astype(np.int64) + 1)
        self.M = _marks(par, dep)

    @classmethod
    def from_string(cls, s: str) -> "DfudsTree":
        return cls(BitSeq.build(s, "plain"))

    @property
    def bits(self) -> BitSeq:
        return self.ps.bits

    @property
    def aux_bits(self) -> int:
        labels, depths, up = self.M
        return self.ps.aux_bits + 64 * (labels.size + depths.size + up.size)

    def _node(self, x):
        if not 0 <= x < self.node_count:
            raise IndexError(f"label {x} outside 0..{self.node_count - 1}")
        return int(x)

    def pre_rank(self, i: int) -> int:
        if not 1 <= i <= self.ps.n:
            raise IndexError(f"position {i} outside 1..{self.ps.n}")
        return int(pre_rank(self.K, i))

    def pre_select(self, x: int) -> int:
        return int(pre_select(self.K, self._node(x)))

    def parent(self, x: int):
        return _opt(parent(self.K, self._node(x)))

    def degree(self, x: int) -> int:
        return int(degree(self.K, self._node(x)))

    def child(self, x: int, i: int) -> int:
        d = self.degree(x)
        if not 1 <= i <= d:
            raise IndexError(f"node {x} has {d} children, asked for child {i}")
        return int(child(self.K, x, i))

    def child_rank(self, x: int) -> int:
        return int(child_rank(self.K, self._node(x)))

    def next_sibling(self, x: int):
        return _opt(next_sibling(self.K, self._node(x)))

    def prev_sibling(self, x: int):
        return _opt(prev_sibling(self.K, self._node(x)))

    def subtree_size(self, x: int) -> int:
        return int(subtree_size(self.K, self._node(x)))

    def depth(self, x: int) -> int:
        return int(depth(self.K, self.M, self._node(x)))

    def level_anc(self, x: int, d: int) -> int:
        dx = self.depth(x)
        if not 0 <= d <= dx:
            raise ValueError(f"depth {d} outside 0..{dx}")
        return int(level_anc(self.K, self.M, x, d))

    def lca(self, x: int, y: int) -> int:
        return int(lca(self.K, self._node(x), self._node(y)))
