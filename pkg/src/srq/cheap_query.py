"""Queries answered from one colored heap: the DFUDS tree plus its colors V.

The same code serves both sides: on the min heap it answers PSV, NSV and the
RMinQ family; on the max heap the identical procedures answer PLV, NLV and
the RMaxQ family.

V is 0-indexed here (``V[0]`` is the sentinel 1); entry ``v`` lives at
position ``v + 1`` of the underlying BitSeq. Entry ``v >= 1`` belongs to the
node reached through the ``(v+1)``-th '((' pair of the DFUDS string, so the
siblings of one parent appear right to left.
"""
from __future__ import annotations

import numpy as np

from ._jit import njit
from .bitseq import BitSeq, rank1p, rank_starts, select_bit_p, select_starts
from .dfuds import (DfudsTree, child, child_rank, degree, depth, level_anc, next_sibling,
                    parent, pre_rank, rank0, select0, subtree_size, _opener)
from .bp import findclose, min_excess_pos
from .heap_build import MIN, MAX, color_bits, dfuds_bits

_E8 = np.zeros(1, dtype=np.uint8)
_E64 = np.zeros(1, dtype=np.uint64)
_EI = np.zeros(1, dtype=np.int64)

# query kind codes shared with the batch kernel
PREV, NEXT, RR, RL, RK = 0, 1, 2, 3, 4


@njit
def _pairs_rank(H, x):
    """'((' pairs of D starting at positions <= x."""
    K = H[0]
    return rank_starts(0, K[0], _E8, _E64, _EI, K[1], H[5], np.int64(3), 2, x)


@njit
def _pairs_select(H, j):
    K = H[0]
    return select_starts(0, K[0], _E8, _E64, _EI, K[1], H[5], H[6], False, np.int64(3), 2, j) + 1


@njit
def v_get(H, v):
    words = H[2]
    return np.int64((words[v >> 6] >> np.uint64(v & 63)) & np.uint64(1))


@njit
def v_rank0(H, v):
    """Zeros among V[0..v]."""
    return v + 1 - rank1p(H[2], H[3], v + 1)


@njit
def v_select0(H, t):
    """Index of the t-th zero of V, or -1 when V has fewer zeros."""
    total = H[7]
    if t < 1 or t > total:
        return -1
    return select_bit_p(H[2], H[8], H[3], H[4], 0, t)


@njit
def node_color(H, x):
    K = H[0]
    if x == 0 or child_rank(K, x) == 0:
        return -1
    return _pairs_rank(H, _opener(K, x)) - 1


@njit
def node_of_color(H, v):
    K = H[0]
    words, n, cum, s1, s0, tree, size = K
    return pre_rank(K, findclose(words, n, cum, tree, size, _pairs_select(H, v + 1)) + 1)


@njit
def q_prev(H, i):
    return parent(H[0], i)


@njit
def q_rr(H, i, j):
    if i == j:
        return i
    K = H[0]
    words, n, cum, s1, s0, tree, size = K
    w = min_excess_pos(words, n, cum, tree, size, select0(K, i + 1), select0(K, j))
    r = rank0(K, w)
    if parent(K, r) == i:
        return i
    return r


@njit
def q_rl(H, i, j):
    K = H[0]
    r = q_rr(H, i, j)
    c = node_color(H, r)
    if c < 0 or v_get(H, c) == 0:
        return r
    dr = depth(K, H[1], r)
    if depth(K, H[1], i) == dr:
        left = i
    else:
        left = next_sibling(K, level_anc(K, H[1], i, dr))
    # the run of values equal to A[r] starts at the nearest red left sibling
    # (red: strictly below its own left neighbour), or at the first child
    nxt = v_select0(H, v_rank0(H, c) + 1)
    start = 0
    red = -1
    if nxt >= 0:
        red = node_of_color(H, nxt)
        if parent(K, red) == parent(K, r):
            start = child_rank(K, red)
    if start <= child_rank(K, left):
        return left
    return red


@njit
def q_rk(H, i, j, k):
    K = H[0]
    left = q_rl(H, i, j)
    if k == 1:
        return left
    r = q_rr(H, i, j)
    lr = child_rank(K, left)
    if child_rank(K, r) - lr < k - 1:
        return -1
    return child(K, parent(K, r), lr + k)


@njit
def q_next(H, i):
    K = H[0]
    p = parent(K, i)
    ns = next_sibling(K, i)
    if ns >= 0:
        c = node_color(H, ns)
        z = v_rank0(H, c)
        if z > 0:
            nv = node_of_color(H, v_select0(H, z))
            if parent(K, nv) == p:
                return nv
    r = child(K, p, degree(K, p))
    return r + subtree_size(K, r)


@njit
def q_one(H, kind, i, j, k):
    if kind == PREV:
        return q_prev(H, i)
    if kind == NEXT:
        return q_next(H, i)
    if kind == RR:
        return q_rr(H, i, j)
    if kind == RL:
        return q_rl(H, i, j)
    return q_rk(H, i, j, k)


@njit
def q_batch(H, kinds, ii, jj, kk):
    out = np.empty(kinds.shape[0], dtype=np.int64)
    for t in range(kinds.shape[0]):
        out[t] = q_one(H, kinds[t], ii[t], jj[t], kk[t])
    return out


class HeapEncoding:
    """One colored heap (min or max) with its query procedures."""

    def __init__(self, tree: DfudsTree, v_bits: BitSeq | None, side=MIN):
        if side not in (MIN, MAX):
            raise ValueError(f"side must be 'min' or 'max', got {side!r}")
        self.tree = tree
        self.side = side
        self.n = tree.node_count - 1
        pcum, psamp = tree.bits._samples("11")
        if v_bits is None:  # colorless heap: only PREV and RR are answerable
            vw, vcum, vs1, vs0, vz, vn = _E64, np.zeros(2, np.int64), _EI, _EI, 0, 0
        else:
            if v_bits.mode != "plain":
                v_bits = BitSeq.build(v_bits.to_array(), "plain")
            vw, vcum, vs1, vs0 = v_bits.plain_view()
            vz, vn = v_bits.count("0"), v_bits.length
        self.v_bits = v_bits
        self.H = (tree.K, tree.M, vw, vcum, vs0, pcum, psamp, vz, vn)

    @classmethod
    def from_array(cls, a, side=MIN) -> "HeapEncoding":
        tree = DfudsTree(BitSeq.build(dfuds_bits(a, side), "plain"))
        return cls(tree, BitSeq.build(color_bits(a, side), "plain"), side)

    @property
    def has_colors(self) -> bool:
        return self.v_bits is not None

    def _pos(self, i, lo=1):
        if not lo <= i <= self.n:
            raise IndexError(f"position {i} outside {lo}..{self.n}")
        return int(i)

    def _range(self, i, j):
        if not 1 <= i <= j <= self.n:
            raise ValueError(f"invalid range [{i}, {j}] for n={self.n}")
        return int(i), int(j)

    def _colors(self):
        if self.v_bits is None:
            raise ValueError("this heap was built without colors")

    def node_color_index(self, x: int):
        self._pos(x, 0)
        self._colors()
        c = int(node_color(self.H, x))
        return None if c < 0 else c

    def node_of_color_index(self, v: int) -> int:
        self._colors()
        if not 1 <= v <= self.v_bits.length - 1:
            raise IndexError(f"color index {v} outside 1..{self.v_bits.length - 1}")
        return int(node_of_color(self.H, v))

    def prev(self, i: int) -> int:
        return int(q_prev(self.H, self._pos(i)))

    def next(self, i: int) -> int:
        self._colors()
        return int(q_next(self.H, self._pos(i)))

    def rr(self, i: int, j: int) -> int:
        return int(q_rr(self.H, *self._range(i, j)))

    def rl(self, i: int, j: int) -> int:
        self._colors()
        return int(q_rl(self.H, *self._range(i, j)))

    def rk(self, i: int, j: int, k: int):
        self._colors()
        if k < 1:
            raise ValueError("k must be >= 1")
        r = int(q_rk(self.H, *self._range(i, j), int(k)))
        return None if r < 0 else r

    # side-specific names
    psv = plv = prev
    nsv = nlv = next
    rrminq = rrmaxq = rminq = rmaxq = rr
    rlminq = rlmaxq = rl
    rkminq = rkmaxq = rk

    def batch(self, kinds, i, j, k) -> np.ndarray:
        return q_batch(self.H, *(np.ascontiguousarray(x, dtype=np.int64) for x in (kinds, i, j, k)))
