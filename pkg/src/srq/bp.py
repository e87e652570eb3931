"""Balanced parentheses over a plain BitSeq ('(' = 1, ')' = 0).

``excess(p)`` is opens minus closes among the first ``p`` symbols. Matching
and range-minimum searches scan at most two 512-bit blocks (eight symbols at
a time through byte tables) and jump between blocks with a min-tree over
per-block excess minima.
"""
from __future__ import annotations

import numpy as np

from ._jit import njit
from .bitseq import RANK_BLOCK, BitSeq, rank1p

_BIG = np.int64(1) << np.int64(60)


def _byte_tables():
    fwd = np.zeros(256, dtype=np.int64)  # min excess over prefixes of length 1..8
    bwd = np.zeros(256, dtype=np.int64)  # min excess over prefixes of length 0..7
    tot = np.zeros(256, dtype=np.int64)
    for v in range(256):
        e, lo_fwd, lo_bwd = 0, 9, 0
        for t in range(8):
            if t:
                lo_bwd = min(lo_bwd, e)
            e += 1 if (v >> t) & 1 else -1
            lo_fwd = min(lo_fwd, e)
        fwd[v], bwd[v], tot[v] = lo_fwd, lo_bwd, e
    return fwd, bwd, tot


FWD_MIN, BWD_MIN, TOT = _byte_tables()


@njit
def _bit(words, p):
    return np.int64((words[p >> 6] >> np.uint64(p & 63)) & np.uint64(1))


@njit
def _byte(words, p):
    return np.int64((words[p >> 6] >> np.uint64(p & 63)) & np.uint64(0xFF))


@njit
def excess_at(words, cum, p):
    return 2 * rank1p(words, cum, p) - p


@njit
def _scan_fwd(words, p, end, e, target):
    """First q in (p, end] with excess(q) <= target, given e = excess(p)."""
    while p < end:
        if (p & 7) == 0 and p + 8 <= end:
            byte = _byte(words, p)
            if e + FWD_MIN[byte] > target:
                e += TOT[byte]
                p += 8
                continue
        e += 2 * _bit(words, p) - 1
        p += 1
        if e <= target:
            return p
    return -1


@njit
def _scan_bwd(words, q, lo, e, target):
    """Last r in [lo, q) with excess(r) <= target, given e = excess(q)."""
    while q > lo:
        if (q & 7) == 0 and q - 8 >= lo:
            byte = _byte(words, q - 8)
            base = e - TOT[byte]
            if base + BWD_MIN[byte] > target:
                e = base
                q -= 8
                continue
        e -= 2 * _bit(words, q - 1) - 1
        q -= 1
        if e <= target:
            return q
    return -1


@njit
def _scan_min(words, p, end, e):
    """Minimum excess over positions (p, end], given e = excess(p)."""
    m = _BIG
    while p < end:
        if (p & 7) == 0 and p + 8 <= end:
            byte = _byte(words, p)
            m = min(m, e + FWD_MIN[byte])
            e += TOT[byte]
            p += 8
            continue
        e += 2 * _bit(words, p) - 1
        p += 1
        m = min(m, e)
    return m


@njit
def _tree_first(tree, size, lo, target):
    v = lo + size
    while tree[v] > target:
        while v & 1:
            v >>= 1
        if v == 0:
            return -1
        v += 1
    while v < size:
        v = 2 * v if tree[2 * v] <= target else 2 * v + 1
    return v - size


@njit
def _tree_last(tree, size, hi, target):
    v = hi + size
    while tree[v] > target:
        while not v & 1:
            v >>= 1
        if v == 1:
            return -1
        v -= 1
    while v < size:
        v = 2 * v + 1 if tree[2 * v + 1] <= target else 2 * v
    return v - size


@njit
def _tree_min(tree, size, a, b):
    m = _BIG
    a += size
    b += size + 1
    while a < b:
        if a & 1:
            m = min(m, tree[a])
            a += 1
        if b & 1:
            b -= 1
            m = min(m, tree[b])
        a >>= 1
        b >>= 1
    return m


@njit
def fwd_search(words, n, cum, tree, size, i, target):
    """Smallest p in (i, n] with excess(p) <= target, or -1."""
    end = min((i // RANK_BLOCK + 1) * RANK_BLOCK, n)
    r = _scan_fwd(words, i, end, excess_at(words, cum, i), target)
    if r >= 0:
        return r
    b = i // RANK_BLOCK + 1
    if b * RANK_BLOCK >= n:
        return -1
    leaf = _tree_first(tree, size, b, target)
    if leaf < 0:
        return -1
    p = leaf * RANK_BLOCK
    return _scan_fwd(words, p, min(p + RANK_BLOCK, n), excess_at(words, cum, p), target)


@njit
def bwd_search(words, n, cum, tree, size, i, target):
    """Largest q in [0, i) with excess(q) <= target, or -1."""
    if i <= 0:
        return -1
    lo = ((i - 1) // RANK_BLOCK) * RANK_BLOCK
    r = _scan_bwd(words, i, lo, excess_at(words, cum, i), target)
    if r >= 0:
        return r
    if lo > 0:
        leaf = _tree_last(tree, size, lo // RANK_BLOCK - 1, target)
        if leaf >= 0:
            hi = min((leaf + 1) * RANK_BLOCK, n)
            e = excess_at(words, cum, hi)
            if e <= target:
                return hi
            return _scan_bwd(words, hi, leaf * RANK_BLOCK, e, target)
    return 0 if target >= 0 else -1


@njit
def range_min(words, n, cum, tree, size, i, j):
    """Minimum excess over positions [i, j] (1 <= i <= j <= n)."""
    end1 = min(j, ((i - 1) // RANK_BLOCK + 1) * RANK_BLOCK)
    m = _scan_min(words, i - 1, end1, excess_at(words, cum, i - 1))
    if j > end1:
        last = (j - 1) // RANK_BLOCK
        first = end1 // RANK_BLOCK
        if first <= last - 1:
            m = min(m, _tree_min(tree, size, first, last - 1))
        p = last * RANK_BLOCK
        m = min(m, _scan_min(words, p, j, excess_at(words, cum, p)))
    return m


@njit
def min_excess_pos(words, n, cum, tree, size, i, j):
    m = range_min(words, n, cum, tree, size, i, j)
    return fwd_search(words, n, cum, tree, size, i - 1, m)


@njit
def findclose(words, n, cum, tree, size, i):
    return fwd_search(words, n, cum, tree, size, i, excess_at(words, cum, i) - 1)


@njit
def findopen(words, n, cum, tree, size, i):
    return bwd_search(words, n, cum, tree, size, i, excess_at(words, cum, i)) + 1


def build_tree(bits: np.ndarray):
    """Per-block excess minima arranged as a complete binary min-tree."""
    n = bits.shape[0]
    nblk = max(1, -(-n // RANK_BLOCK))
    size = 1
    while size < nblk:
        size *= 2
    tree = np.full(2 * size, _BIG, dtype=np.int64)
    if n:
        e = np.cumsum(2 * bits.astype(np.int64) - 1)
        tree[size:size + nblk] = np.minimum.reduceat(e, np.arange(0, n, RANK_BLOCK))
    for v in range(size - 1, 0, -1):
        tree[v] = min(tree[2 * v], tree[2 * v + 1])
    return tree, size


class ParenSeq:
    """Parenthesis view of a BitSeq with matching and excess-minimum search."""

    __slots__ = ("bits", "n", "words", "cum", "tree", "size")

    def __init__(self, bits):
        if not isinstance(bits, BitSeq) or bits.mode != "plain":
            bits = BitSeq.build(bits.to_array() if isinstance(bits, BitSeq) else bits, "plain")
        self.bits = bits
        self.n = bits.length
        self.words, self.cum, _, _ = bits.plain_view()
        self.tree, self.size = build_tree(bits.to_array())

    @property
    def aux_bits(self) -> int:
        return self.bits.aux_bits + 32 * self.size  # leaves only; inner nodes derive from them

    def _k(self):
        return self.words, self.n, self.cum, self.tree, self.size

    def _check(self, i, lo=1):
        if not lo <= i <= self.n:
            raise IndexError(f"position {i} outside {lo}..{self.n}")

    def is_open(self, i: int) -> bool:
        return self.bits.access(i) == 1

    def excess(self, i: int) -> int:
        self._check(i, 0)
        return int(excess_at(self.words, self.cum, i))

    def is_balanced(self) -> bool:
        return self.excess(self.n) == 0 and (self.n == 0 or int(self.tree[1]) >= 0)

    def findclose(self, i: int) -> int:
        self._check(i)
        if not self.is_open(i):
            raise ValueError(f"position {i} is not an open parenthesis")
        r = int(findclose(*self._k(), i))
        if r < 0:
            raise ValueError("sequence is not balanced")
        return r

    def findopen(self, i: int) -> int:
        self._check(i)
        if self.is_open(i):
            raise ValueError(f"position {i} is not a close parenthesis")
        r = int(findopen(*self._k(), i))
        if r <= 0:
            raise ValueError("sequence is not balanced")
        return r

    def fwd_search(self, i: int, target: int) -> int:
        return int(fwd_search(*self._k(), i, target))

    def bwd_search(self, i: int, target: int) -> int:
        return int(bwd_search(*self._k(), i, target))

    def min_excess_pos(self, i: int, j: int) -> int:
        if i > j:
            raise ValueError(f"empty range [{i}, {j}]")
        self._check(i)
        self._check(j)
        return int(min_excess_pos(*self._k(), i, j))
