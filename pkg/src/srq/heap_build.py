"""Construction of the min/max heap encodings from an input array.

Node ``i`` of either heap is array position ``i`` (1-based) and node 0 is
the root. In the min heap the parent of ``i`` is PSV(i); in the max heap it
is PLV(i). Pops are strict, so equal neighbours never pop each other.

DFUDS strings are assembled from per-node pop counts gathered by a
right-to-left stack pass: the root group is ``'(' * (m + 1) + ')'`` for the
``m`` elements left on the stack, followed by ``'(' * pops_i + ')'`` for each
position ``i = 1..n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .bitseq import BitSeq

MIN, MAX = "min", "max"


def as_array(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise ValueError("input must be a non-empty one-dimensional array")
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        if np.isnan(arr).any():
            raise ValueError("NaN is not totally ordered")
        return arr.astype(np.float64)
    raise TypeError(f"unsupported element type {arr.dtype}")


def _is_max(side) -> bool:
    if side not in (MIN, MAX):
        raise ValueError(f"side must be 'min' or 'max', got {side!r}")
    return side == MAX


@njit
def stack_pops(a, is_max):
    """pops[i] for i = 1..n (right-to-left pushes) and pops[0] = final stack size."""
    n = a.shape[0]
    pops = np.zeros(n + 1, dtype=np.int64)
    stack = np.empty(n, dtype=a.dtype)
    top = 0
    for i in range(n - 1, -1, -1):
        v = a[i]
        c = 0
        while top > 0 and ((stack[top - 1] < v) if is_max else (stack[top - 1] > v)):
            top -= 1
            c += 1
        stack[top] = v
        top += 1
        pops[i + 1] = c
    pops[0] = top
    return pops


@njit
def heap_parents(a, is_max):
    """parent[i] = PSV(i) (PLV(i) for max), with 0 for the sentinel; parent[0] = -1."""
    n = a.shape[0]
    par = np.zeros(n + 1, dtype=np.int64)
    par[0] = -1
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for i in range(n):
        v = a[i]
        while top > 0 and ((a[stack[top - 1]] <= v) if is_max else (a[stack[top - 1]] >= v)):
            top -= 1
        par[i + 1] = stack[top - 1] + 1 if top > 0 else 0
        stack[top] = i
        top += 1
    return par


@njit
def _left_siblings(par):
    n1 = par.shape[0]
    last = np.full(n1, -1, dtype=np.int64)
    left = np.full(n1, -1, dtype=np.int64)
    for j in range(1, n1):
        p = par[j]
        left[j] = last[p]
        last[p] = j
    return left


def groups_to_bits(opens) -> np.ndarray:
    """Concatenate ``'(' * opens[g] + ')'`` over all groups as 1/0 bits."""
    opens = np.asarray(opens, dtype=np.int64)
    ends = np.cumsum(opens + 1)
    bits = np.ones(int(ends[-1]) if ends.size else 0, dtype=np.uint8)
    bits[ends - 1] = 0
    return bits


def bits_to_parens(bits) -> str:
    return np.where(np.asarray(bits, dtype=np.uint8) == 1, 40, 41).astype(np.uint8).tobytes().decode()


def dfuds_bits(a, side=MIN) -> np.ndarray:
    pops = stack_pops(as_array(a), _is_max(side))
    opens = pops.copy()
    opens[0] += 1
    return groups_to_bits(opens)


def build_min_dfuds(a) -> str:
    return bits_to_parens(dfuds_bits(a, MIN))


def build_max_dfuds(a) -> str:
    return bits_to_parens(dfuds_bits(a, MAX))


def color_bits(a, side=MIN) -> np.ndarray:
    """V as 0/1 array: leading 1, then one bit per non-leftmost child.

    Entries follow the order of the '((' pairs in the DFUDS string: parents in
    preorder, and children right to left within a parent. 0 marks red.
    """
    arr = as_array(a)
    is_max = _is_max(side)
    par = heap_parents(arr, is_max)
    left = _left_siblings(par)
    nodes = np.flatnonzero(left >= 0)
    vals, lvals = arr[nodes - 1], arr[left[nodes] - 1]
    red = vals > lvals if is_max else vals < lvals
    order = np.lexsort((-nodes, par[nodes]))
    return np.concatenate([[1], np.where(red[order], 0, 1)]).astype(np.uint8)


def build_colors(a, side=MIN, mode="plain") -> BitSeq:
    return BitSeq.build(color_bits(a, side), mode)


@dataclass(frozen=True)
class DedupResult:
    a_prime: np.ndarray
    c_bits: BitSeq
    k: int

    @property
    def run_last(self) -> np.ndarray:
        """1-based position of the last element of each run of equal values."""
        c = self.c_bits.to_array()
        starts = np.flatnonzero(c == 0)
        return np.append(starts[1:], c.shape[0]).astype(np.int64)


def dedup(a, mode="compressed") -> DedupResult:
    arr = as_array(a)
    c = np.zeros(arr.shape[0], dtype=np.uint8)
    c[1:] = arr[1:] == arr[:-1]
    return DedupResult(arr[c == 0], BitSeq.build(c, mode), int(c.sum()))


@dataclass(frozen=True)
class TUEncoding:
    t_bits: BitSeq
    u_bits: BitSeq
    root_min_count: int
    root_max_count: int

    @property
    def payload_bits(self) -> int:
        return self.t_bits.length + self.u_bits.length


def _tu_from_pops(pmin, pmax, idx):
    """T groups and U bits from the pops of the elements at 1-based ``idx``."""
    body = idx[:-1]
    lo, hi = pmin[body], pmax[body]
    if np.any((lo > 0) == (hi > 0)):
        raise ValueError("exactly one stack must pop for every non-final element")
    opens = np.append(lo + hi - 1, 0)
    return groups_to_bits(opens), (hi > 0).astype(np.uint8)


def build_tu(a_prime, mode="plain") -> TUEncoding:
    arr = as_array(a_prime)
    if np.any(arr[1:] == arr[:-1]):
        raise ValueError("build_tu needs an array without consecutive equal elements")
    pmin, pmax = stack_pops(arr, False), stack_pops(arr, True)
    t, u = _tu_from_pops(pmin, pmax, np.arange(1, arr.shape[0] + 1))
    return TUEncoding(BitSeq.build(t, mode), BitSeq.build(u, mode), int(pmin[0]), int(pmax[0]))


def build_tpup(a, mode="plain"):
    """(T', U', dedup) where T' groups count the pops of A at each run's last element."""
    arr = as_array(a)
    dd = dedup(arr)
    pmin, pmax = stack_pops(arr, False), stack_pops(arr, True)
    t, u = _tu_from_pops(pmin, pmax, dd.run_last)
    return BitSeq.build(t, mode), BitSeq.build(u, mode), dd


@dataclass(frozen=True)
class DPrimeSeq:
    bits: BitSeq
    side: str
    root_count: int


def dprime_bits(a, side=MIN):
    """D' body (one group per run) and the number of root children."""
    arr = as_array(a)
    c = np.ones(arr.shape[0], dtype=bool)
    c[:-1] = arr[1:] != arr[:-1]
    pops = stack_pops(arr, _is_max(side))
    return groups_to_bits(pops[1:][c]), int(pops[0])


def build_dprime(a, side=MIN, mode="plain") -> DPrimeSeq:
    bits, root = dprime_bits(a, side)
    return DPrimeSeq(BitSeq.build(bits, mode), side, root)


def expand_f(s, c) -> np.ndarray:
    """Left-anchored expansion: each 1 in ``c`` emits ')' and each 0 copies one group of ``s``."""
    s = np.asarray(s, dtype=np.uint8)
    out = []
    p = 0
    for bit in np.asarray(c, dtype=np.uint8):
        if p >= s.shape[0]:
            break
        if bit:
            out.append(0)
            continue
        while p < s.shape[0] and s[p] == 1:
            out.append(1)
            p += 1
        if p < s.shape[0]:
            out.append(0)
            p += 1
    else:
        out.extend(s[p:].tolist())
    return np.array(out, dtype=np.uint8)
