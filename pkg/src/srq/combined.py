"""Joint encodings of the min and max heaps (variants a-d).

Payloads per variant:

* ``b``: T' and U' (both heaps' pop structure, duplicates folded in) plus the
  compressed duplicate marks C. Supports the queries that need no colors.
* ``d``: ``b`` plus V = V_max . V_min over A.
* ``a``: T and U built on the deduplicated array A', plus C.
* ``c``: ``a`` plus V over A'.

For b/d, every block of ``w = ceil(lg n)`` bits of D_min(A) or D_max(A) can
be decoded on its own: the block start is mapped to D' (the DFUDS string
without duplicate leaves) through P/Q/R/k_i, the D' window is regenerated
from T'/U' starting at a mark in B', and the expansion functions f/f'
re-insert the duplicate leaves from C. For a/c the whole sequences are
rebuilt in one pass and cached.

Strings are bit arrays with '(' = 1 and ')' = 0. D' here always includes the
root group ``'(' * (m + 1) + ')'``, so its closes line up one-to-one with
the zeros of ``C`` followed by one padding zero.
"""
from __future__ import annotations

import math
import struct
import threading

import numpy as np

from ._jit import njit
from .bitseq import (BitSeq, c_get_bits, cv_bits, cv_rank1, cv_select, low_mask, popcount64,
                     rank1p)
from .cheap_query import HeapEncoding
from .dfuds import DfudsTree
from .heap_build import (MAX, MIN, _left_siblings, as_array, build_tpup, build_tu, color_bits,
                         dedup, groups_to_bits)
from .oracle import QuerySpec

VARIANTS = ("a", "b", "c", "d")
COLOR_FREE = ("RMINQ", "RRMINQ", "RMAXQ", "RRMAXQ", "PSV", "PLV")
CHUNK = 8
BAD_FACTOR = 16  # a block whose T' span exceeds BAD_FACTOR * w is stored verbatim
MAX_W = 32

# --------------------------------------------------------------------------
# f and f' on parenthesis strings


def _as_bits(x) -> list:
    if isinstance(x, str):
        return [1 if ch in "(1" else 0 for ch in x]
    return [int(b) for b in x]


def _render(bits, like):
    if isinstance(like, str) and set(like) <= set("()"):
        return "".join("(" if b else ")" for b in bits)
    return bits


def f(s, c):
    """Left-anchored expansion: a 1 in ``c`` emits ')', a 0 copies the next group of ``s``."""
    sb, cb = _as_bits(s), _as_bits(c)
    out, p = [], 0
    for bit in cb:
        if p >= len(sb):
            break
        if bit:
            out.append(0)
            continue
        while p < len(sb) and sb[p] == 1:
            out.append(1)
            p += 1
        if p < len(sb):
            out.append(0)
            p += 1
    else:
        out.extend(sb[p:])
    return _render(out, s)


def fprime(s, c):
    """Right-anchored expansion: ``c`` and the groups of ``s`` are consumed from the end."""
    sb, cb = _as_bits(s), _as_bits(c)
    out, p = [], len(sb)
    for bit in reversed(cb):
        if p <= 0:
            break
        if bit:
            out.append(0)
            continue
        p -= 1
        out.append(sb[p])
        while p > 0 and sb[p - 1] == 1:
            p -= 1
            out.append(1)
    else:
        out.extend(reversed(sb[:p]))
    return _render(out[::-1], s)


# --------------------------------------------------------------------------
# chunk tables; entry = out | out_len << 16 | s_used << 21 | c_used << 25 | state << 29


def _pack(out, olen, si, ci, st):
    return out | (olen << 16) | (si << 21) | (ci << 25) | (st << 29)


def _f_entry(s8, c8, st, chunk):
    out = olen = si = ci = 0
    while True:
        if st:
            if si == chunk:
                break
            b = (s8 >> si) & 1
            si += 1
            out |= b << olen
            olen += 1
            if b == 0:
                st = 0
            continue
        if ci == chunk:
            break
        if (c8 >> ci) & 1:
            ci += 1
            olen += 1  # ')' is a zero bit
            continue
        if si == chunk:
            break
        ci += 1
        st = 1
    return _pack(out, olen, si, ci, st)


def _fp_entry(s8, c8, st, chunk):
    """Consumes symbols from the top bit down; output bits are in emission order."""
    out = olen = si = ci = 0
    top = chunk - 1
    while True:
        if st:
            if si == chunk:
                break
            b = (s8 >> (top - si)) & 1
            if b == 0:
                st = 0
                continue
            si += 1
            out |= 1 << olen
            olen += 1
            continue
        if ci == chunk:
            break
        if (c8 >> (top - ci)) & 1:
            ci += 1
            olen += 1
            continue
        if si == chunk:
            break
        ci += 1
        b = (s8 >> (top - si)) & 1
        si += 1
        out |= b << olen
        olen += 1
        st = 1
    return _pack(out, olen, si, ci, st)


def build_tables(chunk_bits: int = CHUNK):
    """Lookup tables for f and f' indexed by ``state << 2c | c_chunk << c | s_chunk``."""
    if not 1 <= chunk_bits <= 8:
        raise ValueError("chunk_bits must be in 1..8 (outputs are packed into 16 bits)")
    size = 1 << chunk_bits
    tf = np.zeros(2 * size * size, dtype=np.uint32)
    tfp = np.zeros(2 * size * size, dtype=np.uint32)
    for st in range(2):
        for c8 in range(size):
            base = (st << (2 * chunk_bits)) | (c8 << chunk_bits)
            for s8 in range(size):
                tf[base | s8] = _f_entry(s8, c8, st, chunk_bits)
                tfp[base | s8] = _fp_entry(s8, c8, st, chunk_bits)
    return tf, tfp


_TABLES = None
_TABLES_LOCK = threading.Lock()


def tables():
    global _TABLES
    with _TABLES_LOCK:
        if _TABLES is None:
            _TABLES = build_tables(CHUNK)
    return _TABLES


def table_bits() -> int:
    """Size of the two shared tables (out, out_len, s_used, c_used, state per entry)."""
    return 2 * (2 << (2 * CHUNK)) * (2 * CHUNK + 5 + 4 + 4 + 1)


@njit
def f_window(tf, sv, cv, want):
    """First ``want`` (<= 47) bits of f(s, c) for 64-bit windows s, c read from bit 0."""
    out = np.uint64(0)
    olen = 0
    ps = 0
    pc = 0
    st = 0
    while olen < want:
        s8 = np.int64((sv >> np.uint64(ps)) & np.uint64(0xFF)) if ps < 64 else 0
        c8 = np.int64((cv >> np.uint64(pc)) & np.uint64(0xFF)) if pc < 64 else 0
        e = np.int64(tf[(st << 16) | (c8 << 8) | s8])
        if olen < 64:
            out |= np.uint64(e & 0xFFFF) << np.uint64(olen)
        olen += (e >> 16) & 31
        ps += (e >> 21) & 15
        pc += (e >> 25) & 15
        st = (e >> 29) & 1
    return out & low_mask(want)


@njit
def fp_window(tfp, sv, cv, want):
    """Last ``want`` (<= 40) bits of f'(s, c) for windows ending at bit 63, in natural order."""
    acc = np.uint64(0)
    olen = 0
    ps = 0
    pc = 0
    st = 0
    while olen < want:
        s8 = np.int64((sv >> np.uint64(56 - ps)) & np.uint64(0xFF)) if ps <= 56 else 0
        c8 = np.int64((cv >> np.uint64(56 - pc)) & np.uint64(0xFF)) if pc <= 56 else 0
        e = np.int64(tfp[(st << 16) | (c8 << 8) | s8])
        if olen < 64:
            acc |= np.uint64(e & 0xFFFF) << np.uint64(olen)
        olen += (e >> 16) & 31
        ps += (e >> 21) & 15
        pc += (e >> 25) & 15
        st = (e >> 29) & 1
    out = np.uint64(0)
    for u in range(want):  # emission order runs right to left
        out |= ((acc >> np.uint64(want - 1 - u)) & np.uint64(1)) << np.uint64(u)
    return out


# --------------------------------------------------------------------------
# regenerating D' from T'/U'
#
# T' holds one group '(' * t_r + ')' per pushed element r (the last group is
# the lone close of A[n]). On the side that popped (U'[r]), D' has the group
# '(' * (t_r + 1) + ')': the t_r opens map to T' opens, the extra open and
# the close both map to the T' close (told apart by ``sub``). On the other
# side D' has a bare ')' mapped to the T' close, and the T' opens are skipped.


@njit
def _tbit(tw, pos):
    return np.int64((tw[(pos - 1) >> 6] >> np.uint64((pos - 1) & 63)) & np.uint64(1))


@njit
def _on_side(uw, side, ng, r):
    if r >= ng:
        return False
    return np.int64((uw[(r - 1) >> 6] >> np.uint64((r - 1) & 63)) & np.uint64(1)) == side


@njit
def _step(tw, tn, uw, side, ng, pos, r, sub):
    """Next D' symbol from state (pos, r, sub): (symbol or -1, T' position used, new state)."""
    while pos <= tn:
        b = _tbit(tw, pos)
        if _on_side(uw, side, ng, r):
            if b == 1:
                return 1, pos, pos + 1, r, 0
            if sub == 0:
                return 1, pos, pos, r, 1
            return 0, pos, pos + 1, r + 1, 0
        if b == 1:
            pos += 1
            continue
        return 0, pos, pos + 1, r + 1, 0
    return -1, pos, pos, r, sub


@njit
def walk_dprime(tw, tn, uw, side, ng, m, w):
    """Full D' plus, for every block start after the root group, its T' mark and flag."""
    pos, r, sub = 1, 1, 0
    cap = m + 2 + 2 * tn + 2
    d = np.zeros(cap, dtype=np.uint8)
    for x in range(m + 1):
        d[x] = 1
    nb = 0
    marks = np.zeros(cap // w + 2, dtype=np.int64)
    flags = np.zeros(cap // w + 2, dtype=np.uint8)
    x = m + 2  # 0-based index of the next symbol after the root group
    while True:
        sub_before = sub
        sym, at, pos, r, sub = _step(tw, tn, uw, side, ng, pos, r, sub)
        if sym < 0:
            break
        if x % w == 0:
            marks[nb] = at
            flags[nb] = sub_before
            nb += 1
        d[x] = sym
        x += 1
    return d[:x], marks[:nb], flags[:nb]


def root_count(t_bits: np.ndarray, u_bits: np.ndarray, side_bit: int, total: int) -> int:
    """Elements left on one stack: ``total`` minus the pops recorded on that side."""
    closes = np.flatnonzero(t_bits == 0)
    opens = np.diff(np.concatenate([[-1], closes])) - 1
    on = u_bits[: len(closes) - 1] == side_bit
    return int(total - np.sum(opens[:-1][on] + 1))


@njit
def expand_with_map(dp, c, n):
    """D = f(D', C . 0) together with the D' position (1-based, 0 = none) of each symbol."""
    out = np.zeros(dp.shape[0] + n + 1, dtype=np.uint8)
    corr = np.zeros(dp.shape[0] + n + 1, dtype=np.int64)
    o = 0
    p = 0
    ci = 0
    while p < dp.shape[0]:
        cb = c[ci] if ci < n else 0
        ci += 1
        if cb == 1:
            o += 1  # bare close, no counterpart in D'
            continue
        while p < dp.shape[0] and dp[p] == 1:
            out[o] = 1
            corr[o] = p + 1
            o += 1
            p += 1
        if p < dp.shape[0]:
            corr[o] = p + 1
            o += 1
            p += 1
    return out[:o], corr[:o]


# --------------------------------------------------------------------------
# block decoding kernels; ``S`` is the per-side tuple built by SideAux.kernel()

_TW, _TN, _TCUM, _UW, _SIDE, _NG, _M, _DLEN, _W, _JR, _B, _FL, _BAD, _BADV, _P, _Q, _R, _KI, \
    _C, _N = range(20)


@njit
def _rank0_t(S, x):
    return x - rank1p(S[_TW], S[_TCUM], x)


@njit
def dprime_block(S, j):
    """Block j (1-based) of D' as a w-bit value, zero past the end."""
    w = S[_W]
    x = (j - 1) * w + 1
    if x > S[_DLEN]:
        return np.uint64(0)
    out = np.uint64(0)
    olen = 0
    m = S[_M]
    if j <= S[_JR]:
        while olen < w and x <= m + 2:
            if x <= m + 1:
                out |= np.uint64(1) << np.uint64(olen)
            olen += 1
            x += 1
        pos, r, sub = 1, 1, 0
    else:
        mi = j - S[_JR]
        if cv_bits(S[_BAD], mi - 1, 1):
            return S[_BADV][cv_rank1(S[_BAD], mi - 1)]
        pos = cv_select(S[_B], True, mi) + 1
        r = _rank0_t(S, pos - 1) + 1
        sub = np.int64(S[_FL][mi - 1])
    while olen < w:
        sym, at, pos, r, sub = _step(S[_TW], S[_TN], S[_UW], S[_SIDE], S[_NG], pos, r, sub)
        if sym < 0:
            break
        if sym:
            out |= np.uint64(1) << np.uint64(olen)
        olen += 1
    return out


@njit
def _closes_before_block(S, j):
    if j <= S[_JR]:
        return 0
    pos = cv_select(S[_B], True, j - S[_JR]) + 1
    return 1 + _rank0_t(S, pos - 1)


@njit
def dprime_window(S, x0):
    """D'[x0 .. x0+63] as a 64-bit value (zeros outside 1..|D'|)."""
    w = S[_W]
    out = np.uint64(0)
    got = 0
    x = x0
    if x < 1:
        got = min(1 - x, 64)
        x = 1
    while got < 64 and x <= S[_DLEN]:
        j = (x - 1) // w + 1
        off = x - ((j - 1) * w + 1)
        take = min(w - off, 64 - got)
        bits = (dprime_block(S, j) >> np.uint64(off)) & low_mask(take)
        out |= bits << np.uint64(got)
        got += take
        x += take
    return out


@njit
def c_window(S, c0):
    """C[c0 .. c0+63] as a 64-bit value (zeros outside 1..n)."""
    cv = S[_C]
    if c0 >= 1:
        return c_get_bits(cv[0], cv[1], cv[2], c0 - 1, 64)
    lead = 1 - c0
    if lead >= 64:
        return np.uint64(0)
    return c_get_bits(cv[0], cv[1], cv[2], 0, 64 - lead) << np.uint64(lead)


@njit
def decode_block(S, tf, tfp, i):
    """Block i (1-based) of D_min(A) or D_max(A), w bits, last block zero-padded."""
    w = S[_W]
    if cv_bits(S[_R], i - 1, 1):
        return np.uint64(0)
    t = i - cv_rank1(S[_R], i)
    p = cv_select(S[_P], True, t) + 1
    j = (p - 1) // w + 1
    off = p - ((j - 1) * w + 1)
    blk = dprime_block(S, j)
    below = blk & low_mask(off + 1)
    closes = _closes_before_block(S, j) + (off + 1) - popcount64(below)
    is_open = (blk >> np.uint64(off)) & np.uint64(1)
    tt = closes + 1 if is_open else closes
    cv = S[_C]
    if tt > S[_NG]:
        cp = S[_N] + 1
    else:
        cp = cv_select(cv, False, tt) + 1
    s1 = f_window(tf, dprime_window(S, p), c_window(S, cp), w)
    if not cv_bits(S[_Q], i - 1, 1):
        return s1
    ki = np.int64(S[_KI][cv_rank1(S[_Q], i) - cv_rank1(S[_R], i) - 1])
    s2 = fp_window(tfp, dprime_window(S, p - 64), c_window(S, cp - 64), w)
    both = s2 | (s1 << np.uint64(w))
    return (both >> np.uint64(w - ki)) & low_mask(w)


@njit
def decode_all(S, tf, tfp, nblocks):
    out = np.zeros(nblocks, dtype=np.uint64)
    for i in range(1, nblocks + 1):
        out[i - 1] = decode_block(S, tf, tfp, i)
    return out


def blocks_to_bits(blocks: np.ndarray, w: int, length: int) -> np.ndarray:
    shifts = np.arange(w, dtype=np.uint64)
    bits = ((blocks[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8).ravel()
    return bits[:length]


def bits_to_blocks(bits: np.ndarray, w: int) -> np.ndarray:
    nb = -(-bits.shape[0] // w)
    padded = np.zeros(nb * w, dtype=np.uint64)
    padded[: bits.shape[0]] = bits
    weights = np.uint64(1) << np.arange(w, dtype=np.uint64)
    return (padded.reshape(nb, w) * weights).sum(axis=1).astype(np.uint64)


# --------------------------------------------------------------------------
# per-side auxiliary structures for b/d


def word_size(n: int) -> int:
    return min(MAX_W, max(2, math.ceil(math.log2(max(n, 2)))))


def _compressed(bits) -> BitSeq:
    return BitSeq.build(np.asarray(bits, dtype=np.uint8), "compressed")


class SideAux:
    """Block directory for decoding D_min(A) (side 0) or D_max(A) (side 1) from T', U', C."""

    def __init__(self, t: BitSeq, u: BitSeq, c: BitSeq, side_bit: int, w: int):
        self.side_bit = side_bit
        self.w = w
        n = c.length
        t_arr, u_arr, c_arr = t.to_array(), u.to_array(), c.to_array()
        tw, tcum, _, _ = t.plain_view()
        uw = u.words if u.length else np.zeros(1, dtype=np.uint64)
        ng = int(t.length - t_arr.sum())
        self.m = root_count(t_arr, u_arr, side_bit, n)
        dp, marks, flags = walk_dprime(tw, t.length, uw, side_bit, ng, self.m, w)
        self.dlen = dp.shape[0]
        self.jr = (self.m + 1) // w + 1

        b = np.zeros(t.length, dtype=np.uint8)
        b[marks - 1] = 1
        self.b = _compressed(b)
        self.flags = flags.astype(np.uint8)
        ends = np.append(marks[1:], t.length + 1)
        bad = (ends - marks) > BAD_FACTOR * w
        self.bad = _compressed(bad)
        dp_blocks = bits_to_blocks(dp, w)
        self.bad_values = dp_blocks[self.jr + np.flatnonzero(bad)].astype(np.uint64)
        if self.bad_values.shape[0] == 0:
            self.bad_values = np.zeros(1, dtype=np.uint64)
        self.nbad = int(bad.sum())

        d, corr = expand_with_map(dp, c_arr, n)
        self.d_len = d.shape[0]
        nb = -(-self.d_len // w)
        p_bits = np.zeros(self.dlen, dtype=np.uint8)
        q_bits = np.zeros(nb, dtype=np.uint8)
        r_bits = np.zeros(nb, dtype=np.uint8)
        ki = []
        padded = np.zeros(nb * w, dtype=np.int64)
        padded[: self.d_len] = corr
        for i, blk in enumerate(padded.reshape(nb, w)):
            hit = np.flatnonzero(blk)
            if hit.size == 0:
                q_bits[i] = r_bits[i] = 1
                continue
            p_bits[blk[hit[0]] - 1] = 1
            if hit[0]:
                q_bits[i] = 1
                ki.append(int(hit[0]))
        self.p, self.q, self.r = _compressed(p_bits), _compressed(q_bits), _compressed(r_bits)
        self.ki = np.array(ki if ki else [0], dtype=np.uint8)
        self.nki = len(ki)
        self.nblocks = nb
        self.kernel = (tw, t.length, tcum, uw, side_bit, ng, self.m, self.dlen, w, self.jr,
                       self.b.c_view(), self.flags, self.bad.c_view(), self.bad_values,
                       self.p.c_view(), self.q.c_view(), self.r.c_view(), self.ki,
                       c.c_view(), n)
        self._dprime = dp
        self._d = d

    @property
    def aux_bits(self) -> int:
        """Everything beyond T', U', C: B', flags, bad blocks, P, Q, R, k_i and their indexes."""
        lg_w = max(1, math.ceil(math.log2(self.w)))
        total = self.flags.shape[0] + self.nbad * self.w + self.nki * lg_w
        for s in (self.b, self.bad, self.p, self.q, self.r):
            total += s.payload_bits + s.aux_bits
        return total

    def decode_block(self, i: int) -> int:
        tf, tfp = tables()
        return int(decode_block(self.kernel, tf, tfp, i))

    def decode_all(self) -> np.ndarray:
        tf, tfp = tables()
        blocks = decode_all(self.kernel, tf, tfp, self.nblocks)
        return blocks_to_bits(blocks, self.w, self.d_len)


# --------------------------------------------------------------------------
# full reconstruction for a/c


def _group_opens(t_arr: np.ndarray) -> np.ndarray:
    closes = np.flatnonzero(t_arr == 0)
    return np.diff(np.concatenate([[-1], closes])) - 1


def side_pops(t_arr: np.ndarray, u_arr: np.ndarray, side_bit: int) -> np.ndarray:
    """pops[r] of the r-th pushed element on one side (r = 1..groups); pops[0] unused."""
    opens = _group_opens(t_arr)
    pops = np.zeros(opens.shape[0] + 1, dtype=np.int64)
    on = np.flatnonzero(u_arr[: opens.shape[0] - 1] == side_bit)
    pops[on + 1] = opens[on] + 1
    return pops


@njit
def replay_runs(pops, runlen):
    """Replays one stack over A' with run lengths: (pops of A at each run end, parents in A')."""
    ng = pops.shape[0] - 1
    out = np.zeros(ng + 1, dtype=np.int64)
    par = np.zeros(ng + 1, dtype=np.int64)
    par[0] = -1
    stack = np.empty(ng, dtype=np.int64)
    top = 0
    for r in range(ng, 0, -1):
        s = 0
        for _ in range(pops[r]):
            top -= 1
            x = stack[top]
            par[x] = r
            s += runlen[x]
        out[r] = s
        stack[top] = r
        top += 1
    s = 0
    for t in range(top):
        s += runlen[stack[t]]
    out[0] = s
    return out, par


def repair_colors(v_prime: np.ndarray, par: np.ndarray, runlen: np.ndarray) -> np.ndarray:
    """V over A from V over A': each run of length L adds L-1 blue entries before its first node."""
    ng = par.shape[0] - 1
    left = _left_siblings(par)
    nodes = np.arange(1, ng + 1)
    keys = par[1:] * (ng + 2) + (ng + 1 - nodes)
    entry_keys = np.sort(keys[left[1:] >= 0])
    grow = np.flatnonzero(runlen[1:] > 1)
    if grow.size == 0:
        return v_prime.copy()
    slots = 1 + np.searchsorted(entry_keys, keys[grow], side="left")
    return np.insert(v_prime, np.repeat(slots, runlen[1:][grow] - 1), 1).astype(np.uint8)


def reconstruct_sequences(t_arr, u_arr, c_arr, v_prime=None, v_min_len=0):
    """(D_min, D_max, V_min, V_max) of A from T, U of A', C and optionally V of A'."""
    n = c_arr.shape[0]
    starts = np.flatnonzero(c_arr == 0)
    run_last = np.append(starts[1:], n)
    runlen = np.zeros(starts.shape[0] + 1, dtype=np.int64)
    runlen[1:] = np.diff(np.append(starts, n))
    out = []
    for side_bit in (0, 1):
        pops_a, par = replay_runs(side_pops(t_arr, u_arr, side_bit), runlen)
        opens = np.zeros(n + 1, dtype=np.int64)
        opens[0] = pops_a[0] + 1
        opens[run_last] = pops_a[1:]
        d = groups_to_bits(opens)
        v = None
        if v_prime is not None:
            part = v_prime[len(v_prime) - v_min_len:] if side_bit == 0 else \
                v_prime[: len(v_prime) - v_min_len]
            v = repair_colors(part, par, runlen)
        out.append((d, v))
    (dmin, vmin), (dmax, vmax) = out
    return dmin, dmax, vmin, vmax


# --------------------------------------------------------------------------
# bounds


def lg_binom_ceil(n: int, k: int) -> int:
    c = math.comb(n, k)
    return (c - 1).bit_length() if c > 1 else 0


def lemma6_holds(n: int, k: int, a: int) -> bool:
    """C(n, k) * 2^(a(n-k)) <= (2^a + 1)^n in exact integers."""
    return math.comb(n, k) * (1 << (a * (n - k))) <= ((1 << a) + 1) ** n


def payload_bound(variant: str, n: int, k: int) -> int:
    lc = lg_binom_ceil(n, k)
    return {"b": 3 * n - 2 * k, "d": 4 * n - k, "a": 3 * (n - k), "c": 4 * (n - k)}[variant] + lc


THEOREM_RATE = {"b": 1 + math.log2(5), "d": 3 + math.log2(3), "a": math.log2(9),
                "c": math.log2(17)}


def slack_bits(n: int) -> int:
    return math.ceil(0.03 * n)


# --------------------------------------------------------------------------
# the encoding

_SIDE_OF = {"RMINQ": (0, "rr"), "RRMINQ": (0, "rr"), "RLMINQ": (0, "rl"), "RKMINQ": (0, "rk"),
            "PSV": (0, "prev"), "NSV": (0, "next"),
            "RMAXQ": (1, "rr"), "RRMAXQ": (1, "rr"), "RLMAXQ": (1, "rl"), "RKMAXQ": (1, "rk"),
            "PLV": (1, "prev"), "NLV": (1, "next")}
_CODE = {"prev": 0, "next": 1, "rr": 2, "rl": 3, "rk": 4}
FORMAT_VERSION = b"SRQ1"


class CombinedEncoding:
    """Both colored heaps of A in one of the four joint encodings."""

    def __init__(self, variant: str, n: int, k: int, t_store: BitSeq, u_store: BitSeq,
                 c_store: BitSeq, v_store: BitSeq | None = None, v_min_len: int = 0):
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
        if (v_store is not None) != (variant in ("c", "d")):
            raise ValueError(f"variant {variant} {'needs' if variant in 'cd' else 'takes no'} V")
        self.variant = variant
        self.n, self.k = int(n), int(k)
        self.t_store, self.u_store, self.c_store = t_store, u_store, c_store
        self.v_store, self.v_min_len = v_store, int(v_min_len)
        self.w = word_size(self.n)
        self._lock = threading.Lock()
        self._heaps = None
        self._full = None
        self.aux = None
        if variant in ("b", "d"):
            self.aux = (SideAux(t_store, u_store, c_store, 0, self.w),
                        SideAux(t_store, u_store, c_store, 1, self.w))
            self.root_min_count, self.root_max_count = self.aux[0].m, self.aux[1].m
        else:
            t, u = t_store.to_array(), u_store.to_array()
            self.root_min_count = root_count(t, u, 0, self.n)
            self.root_max_count = root_count(t, u, 1, self.n)

    # -- construction ------------------------------------------------------
    @classmethod
    def encode(cls, a, variant: str = "d") -> "CombinedEncoding":
        arr = as_array(a)
        n = arr.shape[0]
        if n < 1:
            raise ValueError("the array must be non-empty")
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
        if variant in ("b", "d"):
            t_seq, u_seq, dd = build_tpup(arr)
            base = arr
        else:
            dd = dedup(arr)
            tu = build_tu(dd.a_prime)
            t_seq, u_seq = tu.t_bits, tu.u_bits
            base = dd.a_prime
        v = vml = None
        if variant in ("c", "d"):
            vmin, vmax = color_bits(base, MIN), color_bits(base, MAX)
            v = BitSeq.build(np.concatenate([vmax, vmin]), "plain")
            vml = vmin.shape[0]
        return cls(variant, n, dd.k, t_seq, u_seq, dd.c_bits, v, vml or 0)

    # -- block decoding (b/d) ----------------------------------------------
    @property
    def nblocks(self) -> int:
        return -(-(2 * self.n + 2) // self.w)

    def _block(self, side_bit: int, i: int) -> int:
        if self.aux is None:
            raise ValueError(f"block decoding needs variant b or d, not {self.variant}")
        if not 1 <= i <= self.nblocks:
            raise IndexError(f"block {i} outside 1..{self.nblocks}")
        return self.aux[side_bit].decode_block(i)

    def decode_min_block(self, i: int) -> int:
        """Block i of D_min(A) as an int; bit t is position (i-1)w + t + 1, '(' = 1."""
        return self._block(0, i)

    def decode_max_block(self, i: int) -> int:
        return self._block(1, i)

    # -- full sequences ----------------------------------------------------
    def reconstruct_full(self):
        """(D_min, D_max, V_min, V_max) as 0/1 arrays; colors are None for variant a."""
        if self.variant not in ("a", "c"):
            raise ValueError("reconstruct_full needs variant a or c; b/d decode blocks")
        if self._full is None:
            vp = self.v_store.to_array() if self.v_store is not None else None
            full = reconstruct_sequences(self.t_store.to_array(), self.u_store.to_array(),
                                         self.c_store.to_array(), vp, self.v_min_len)
            with self._lock:
                if self._full is None:
                    self._full = full
        return self._full

    def _sequences(self):
        if self.aux is not None:
            dmin, dmax = self.aux[0].decode_all(), self.aux[1].decode_all()
            vmin = vmax = None
            if self.v_store is not None:
                v = self.v_store.to_array()
                vmax, vmin = v[: v.shape[0] - self.v_min_len], v[v.shape[0] - self.v_min_len:]
            return dmin, dmax, vmin, vmax
        return self.reconstruct_full()

    def heaps(self):
        """(min heap, max heap) query structures, built once."""
        if self._heaps is None:
            dmin, dmax, vmin, vmax = self._sequences()
            pair = []
            for d, v, side in ((dmin, vmin, MIN), (dmax, vmax, MAX)):
                tree = DfudsTree(BitSeq.build(d, "plain"))
                pair.append(HeapEncoding(tree, None if v is None else BitSeq.build(v, "plain"),
                                         side))
            with self._lock:
                if self._heaps is None:
                    self._heaps = tuple(pair)
        return self._heaps

    # -- queries -----------------------------------------------------------
    @property
    def supported(self) -> tuple:
        return COLOR_FREE if self.variant in ("a", "b") else tuple(_SIDE_OF)

    def _check_kind(self, kind: str):
        if kind not in _SIDE_OF:
            raise ValueError(f"unknown query kind {kind!r}")
        if kind not in self.supported:
            raise ValueError(f"variant {self.variant} does not support {kind} (needs colors)")

    def query(self, q: QuerySpec):
        self._check_kind(q.kind)
        q.validate(self.n)
        side, name = _SIDE_OF[q.kind]
        h = self.heaps()[side]
        if name == "rk":
            return h.rk(q.i, q.j, q.k)
        if name in ("prev", "next"):
            return getattr(h, name)(q.i)
        return getattr(h, name)(q.i, q.j)

    def batch(self, kinds, i, j=None, k=None) -> np.ndarray:
        """Answers many queries at once; -1 stands for "no k-th minimum"."""
        kinds = [s.upper() for s in kinds]
        m = len(kinds)
        i = np.asarray(i, dtype=np.int64)
        j = i.copy() if j is None else np.asarray(j, dtype=np.int64)
        k = np.ones(m, dtype=np.int64) if k is None else np.asarray(k, dtype=np.int64)
        for kind in set(kinds):
            self._check_kind(kind)
        if m and (i.min() < 1 or j.max() > self.n or np.any(i > j) or k.min() < 1):
            raise ValueError("query positions out of range")
        sides = np.array([_SIDE_OF[s][0] for s in kinds], dtype=np.int64)
        codes = np.array([_CODE[_SIDE_OF[s][1]] for s in kinds], dtype=np.int64)
        out = np.empty(m, dtype=np.int64)
        for side, h in enumerate(self.heaps()):
            sel = np.flatnonzero(sides == side)
            if sel.size:
                out[sel] = h.batch(codes[sel], i[sel], j[sel], k[sel])
        return out

    # -- accounting --------------------------------------------------------
    def space_report(self) -> dict:
        payload = {"T": self.t_store.length, "U": self.u_store.length,
                   "C": self.c_store.payload_bits}
        if self.v_store is not None:
            payload["V"] = self.v_store.length
        aux = {"C_index": self.c_store.aux_bits}
        if self.aux is not None:
            for name, s in zip(("min", "max"), self.aux):
                aux[f"decode_{name}"] = s.aux_bits
        total = sum(payload.values())
        bound = payload_bound(self.variant, self.n, self.k)
        return {
            "variant": self.variant, "n": self.n, "k": self.k, "w": self.w,
            "payload": payload, "payload_bits": total,
            "aux": aux, "aux_bits": sum(aux.values()), "table_bits": table_bits(),
            "bound_bits": bound, "slack_bits": slack_bits(self.n),
            "within_bound": total <= bound + slack_bits(self.n),
            "theorem_rate": THEOREM_RATE[self.variant],
            "bits_per_element": total / self.n,
        }

    # -- serialization -----------------------------------------------------
    def to_bytes(self) -> bytes:
        head = FORMAT_VERSION + self.variant.encode() + struct.pack(
            "<QQQQQ", self.n, self.k, self.root_min_count, self.root_max_count, self.v_min_len)
        parts = [self.t_store, self.u_store, self.c_store]
        if self.v_store is not None:
            parts.append(self.v_store)
        return head + b"".join(p.to_bytes(with_directories=False) for p in parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CombinedEncoding":
        if data[:4] != FORMAT_VERSION:
            raise ValueError("not an SRQ1 encoding")
        variant = data[4:5].decode()
        n, k, rmin, rmax, vml = struct.unpack_from("<QQQQQ", data, 5)
        pos = 45
        parts = []
        for _ in range(4 if variant in ("c", "d") else 3):
            seq, pos = BitSeq.from_bytes(data, pos)
            parts.append(seq)
        if pos != len(data):
            raise ValueError("trailing bytes after the encoding")
        t, u, c = parts[:3]
        if t.mode != "plain":
            t = BitSeq.build(t.to_array(), "plain")
        if u.mode != "plain":
            u = BitSeq.build(u.to_array(), "plain")
        enc = cls(variant, n, k, t, u, c, parts[3] if len(parts) > 3 else None, vml)
        if (enc.root_min_count, enc.root_max_count) != (rmin, rmax):
            raise ValueError("root counts in the header do not match the payload")
        return enc


def encode(a, variant: str = "d") -> CombinedEncoding:
    return CombinedEncoding.encode(a, variant)
