"""Immutable bit sequences with rank/select over single bits and short patterns.

Positions in the public API are 1-based (``S[1..n]``); internally bits are
stored LSB-first in ``uint64`` words, bit ``p`` (0-based) living in word
``p >> 6`` at offset ``p & 63``.

Two storage modes are provided:

* ``plain``: the raw words plus a cumulative count every 512 bits.
* ``compressed``: 63-bit blocks stored as (class, enumerative offset). The
  offsets form the payload; classes and superblock pointers are bookkeeping
  and are reported as auxiliary bits.

A pattern occurrence is identified by its starting position. ``rank(i, p)``
counts occurrences that end at or before ``i``, so it is monotone in ``i``.
"""
from __future__ import annotations

import math
import struct

import numpy as np

from ._jit import JIT_ENABLED, njit

MAGIC = b"SRQ1"
RANK_BLOCK = 512  # bits per cumulative-count entry
SAMPLE = 512  # occurrences per select sample
RRR_BITS = 63
SB_BLOCKS = 64  # RRR blocks per superblock (4032 bits)
MAX_PATTERN = 8

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_EMPTY_U64 = np.zeros(1, dtype=np.uint64)
_EMPTY_U8 = np.zeros(1, dtype=np.uint8)
_EMPTY_I64 = np.zeros(1, dtype=np.int64)


def _popcount_swar(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


def _popcount_py(x):
    return int(x).bit_count()


popcount64 = njit(_popcount_swar) if JIT_ENABLED else _popcount_py


@njit
def low_mask(r):
    if r >= 64:
        return _ALL
    if r <= 0:
        return _U0
    return (_U1 << np.uint64(r)) - _U1


@njit
def select_in_word(x, r):
    """0-based offset of the r-th (1-based) set bit of x."""
    for _ in range(r - 1):
        x &= x - _U1
    return popcount64((x & (~x + _U1)) - _U1)


@njit
def get64p(words, p):
    """64 bits starting at bit p of a plain word array (zeros past the end)."""
    nw = words.shape[0]
    wi = p >> 6
    off = p & 63
    lo = words[wi] if wi < nw else _U0
    if off == 0:
        return lo
    hi = words[wi + 1] if wi + 1 < nw else _U0
    return (lo >> np.uint64(off)) | (hi << np.uint64(64 - off))


@njit
def get_bit(words, p):
    return np.int64((words[p >> 6] >> np.uint64(p & 63)) & _U1)


# --------------------------------------------------------------------------
# enumerative (class, offset) coding of 63-bit blocks


def _binomials():
    tab = np.zeros((64, 64), dtype=np.int64)
    for t in range(64):
        for c in range(64):
            tab[t, c] = math.comb(t, c) if c <= t else 0
    widths = np.array([(math.comb(RRR_BITS, c) - 1).bit_length() for c in range(RRR_BITS + 1)],
                      dtype=np.int64)
    return tab, widths


BINOM, WIDTH = _binomials()


@njit
def rrr_offset(v, c):
    off = np.int64(0)
    j = 0
    for t in range(RRR_BITS):
        if (v >> np.uint64(t)) & _U1:
            j += 1
            off += BINOM[t, j]
    return off


@njit
def rrr_value(off, c):
    v = _U0
    for t in range(RRR_BITS - 1, -1, -1):
        if c == 0:
            break
        b = BINOM[t, c]
        if off >= b:
            v |= _U1 << np.uint64(t)
            off -= b
            c -= 1
    return v


@njit
def _write_bits(stream, ptr, value, width):
    if width == 0:
        return
    wi = ptr >> 6
    off = ptr & 63
    stream[wi] |= value << np.uint64(off)
    if off + width > 64:
        stream[wi + 1] |= value >> np.uint64(64 - off)


@njit
def _rrr_encode(words, nbits):
    nblocks = (nbits + RRR_BITS - 1) // RRR_BITS
    classes = np.zeros(nblocks, dtype=np.uint8)
    offsets = np.zeros(nblocks, dtype=np.int64)
    total = 0
    for b in range(nblocks):
        v = get64p(words, b * RRR_BITS) & low_mask(RRR_BITS)
        c = popcount64(v)
        classes[b] = c
        offsets[b] = rrr_offset(v, c)
        total += WIDTH[c]
    stream = np.zeros((total + 63) // 64 + 1, dtype=np.uint64)
    nsb = (nblocks + SB_BLOCKS - 1) // SB_BLOCKS
    sb_ptr = np.zeros(nsb + 1, dtype=np.int64)
    sb_rank = np.zeros(nsb + 1, dtype=np.int64)
    ptr = 0
    ones = 0
    for b in range(nblocks):
        if b % SB_BLOCKS == 0:
            sb_ptr[b // SB_BLOCKS] = ptr
            sb_rank[b // SB_BLOCKS] = ones
        w = WIDTH[classes[b]]
        _write_bits(stream, ptr, np.uint64(offsets[b]), w)
        ptr += w
        ones += np.int64(classes[b])
    sb_ptr[nsb] = ptr
    sb_rank[nsb] = ones
    return classes, stream, sb_ptr, sb_rank, total


@njit
def _rrr_index(classes, stream):
    nblocks = classes.shape[0]
    nsb = (nblocks + SB_BLOCKS - 1) // SB_BLOCKS
    sb_ptr = np.zeros(nsb + 1, dtype=np.int64)
    sb_rank = np.zeros(nsb + 1, dtype=np.int64)
    ptr = 0
    ones = 0
    for b in range(nblocks):
        if b % SB_BLOCKS == 0:
            sb_ptr[b // SB_BLOCKS] = ptr
            sb_rank[b // SB_BLOCKS] = ones
        ptr += WIDTH[classes[b]]
        ones += np.int64(classes[b])
    sb_ptr[nsb] = ptr
    sb_rank[nsb] = ones
    return sb_ptr, sb_rank


@njit
def c_block(classes, stream, sb_ptr, b):
    """Decoded 63-bit value of RRR block b (zero past the end)."""
    if b >= classes.shape[0]:
        return _U0
    sb = b // SB_BLOCKS
    ptr = sb_ptr[sb]
    for q in range(sb * SB_BLOCKS, b):
        ptr += WIDTH[classes[q]]
    c = np.int64(classes[b])
    w = WIDTH[c]
    off = np.int64(get64p(stream, ptr) & low_mask(w))
    return rrr_value(off, c)


@njit
def c_get_bits(classes, stream, sb_ptr, p, length):
    res = _U0
    got = 0
    while got < length:
        q = p + got
        b = q // RRR_BITS
        o = q - b * RRR_BITS
        v = c_block(classes, stream, sb_ptr, b) >> np.uint64(o)
        take = min(RRR_BITS - o, length - got)
        res |= (v & low_mask(take)) << np.uint64(got)
        got += take
    return res


@njit
def c_rank1(classes, stream, sb_ptr, sb_rank, x):
    """Ones in bits [0, x)."""
    b = x // RRR_BITS
    sb = b // SB_BLOCKS
    c = sb_rank[sb]
    for q in range(sb * SB_BLOCKS, b):
        c += np.int64(classes[q])
    r = x - b * RRR_BITS
    if r > 0:
        c += popcount64(c_block(classes, stream, sb_ptr, b) & low_mask(r))
    return c


@njit
def c_select(classes, stream, sb_ptr, sb_rank, nbits, bit, j):
    """0-based position of the j-th (1-based) occurrence of ``bit``."""
    nsb = sb_rank.shape[0] - 1
    lo, hi = 0, nsb - 1
    while lo < hi:  # last superblock whose prefix count is < j
        mid = (lo + hi + 1) >> 1
        before = sb_rank[mid] if bit else mid * SB_BLOCKS * RRR_BITS - sb_rank[mid]
        if before < j:
            lo = mid
        else:
            hi = mid - 1
    sb = lo
    r = j - (sb_rank[sb] if bit else sb * SB_BLOCKS * RRR_BITS - sb_rank[sb])
    b = sb * SB_BLOCKS
    while True:
        blen = min(RRR_BITS, nbits - b * RRR_BITS)
        cnt = np.int64(classes[b]) if bit else blen - np.int64(classes[b])
        if cnt >= r:
            v = c_block(classes, stream, sb_ptr, b)
            if not bit:
                v = ~v & low_mask(blen)
            return b * RRR_BITS + select_in_word(v, r)
        r -= cnt
        b += 1


# --------------------------------------------------------------------------
# generic pattern machinery over either storage mode


@njit
def _get64(mode, words, classes, stream, sb_ptr, p):
    if mode == 0:
        return get64p(words, p)
    return c_get_bits(classes, stream, sb_ptr, p, 64)


@njit
def match_word(mode, words, classes, stream, sb_ptr, nbits, base, pv, plen):
    """Bitmap of pattern starts in [base, base + 64)."""
    valid = nbits - plen + 1 - base
    if valid <= 0:
        return _U0
    m = _ALL
    for t in range(plen):
        g = _get64(mode, words, classes, stream, sb_ptr, base + t)
        if (pv >> t) & 1:
            m &= g
        else:
            m &= ~g
    if valid < 64:
        m &= low_mask(valid)
    return m


@njit
def build_cum(mode, words, classes, stream, sb_ptr, nbits, pv, plen):
    nw = (nbits + 63) >> 6
    nblk = (nbits + RANK_BLOCK - 1) // RANK_BLOCK
    cum = np.zeros(nblk + 1, dtype=np.int64)
    c = 0
    for wi in range(nw):
        if (wi & 7) == 0:
            cum[wi >> 3] = c
        c += popcount64(match_word(mode, words, classes, stream, sb_ptr, nbits, wi << 6, pv, plen))
    cum[nblk] = c
    return cum


@njit
def cum_at(cum, b, comp, nbits):
    if comp:
        return min(b * RANK_BLOCK, nbits) - cum[b]
    return np.int64(cum[b])


@njit
def build_samples(cum, comp, nbits):
    nblk = cum.shape[0] - 1
    total = cum_at(cum, nblk, comp, nbits)
    ns = (total + SAMPLE - 1) // SAMPLE
    samp = np.zeros(ns + 1, dtype=np.int64)
    t = 0
    for b in range(nblk):
        while t < ns and t * SAMPLE + 1 <= cum_at(cum, b + 1, comp, nbits):
            samp[t] = b
            t += 1
    samp[ns] = max(nblk - 1, 0)
    return samp


@njit
def rank_starts(mode, words, classes, stream, sb_ptr, nbits, cum, pv, plen, x):
    """Occurrences of the pattern starting in [0, x)."""
    if x <= 0:
        return 0
    if x > nbits:
        x = nbits
    blk = x // RANK_BLOCK
    c = np.int64(cum[blk])
    wi = blk * (RANK_BLOCK // 64)
    last = x >> 6
    while wi < last:
        c += popcount64(match_word(mode, words, classes, stream, sb_ptr, nbits, wi << 6, pv, plen))
        wi += 1
    rem = x & 63
    if rem:
        m = match_word(mode, words, classes, stream, sb_ptr, nbits, last << 6, pv, plen)
        c += popcount64(m & low_mask(rem))
    return c


@njit
def select_starts(mode, words, classes, stream, sb_ptr, nbits, cum, samp, comp, pv, plen, j):
    """0-based start of the j-th (1-based) occurrence; ``comp`` reads cum as zeros."""
    t = (j - 1) // SAMPLE
    lo = samp[t]
    hi = samp[t + 1] if t + 1 < samp.shape[0] else cum.shape[0] - 2
    while lo < hi:  # largest block whose prefix count is < j
        mid = (lo + hi + 1) >> 1
        if cum_at(cum, mid, comp, nbits) < j:
            lo = mid
        else:
            hi = mid - 1
    r = j - cum_at(cum, lo, comp, nbits)
    wi = lo * (RANK_BLOCK // 64)
    while True:
        m = match_word(mode, words, classes, stream, sb_ptr, nbits, wi << 6, pv, plen)
        pc = popcount64(m)
        if pc >= r:
            return (wi << 6) + select_in_word(m, r)
        r -= pc
        wi += 1


# --------------------------------------------------------------------------


def _parse_pattern(pattern):
    if isinstance(pattern, int):
        pattern = str(pattern)
    s = pattern.replace("(", "1").replace(")", "0")
    if not s or len(s) > MAX_PATTERN or set(s) - {"0", "1"}:
        raise ValueError(f"pattern must be 1..{MAX_PATTERN} bits of 0/1 or ( ): {pattern!r}")
    pv = sum(1 << t for t, ch in enumerate(s) if ch == "1")
    return s, pv, len(s)


def to_bit_array(bits) -> np.ndarray:
    """Normalize bits given as str ('01' or '()'), iterable of ints, or array."""
    if isinstance(bits, str):
        s = bits.replace("(", "1").replace(")", "0").replace(" ", "")
        if set(s) - {"0", "1"}:
            raise ValueError("bit string may only contain 0/1 or ( )")
        return (np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")).astype(np.uint8)
    arr = np.asarray(bits, dtype=np.uint8).ravel()
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return arr


def pack_bits(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0]
    nw = (n + 63) >> 6
    padded = np.zeros(nw * 64, dtype=np.uint8)
    padded[:n] = arr
    return np.packbits(padded.reshape(-1, 8)[:, ::-1]).view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.asarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].copy()


class BitSeq:
    """Immutable bit sequence; see the module docstring for conventions."""

    __slots__ = ("length", "mode", "words", "classes", "stream", "sb_ptr", "sb_rank",
                 "_payload_bits", "_dirs")

    def __init__(self, length, mode, words=None, classes=None, stream=None):
        self.length = int(length)
        self.mode = mode
        self._dirs = {}
        if mode == "plain":
            self.words = words
            self.classes = _EMPTY_U8
            self.stream = _EMPTY_U64
            self.sb_ptr = _EMPTY_I64
            self.sb_rank = _EMPTY_I64
            self._payload_bits = self.length
            self._directory("1")
        elif mode == "compressed":
            self.words = _EMPTY_U64
            self.classes = classes
            self.stream = stream
            self.sb_ptr, self.sb_rank = _rrr_index(classes, stream)
            self._payload_bits = int(self.sb_ptr[-1])
        else:
            raise ValueError(f"unknown storage mode {mode!r}")

    @classmethod
    def build(cls, bits, mode="plain") -> "BitSeq":
        arr = to_bit_array(bits)
        words = pack_bits(arr)
        if mode == "plain":
            return cls(arr.shape[0], "plain", words=words)
        if mode == "compressed":
            classes, stream, _, _, _ = _rrr_encode(words, arr.shape[0])
            return cls(arr.shape[0], "compressed", classes=classes, stream=stream)
        raise ValueError(f"unknown storage mode {mode!r}")

    # -- accounting --------------------------------------------------------
    @property
    def payload_bits(self) -> int:
        return self._payload_bits

    @property
    def aux_bits(self) -> int:
        bits = 0
        if self.mode == "compressed":
            bits += 6 * self.classes.shape[0] + 64 * (self.sb_ptr.shape[0] + self.sb_rank.shape[0])
        for cum, samples in self._dirs.values():
            bits += 32 * cum.shape[0]
            bits += sum(32 * s.shape[0] for s in samples.values())
        return bits

    @property
    def ones(self) -> int:
        return self.rank(self.length, "1")

    def __len__(self):
        return self.length

    # -- internals ---------------------------------------------------------
    def plain_view(self):
        """(words, cum1, samples of 1s, samples of 0s) for plain-mode kernels."""
        if self.mode != "plain":
            raise ValueError("kernel view requires plain storage")
        cum, s1 = self._samples("1")
        _, s0 = self._samples("0")
        return self.words, cum, s1, s0

    def c_view(self):
        """(classes, stream, sb_ptr, sb_rank, length) for compressed-mode kernels."""
        if self.mode != "compressed":
            raise ValueError("kernel view requires compressed storage")
        return self.classes, self.stream, self.sb_ptr, self.sb_rank, self.length

    def _args(self):
        return (0 if self.mode == "plain" else 1, self.words, self.classes, self.stream,
                self.sb_ptr, self.length)

    def _directory(self, s):
        d = self._dirs.get(s)
        if d is None:
            _, pv, plen = _parse_pattern(s)
            cum = build_cum(*self._args(), pv, plen)
            d = (cum, {})
            self._dirs[s] = d
        return d

    def _samples(self, s):
        key = "1" if s == "0" else s
        cum, samples = self._directory(key)
        if s not in samples:
            samples[s] = build_samples(cum, s == "0", self.length)
        return cum, samples[s]

    # -- queries -----------------------------------------------------------
    def access(self, i: int) -> int:
        if not 1 <= i <= self.length:
            raise IndexError(f"position {i} outside 1..{self.length}")
        return int(self.get_bits(i - 1, 1))

    __getitem__ = access

    def get_bits(self, start0: int, length: int) -> int:
        """``length`` (<= 64) bits from 0-based ``start0`` as an LSB-first int."""
        mode, words, classes, stream, sb_ptr, _ = self._args()
        v = _get64(mode, words, classes, stream, sb_ptr, start0)
        return int(v) & ((1 << length) - 1)

    def rank(self, i: int, pattern="1") -> int:
        if not 0 <= i <= self.length:
            raise IndexError(f"rank position {i} outside 0..{self.length}")
        s, pv, plen = _parse_pattern(pattern)
        x = i - plen + 1
        if x <= 0:
            return 0
        if self.mode == "compressed" and plen == 1:
            ones = int(c_rank1(self.classes, self.stream, self.sb_ptr, self.sb_rank, x))
            return ones if s == "1" else x - ones
        if s == "0":
            return x - self.rank(x, "1")
        cum, _ = self._directory(s)
        return int(rank_starts(*self._args(), cum, pv, plen, x))

    def count(self, pattern="1") -> int:
        return self.rank(self.length, pattern)

    def select(self, j: int, pattern="1") -> int:
        s, pv, plen = _parse_pattern(pattern)
        total = self.count(s)
        if not 1 <= j <= total:
            raise IndexError(f"occurrence {j} outside 1..{total} for pattern {s!r}")
        if self.mode == "compressed" and plen == 1:
            return 1 + int(c_select(self.classes, self.stream, self.sb_ptr, self.sb_rank,
                                    self.length, s == "1", j))
        cum, samp = self._samples(s)
        return 1 + int(select_starts(*self._args(), cum, samp, s == "0", pv, plen, j))

    def extract(self, i: int, length: int) -> str:
        if length < 0 or length > 64 or i < 1 or i + length - 1 > self.length:
            raise IndexError(f"window [{i}, {i + length - 1}] outside 1..{self.length}")
        v = self.get_bits(i - 1, length)
        return "".join("1" if (v >> t) & 1 else "0" for t in range(length))

    def to_array(self) -> np.ndarray:
        if self.mode == "plain":
            return unpack_bits(self.words, self.length)
        out = np.zeros(self.length, dtype=np.uint8)
        for p in range(0, self.length, 64):
            v = self.get_bits(p, min(64, self.length - p))
            chunk = unpack_bits(np.array([v], dtype=np.uint64), min(64, self.length - p))
            out[p:p + chunk.shape[0]] = chunk
        return out

    def to_string(self, parens=False) -> str:
        arr = self.to_array()
        table = np.array([ord(")"), ord("(")] if parens else [ord("0"), ord("1")], dtype=np.uint8)
        return table[arr].tobytes().decode()

    def __eq__(self, other):
        if not isinstance(other, BitSeq):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.to_array(), other.to_array())

    def __repr__(self):
        return f"BitSeq(length={self.length}, mode={self.mode!r})"

    # -- serialization -----------------------------------------------------
    def to_bytes(self, with_directories=True) -> bytes:
        mode = 0 if self.mode == "plain" else 1
        parts = [MAGIC, struct.pack("<QB", self.length, mode)]
        if self.mode == "plain":
            payload = np.ascontiguousarray(self.words, dtype="<u8")
            parts += [struct.pack("<Q", payload.shape[0]), payload.tobytes()]
            cum = self._dirs["1"][0].astype("<u4") if with_directories else np.zeros(0, "<u4")
            parts += [struct.pack("<Q", cum.shape[0]), cum.tobytes()]
        else:
            payload = np.ascontiguousarray(self.stream, dtype="<u8")
            parts += [struct.pack("<Q", payload.shape[0]), payload.tobytes()]
            parts += [struct.pack("<Q", self.classes.shape[0]), self.classes.tobytes()]
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0):
        """Parse a serialized sequence; returns ``(seq, next_offset)``."""
        if data[offset:offset + 4] != MAGIC:
            raise ValueError("bad magic: not an SRQ1 bit sequence")
        length, mode = struct.unpack_from("<QB", data, offset + 4)
        pos = offset + 13
        (nw,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        payload = np.frombuffer(data, dtype="<u8", count=nw, offset=pos).astype(np.uint64)
        pos += 8 * nw
        (nd,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        if mode == 0:
            pos += 4 * nd  # directories are rebuilt deterministically
            return cls(length, "plain", words=payload), pos
        if mode == 1:
            classes = np.frombuffer(data, dtype=np.uint8, count=nd, offset=pos).copy()
            pos += nd
            return cls(length, "compressed", classes=classes, stream=payload), pos
        raise ValueError(f"unknown mode byte {mode}")


def lg_binomial(n: int, m: int) -> float:
    """lg C(n, m) evaluated exactly on big integers."""
    c = math.comb(n, m)
    return math.log2(c) if c > 0 else float("-inf")


@njit
def rank1p(words, cum, x):
    """Ones in bits [0, x) of a plain sequence with its '1' directory."""
    blk = x // RANK_BLOCK
    c = np.int64(cum[blk])
    wi = blk * (RANK_BLOCK // 64)
    last = x >> 6
    while wi < last:
        c += popcount64(words[wi])
        wi += 1
    rem = x & 63
    if rem:
        c += popcount64(words[last] & low_mask(rem))
    return c


@njit
def select_bit_p(words, nbits, cum, samp, bit, j):
    """0-based position of the j-th 1 (bit=1) or 0 (bit=0) of a plain sequence."""
    return select_starts(0, words, _EMPTY_U8, _EMPTY_U64, _EMPTY_I64, nbits, cum, samp,
                         bit == 0, bit, 1, j)


@njit
def cv_rank1(cv, x):
    """Ones in bits [0, x) of a compressed view."""
    return c_rank1(cv[0], cv[1], cv[2], cv[3], x)


@njit
def cv_select(cv, bit, j):
    return c_select(cv[0], cv[1], cv[2], cv[3], cv[4], bit, j)


@njit
def cv_bits(cv, p, length):
    return c_get_bits(cv[0], cv[1], cv[2], p, length)
