"""Array files: whitespace-separated integers, or the binary "SRQA" layout.

Binary layout: ``b"SRQA"``, a little-endian u64 count, then that many
little-endian int64 values.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

ARRAY_MAGIC = b"SRQA"


def parse_text(text: str) -> np.ndarray:
    fields = text.split()
    try:
        return np.array([int(x) for x in fields], dtype=np.int64)
    except ValueError as exc:
        raise ValueError(f"array text must hold integers only: {exc}") from None
    except OverflowError:
        raise ValueError("array values must fit in 64-bit signed integers") from None


def parse_binary(data: bytes) -> np.ndarray:
    if data[:4] != ARRAY_MAGIC:
        raise ValueError("missing SRQA header")
    if len(data) < 12:
        raise ValueError("truncated SRQA header")
    (count,) = struct.unpack_from("<Q", data, 4)
    if len(data) != 12 + 8 * count:
        raise ValueError(f"SRQA body holds {len(data) - 12} bytes, expected {8 * count}")
    return np.frombuffer(data, dtype="<i8", count=count, offset=12).astype(np.int64)


def read_array(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] == ARRAY_MAGIC:
        return parse_binary(data)
    return parse_text(data.decode("utf-8"))


def array_bytes(a) -> bytes:
    arr = np.asarray(a, dtype="<i8")
    return ARRAY_MAGIC + struct.pack("<Q", arr.shape[0]) + arr.tobytes()


def write_array(path, a, fmt: str = "text") -> None:
    if fmt == "binary":
        Path(path).write_bytes(array_bytes(a))
    elif fmt == "text":
        Path(path).write_text(" ".join(str(int(x)) for x in a) + "\n")
    else:
        raise ValueError(f"format must be 'text' or 'binary', got {fmt!r}")


def random_array(n: int, dup_rate: float = 0.0, seed: int = 0) -> np.ndarray:
    """Random values where each position repeats its left neighbour with probability dup_rate."""
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 1 << 40, size=n, dtype=np.int64)
    if n and dup_rate > 0:
        dup = rng.random(n) < dup_rate
        dup[0] = False
        idx = np.arange(n)
        idx[dup] = 0
        np.maximum.accumulate(idx, out=idx)
        a = a[idx]
    return a
