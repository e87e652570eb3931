"""Command-line front end.

Subcommands print one JSON object per line on standard output::

    srq gen --n 100000 --dup-rate 0.3 --seed 1 a.txt
    srq build a.txt --variant d --out a.srq
    srq query a.srq queries.txt
    srq bench --sizes 1024,1048576 --variants b,d
    srq selftest --depth quick
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .combined import VARIANTS, CombinedEncoding
from .io import random_array, read_array, write_array
from .oracle import KINDS, POINT_KINDS, QuerySpec, oracle_answer


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True), flush=True)


def _fail(msg: str) -> int:
    print(f"srq: error: {msg}", file=sys.stderr)
    return 2


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SRQ_THREADS", "1")))
    except ValueError:
        return 1


# -- build / query ---------------------------------------------------------

def cmd_build(args) -> int:
    try:
        a = read_array(args.array)
    except (OSError, ValueError, UnicodeDecodeError) as exc:
        return _fail(f"cannot read {args.array}: {exc}")
    if a.shape[0] < 2:
        return _fail(f"need at least 2 elements, got {a.shape[0]}")
    t0 = time.perf_counter()
    enc = CombinedEncoding.encode(a, args.variant)
    elapsed = time.perf_counter() - t0
    out = args.out or str(Path(args.array).with_suffix(".srq"))
    try:
        Path(out).write_bytes(enc.to_bytes())
    except OSError as exc:
        return _fail(f"cannot write {out}: {exc}")
    report = enc.space_report()
    report.update(output=out, build_seconds=round(elapsed, 4))
    _emit(report)
    return 0


def parse_query(line: str) -> QuerySpec:
    parts = line.split()
    if not parts:
        raise ValueError("empty query")
    try:
        nums = [int(x) for x in parts[1:]]
    except ValueError:
        raise ValueError(f"malformed query {line.strip()!r}") from None
    kind = parts[0].upper()
    if kind not in KINDS:
        raise ValueError(f"unknown query kind {parts[0]!r}")
    if kind in POINT_KINDS:
        if len(nums) != 1:
            raise ValueError(f"{kind} takes one position")
        return QuerySpec(kind, nums[0])
    if kind in ("RKMINQ", "RKMAXQ"):
        if len(nums) != 3:
            raise ValueError(f"{kind} takes i j k")
        return QuerySpec(kind, *nums)
    if len(nums) != 2:
        raise ValueError(f"{kind} takes i j")
    return QuerySpec(kind, *nums)


def cmd_query(args) -> int:
    try:
        enc = CombinedEncoding.from_bytes(Path(args.encoding).read_bytes())
        lines = Path(args.script).read_text().splitlines()
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    errors = 0
    for num, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            ans = enc.query(parse_query(line))
            print("NONE" if ans is None else ans)
        except (ValueError, IndexError) as exc:
            errors += 1
            print(f"ERROR line {num}: {exc}")
    sys.stdout.flush()
    return 1 if errors else 0


def cmd_gen(args) -> int:
    write_array(args.out, random_array(args.n, args.dup_rate, args.seed), args.format)
    return 0


# -- bench -----------------------------------------------------------------

def random_queries(n: int, kinds, count: int, rng):
    i = rng.integers(1, n + 1, size=count)
    j = rng.integers(1, n + 1, size=count)
    i, j = np.minimum(i, j), np.maximum(i, j)
    k = rng.integers(1, 4, size=count)
    names = [kinds[t] for t in rng.integers(0, len(kinds), size=count)]
    return names, i, j, k


def bench_cell(n: int, variant: str, dup_rate: float, seed: int, count: int) -> list:
    a = random_array(n, dup_rate, seed)
    t0 = time.perf_counter()
    enc = CombinedEncoding.encode(a, variant)
    enc.heaps()
    build = time.perf_counter() - t0
    rep = enc.space_report()
    rng = np.random.default_rng(seed + 1)
    rows = []
    for kind in enc.supported:
        names, i, j, k = random_queries(n, (kind,), count, rng)
        enc.batch(names[:16], i[:16], j[:16], k[:16])  # warm-up
        t0 = time.perf_counter()
        enc.batch(names, i, j, k)
        dt = time.perf_counter() - t0
        rows.append({"n": n, "variant": variant, "dup_rate": dup_rate, "kind": kind,
                     "queries": count, "mean_ns": round(dt / count * 1e9, 1),
                     "qps": round(count / dt), "build_seconds": round(build, 4),
                     "bits_per_element": round(rep["bits_per_element"], 4),
                     "aux_bits_per_element": round(rep["aux_bits"] / n, 4)})
    return rows


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    for n in sizes:
        if n < 2 or n & (n - 1):
            return _fail(f"sizes must be powers of two >= 2, got {n}")
    variants = args.variants.split(",")
    for v in variants:
        if v not in VARIANTS:
            return _fail(f"unknown variant {v!r}")
    cells = [(n, v) for n in sizes for v in variants]
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = pool.map(lambda c: bench_cell(c[0], c[1], args.dup_rate, args.seed,
                                                args.queries), cells)
        for rows in results:
            for row in rows:
                _emit(row)
    return 0


# -- selftest --------------------------------------------------------------

def all_queries(n: int) -> list:
    out = []
    for kind in KINDS:
        if kind in POINT_KINDS:
            out += [QuerySpec(kind, i) for i in range(1, n + 1)]
        elif kind in ("RKMINQ", "RKMAXQ"):
            out += [QuerySpec(kind, i, j, k) for i in range(1, n + 1)
                    for j in range(i, n + 1) for k in range(1, j - i + 3)]
        else:
            out += [QuerySpec(kind, i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    return out


def check_array(a, variants=VARIANTS, queries=None, corrupt=None):
    """First disagreement with the oracle as a dict, or None."""
    n = len(a)
    queries = all_queries(n) if queries is None else queries
    truth = [oracle_answer(a, q) for q in queries]
    for v in variants:
        data = CombinedEncoding.encode(a, v).to_bytes()
        if corrupt is not None:
            data = corrupt(data)
        try:
            enc = CombinedEncoding.from_bytes(data)
            sel = [t for t, q in enumerate(queries) if q.kind in enc.supported]
            got = enc.batch([queries[t].kind for t in sel], [queries[t].i for t in sel],
                            [queries[t].j or queries[t].i for t in sel],
                            [queries[t].k or 1 for t in sel])
        except Exception as exc:  # a corrupted payload may not even decode
            return {"array": list(map(int, a)), "variant": v, "error": repr(exc)}
        for t, g in zip(sel, got):
            g = None if g < 0 else int(g)
            if g != truth[t]:
                return {"array": list(map(int, a)), "variant": v, "query": str(queries[t]),
                        "expected": truth[t], "got": g}
    return None


def flip_payload_bit(seed: int):
    """Corruptor flipping one bit of the T' words (past the fixed header)."""
    def corrupt(data: bytes) -> bytes:
        buf = bytearray(data)
        body = 45 + 21  # encoding header, then the BitSeq header of T
        if len(buf) > body:
            buf[body] ^= 1 << (seed % 8)
        return bytes(buf)
    return corrupt


def selftest(max_len: int, corrupt=None):
    """Exhaustive check over {1,2,3}^n for n <= max_len; (arrays checked, first failure)."""
    checked = 0
    for n in range(1, max_len + 1):
        queries = all_queries(n)
        for a in itertools.product((1, 2, 3), repeat=n):
            checked += 1
            bad = check_array(a, queries=queries, corrupt=corrupt)
            if bad is not None:
                return checked, bad
    return checked, None


def cmd_selftest(args) -> int:
    max_len = 7 if args.depth == "exhaustive" else 4
    corrupt = flip_payload_bit(args.seed) if args.corrupt else None
    t0 = time.perf_counter()
    checked, bad = selftest(max_len, corrupt)
    _emit({"depth": args.depth, "arrays": checked, "passed": bad is None,
           "seconds": round(time.perf_counter() - t0, 2), "counterexample": bad})
    return 0 if bad is None else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="srq", description="Succinct range and nearest-value queries.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="encode an array file")
    b.add_argument("array")
    b.add_argument("--variant", choices=VARIANTS, default="d")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer a query script against an encoding")
    q.add_argument("encoding")
    q.add_argument("script")
    q.set_defaults(func=cmd_query)

    g = sub.add_parser("gen", help="write a random array file")
    g.add_argument("out")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dup-rate", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("text", "binary"), default="text")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("bench", help="build time, space and query latency per size and variant")
    r.add_argument("--sizes", default="1024,65536,1048576")
    r.add_argument("--variants", default="b,d")
    r.add_argument("--dup-rate", type=float, default=0.0)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--queries", type=int, default=100000)
    r.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="exhaustive oracle comparison on small arrays")
    s.add_argument("--depth", choices=("quick", "exhaustive"), default="quick")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--corrupt", action="store_true", help="flip one payload bit first")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
