"""Compiled kernels vs the pure-Python fallback (SRQ_NO_JIT=1).

Each mode runs in its own interpreter because the switch is read at import.
Prints one JSON object per (mode, kernel) and a speedup table.

    python3 benchmarks/bench_kernels.py --n 20000 --repeat 3
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import numpy as np
from srq._jit import JIT_ENABLED
from srq.bitseq import BitSeq
from srq.bp import ParenSeq
from srq.combined import CombinedEncoding
from srq.heap_build import dfuds_bits
from srq.io import random_array
from srq.cli import random_queries

n, repeat, count = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3])
rng = np.random.default_rng(0)
a = random_array(n, 0.3, seed=1)
bits = (rng.random(8 * n) < 0.4).astype(np.uint8)
plain, comp = BitSeq.build(bits, "plain"), BitSeq.build(bits, "compressed")
ps = ParenSeq(dfuds_bits(a, "min"))
opens = [int(p) + 1 for p in np.flatnonzero(dfuds_bits(a, "min") == 1)[:count]]
pos = [int(p) for p in rng.integers(1, 8 * n, count)]
enc = CombinedEncoding.encode(a, "d")
enc.heaps()
names, qi, qj, qk = random_queries(n, enc.supported, count, rng)

def best(fn):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); times.append(time.perf_counter() - t0)
    return min(times)

kernels = {
    "rank_plain": lambda: [plain.rank(p, "1") for p in pos],
    "rank_compressed": lambda: [comp.rank(p, "1") for p in pos],
    "select_pair": lambda: [plain.select(1 + p % 1000, "11") for p in pos],
    "findclose": lambda: [ps.findclose(p) for p in opens],
    "block_decode": lambda: [enc.aux[0].decode_block(1 + p % enc.nblocks) for p in pos],
    "query_batch": lambda: enc.batch(names, qi, qj, qk),
    "encode_d": lambda: CombinedEncoding.encode(a, "d"),
}
for name, fn in kernels.items():
    calls = 1 if name == "encode_d" else count
    t = best(fn)
    print(json.dumps({"jit": JIT_ENABLED, "kernel": name, "n": n, "calls": calls,
                      "seconds": round(t, 5), "us_per_call": round(t / calls * 1e6, 3)}))
"""


def run_mode(no_jit, args):
    env = dict(os.environ)
    env.pop("SRQ_NO_JIT", None)
    if no_jit:
        env["SRQ_NO_JIT"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKLOAD, str(args.n), str(args.repeat),
                          str(args.calls)], env=env, check=True, capture_output=True, text=True)
    return [json.loads(line) for line in out.stdout.splitlines()]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--calls", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    fast, slow = run_mode(False, args), run_mode(True, args)
    for row in fast + slow:
        print(json.dumps(row))
    print(f"\n{'kernel':<18}{'jit us':>12}{'pure us':>12}{'speedup':>10}")
    for f, s in zip(fast, slow):
        print(f"{f['kernel']:<18}{f['us_per_call']:>12.2f}{s['us_per_call']:>12.2f}"
              f"{s['seconds'] / f['seconds']:>9.1f}x")


if __name__ == "__main__":
    main()
