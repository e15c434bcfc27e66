"""Compare the numba and pure-numpy kernels on the same generated instances.

Each backend runs in its own interpreter because the choice is fixed at
import time (``COMMA_NUMBA``).  Numba compile time is excluded by a warm-up
call and reported separately.

    python benchmarks/bench_backends.py --n 100000 1000000 --k 1000
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
t0 = time.perf_counter()
from comma import BACKEND
from comma.core import compute_intervals, match
from comma.instances import GeneratorConfig, generate_instance
from comma.spatial import build_index
t_import = time.perf_counter() - t0

n, k, r, seed, naive_k = (int(sys.argv[1]), int(sys.argv[2]), float(sys.argv[3]),
                          int(sys.argv[4]), int(sys.argv[5]))
inst = generate_instance(GeneratorConfig(n=n, k=k, r=r, seed=seed))
t0 = time.perf_counter()
compute_intervals(inst.path, inst.positions[:1], r)  # compile / warm up
compute_intervals(inst.path, inst.positions[:1], r, naive=True)
t_warm = time.perf_counter() - t0

def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0

idx, t_build = timed(lambda: build_index(inst.path))
_, t_indexed = timed(lambda: compute_intervals(inst.path, inst.positions, r, idx))
_, t_naive = timed(lambda: compute_intervals(inst.path, inst.positions[:naive_k], r, naive=True))
res, t_match = timed(lambda: match(inst, index=idx))
print(json.dumps({"backend": BACKEND, "n": n, "k": k, "import": t_import, "warmup": t_warm,
                  "build": t_build, "intervals": t_indexed,
                  "naive_per_disk": t_naive / naive_k, "match": t_match,
                  "status": res.status.value}))
"""


def run(flag: str, n: int, k: int, r: float, seed: int, naive_k: int) -> dict:
    env = dict(os.environ, COMMA_NUMBA=flag)
    proc = subprocess.run([sys.executable, "-c", WORKER, str(n), str(k), str(r), str(seed),
                           str(naive_k)], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[10**5, 10**6])
    ap.add_argument("--k", type=int, default=1000)
    ap.add_argument("--r", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--naive-disks", type=int, default=5,
                    help="disks timed with the naive scan (it is linear in n per disk)")
    args = ap.parse_args(argv)

    cols = ["backend", "n", "k", "warmup", "build", "intervals", "naive_per_disk", "match", "status"]
    print(",".join(cols))
    for n in args.n:
        rows = [run(flag, n, args.k, args.r, args.seed, args.naive_disks) for flag in ("1", "0")]
        for row in rows:
            print(",".join(f"{row[c]:.6f}" if isinstance(row[c], float) else str(row[c]) for c in cols))
        nb, np_ = rows
        print(f"# n={n}: numba/numpy speedup  intervals {np_['intervals'] / nb['intervals']:.1f}x"
              f"  naive {np_['naive_per_disk'] / nb['naive_per_disk']:.1f}x"
              f"  match {np_['match'] / nb['match']:.1f}x", file=sys.stderr)


if __name__ == "__main__":
    main()
