"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Each kernel is checked to return identical results on both backends before
it is timed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from topt import kernels
from topt.harness import random_signature
from topt.optimizers import re_expand
from topt.optimizers.rm import _null_gens
from topt.phase import proper, wp_from_signature


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(seed: int):
    rng = np.random.default_rng(seed)
    for rows, cols in [(64, 64), (200, 200), (400, 120)]:
        M = rng.integers(0, 2, (rows, cols), dtype=np.uint8)
        yield f"rref {rows}x{cols}", lambda b, M=M: kernels.rref(M, b)
    for n in (6, 8, 10):
        A = proper(re_expand(wp_from_signature(random_signature(n, seed + n))))
        yield f"todd_scan n={n} m={A.cols}", lambda b, A=A: kernels.todd_scan(A.bits, b)
    gens = _null_gens(6)
    for k in range(3):
        y0 = int(rng.integers(1, 2**63))
        yield f"coset_min dim={len(gens)} #{k}", lambda b, y0=y0: kernels.coset_min(y0, gens, b)


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not kernels.compiled_available():
        print("compiled kernels not built; only the python backend is timed")
    print(f"{'case':32s} {'python (s)':>12s} {'compiled (s)':>13s} {'speedup':>8s}")
    for name, run in cases(args.seed):
        t_py = _best(lambda: run("python"), args.repeat)
        if kernels.compiled_available():
            if not _same(run("python"), run("compiled")):
                raise SystemExit(f"{name}: backends disagree")
            t_c = _best(lambda: run("compiled"), args.repeat)
            print(f"{name:32s} {t_py:12.5f} {t_c:13.5f} {t_py / t_c:8.1f}x")
        else:
            print(f"{name:32s} {t_py:12.5f} {'-':>13s}")


if __name__ == "__main__":
    main()
