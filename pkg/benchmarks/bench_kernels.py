#!/usr/bin/env python3
"""Time the numba kernels against their numpy fallbacks.

Covers the two hot loops (Bessel-pair power series, Stieltjes sums over
zeros) plus one end-to-end call that leans on both.

Usage:
    python benchmarks/bench_kernels.py [--points N] [--nodes M] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from beurling import _kernels
from beurling import freq_laplace as fl


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--nodes", type=int, default=2_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    x = rng.uniform(0, 30, args.points)
    x2 = rng.uniform(0, 100, args.points // 10)
    nodes2 = np.sort(rng.uniform(1, 1e4, args.nodes))
    w = rng.uniform(0, 1, args.nodes)

    cases = [
        ("series_pair", lambda nb: _kernels.series_pair(0.3, x, use_numba=nb)),
        ("stieltjes", lambda nb: _kernels.stieltjes(x2, nodes2, w, use_numba=nb)),
    ]
    print(f"numba available: {_kernels.HAS_NUMBA}")
    print(f"{'kernel':<14}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, fn in cases:
        t_np = best_of(lambda: fn(False), args.repeat)
        if _kernels.HAS_NUMBA:
            fn(True)  # compile
            t_nb = best_of(lambda: fn(True), args.repeat)
            print(f"{name:<14}{t_np:12.4f}{t_nb:12.4f}{t_np / t_nb:10.1f}")
        else:
            print(f"{name:<14}{t_np:12.4f}{'-':>12}{'-':>10}")

    # end to end: minorant on a dense grid (series + axis Stieltjes sums)
    grid = np.linspace(-50, 50, 20_000)
    fl.eval_minorant(0.0, 1.0, grid[:10])
    t = best_of(lambda: fl.eval_minorant(0.0, 1.0, grid), args.repeat)
    print(f"eval_minorant on {grid.size} points: {t:.4f} s")


if __name__ == "__main__":
    main()
