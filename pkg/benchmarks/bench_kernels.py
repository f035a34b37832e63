"""Compare the numba and numpy flavours of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per (kernel, case) with the best wall time of each backend
and the max absolute difference between their outputs.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from conevol import kernels
from conevol.functionals import hypersimplex_polynomial, rank_table, xk_polynomial
from conevol.matroid import build_matroid, cfg_c, moment_curve


def best_time(fn, repeat):
    fn()  # warm-up (includes compilation for numba)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    rng = np.random.default_rng(0)
    for name, cfg in (("cfg_c n=4 N=7", cfg_c()), ("moment n=5 N=9", moment_curve(5, 9)),
                      ("moment n=6 N=10", moment_curve(6, 10))):
        M = build_matroid(cfg)
        x = rng.dirichlet(np.ones(M.N)) * M.n
        yield "ordered_rank_sums", name, (x, rank_table(M), M.n)
    for N, G in ((7, 256 * 42), (10, 256 * 90)):
        poly = hypersimplex_polynomial(N)
        pts = rng.dirichlet(np.ones(N), size=G) * 4
        yield "power_sum_batch", f"f N={N} points={G}", (pts, poly.rows, poly.weights, poly.degree)
    M = build_matroid(moment_curve(6, 9))
    poly = xk_polynomial(M, 3)
    pts = rng.dirichlet(np.ones(9), size=256 * 72) * 6
    yield "power_sum_batch", "X3^6 N=9 points=18432", (pts, poly.rows, poly.weights, poly.degree)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
    print(f"{'kernel':<18} {'case':<26} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8} {'max |diff|':>11}")
    for kernel, name, kargs in cases():
        t_np, out_np = best_time(lambda: kernels.IMPLEMENTATIONS["numpy"][kernel](*kargs), args.repeat)
        t_nb, out_nb = best_time(lambda: kernels.IMPLEMENTATIONS["numba"][kernel](*kargs), args.repeat)
        diff = float(np.max(np.abs(np.asarray(out_np) - np.asarray(out_nb))))
        print(f"{kernel:<18} {name:<26} {t_np * 1e3:>11.2f} {t_nb * 1e3:>11.2f} "
              f"{t_np / t_nb:>7.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
