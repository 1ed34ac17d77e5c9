"""Time the numba kernels against their numpy/scipy counterparts.

    python benchmarks/bench_backends.py [--repeat 5]

The first numba call per kernel (compilation, or loading from the on-disk
cache) is excluded.
"""

import argparse
import math
import timeit

import numpy as np

from diracsector.grid import LogGrid
from diracsector.numerics.kernels import numba_kernels, numpy_kernels
from diracsector.numerics.shooting import DEFAULT_SHOOTING_GRID, decaying_direction


def cases():
    rng = np.random.default_rng(0)
    f = rng.normal(size=(200_000, 2)) + 1j * rng.normal(size=(200_000, 2))
    s = np.linspace(math.log(1e-15), math.log(1e15), 4000)
    lam = 0.75
    N = np.array([[lam, -0.3], [0.3, -lam]])
    grid = LogGrid(*DEFAULT_SHOOTING_GRID)
    y0 = decaying_direction(N, -1j, grid.r_max)
    s_in = grid.s[::-1].copy()

    def hardy_step(k):
        a_d, a_o, b_d, _ = k.hardy_assemble(s, 0.5 - lam)
        return k.tridiag_solve(a_d - 0.0625 * b_d, a_o, np.ones_like(a_d))

    return {
        "log_derivative (200k x 2, order 4)": lambda k: k.log_derivative(f, 1e-3, 4),
        "hardy assemble + solve (n=4000)": hardy_step,
        "shoot (2000 nodes, 1e-12..50)": lambda k: k.shoot(N, -1j, y0, s_in),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':40s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>9s}")
    for name, fn in cases().items():
        times = {}
        for k in (numba_kernels, numpy_kernels):
            fn(k)  # warm-up
            times[k.name] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:40s} {times['numba']:12.3f} {times['numpy']:12.3f} "
              f"{times['numpy'] / times['numba']:8.1f}x")


if __name__ == "__main__":
    main()
