#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Runs each kernel in-process (both implementations are importable side by
side) and the end-to-end chain in subprocesses so the import-time backend
selection is exercised exactly as users see it.

Usage: python3 benchmarks/bench_kernels.py [--steps N]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np


def timeit(fn, *args, repeat=5, number=200):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def kernel_table():
    from seqpp.kernels import pure

    try:
        from seqpp import _native as native
    except ImportError:
        print("compiled module not built; nothing to compare")
        return

    rng = np.random.default_rng(0)
    rows = []
    for n in (10, 100, 400):
        xs = rng.uniform(0, 1, n)
        ys = rng.uniform(0, 1, n)
        ms = rng.uniform(0.02, 0.2, n)
        args = (xs, ys, ms, n, n // 2, 0.5, 0.5, 0.1, False)
        rows.append(
            (
                f"softcore_insert_count n={n}",
                timeit(pure.softcore_insert_count, *args),
                timeit(native.softcore_insert_count, *args),
            )
        )
        targs = (xs, ys, ms, n, False)
        rows.append(
            (
                f"softcore_total_count  n={n}",
                timeit(pure.softcore_total_count, *targs, number=20),
                timeit(native.softcore_total_count, *targs, number=20),
            )
        )
        qargs = (xs, ys, ms, n, 0.5, 0.5, 0.1, 0.3, True)
        rows.append(
            (
                f"quadratic_insert      n={n}",
                timeit(pure.quadratic_insert_logsum, *qargs),
                timeit(native.quadratic_insert_logsum, *qargs),
            )
        )

    grid = 200
    gx, gy = [a.ravel() for a in np.meshgrid(np.linspace(0, 1, grid), np.linspace(0, 1, grid))]
    gw = np.full(grid * grid, 1.0 / (grid * grid))
    for n in (5, 25):
        xs = rng.uniform(0, 1, n)
        ys = rng.uniform(0, 1, n)
        gargs = (gx, gy, gw, grid * grid, xs, ys, n, 0.1)
        rows.append(
            (
                f"admissible_mass {grid}x{grid} n={n}",
                timeit(pure.admissible_mass, *gargs, number=3),
                timeit(native.admissible_mass, *gargs, number=3),
            )
        )

    print(f"{'kernel':<34} {'pure':>12} {'native':>12} {'speedup':>9}")
    for name, p, c in rows:
        print(f"{name:<34} {p * 1e6:>10.1f}us {c * 1e6:>10.1f}us {p / c:>8.1f}x")


CHAIN_SCRIPT = """
import time
from seqpp import kernels
from seqpp.geometry import Window
from seqpp.marks import fixed_radius_marks
from seqpp.models import SoftCoreModel
from seqpp.samplers import MHConfig, mh_run
model = SoftCoreModel(window=Window(0, 0, 1, 1), beta={beta}, gamma=0.5,
                      marks=fixed_radius_marks(0.05))
t0 = time.monotonic()
trace = mh_run(model, MHConfig(steps={steps}, seed=7))
dt = time.monotonic() - t0
print(f"{{kernels.BACKEND}} {{dt:.3f}} {{trace.mean_count():.2f}}")
"""


def chain_comparison(steps):
    print(f"\nend-to-end Metropolis-Hastings chain, {steps} steps "
          f"(beta=80: mean count ~75, kernel-bound)")
    for pure_env in ("", "1"):
        env = dict(os.environ)
        env.pop("SEQPP_PURE", None)
        if pure_env:
            env["SEQPP_PURE"] = pure_env
        out = subprocess.run(
            [sys.executable, "-c", CHAIN_SCRIPT.format(steps=steps, beta=80.0)],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        ).stdout.strip()
        backend, dt, mean = out.split()
        print(f"  {backend:<7} {float(dt):7.2f}s  (mean count {mean})")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=100_000)
    args = parser.parse_args()
    kernel_table()
    chain_comparison(args.steps)
