"""Time the numba and numpy kernel backends on oracle-sized inputs.

    python3 bench/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from spoofrate import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    args_k = (0.3, -0.8, 1.1, 0.4, math.sqrt(10.0), 10.0, kernels.TIN, 1e-6)
    mags = np.linspace(0.0, math.sqrt(10.0), 401)
    phases = 2 * np.pi * np.arange(360) / 360
    ray = np.linspace(0.0, math.sqrt(10.0), 100_001)
    rng = np.random.default_rng(0)
    s, x, n = (rng.standard_normal(1 << 16) + 1j * rng.standard_normal(1 << 16) for _ in range(3))

    cases = {
        "polar_search 401x360": lambda k: k.polar_search(*args_k, mags, phases),
        "ray_search 1e5+1": lambda k: k.ray_search(*args_k, 0.6, 0.8, ray),
        "moment_sums 65536": lambda k: k.moment_sums(1 + 1j, 0.5, -0.3j, 0.7, s, x, n),
    }
    impls = kernels.implementations()
    print(f"backends: {', '.join(impls)} (active: {kernels.BACKEND})")
    for name, case in cases.items():
        row = []
        for label, impl in impls.items():
            case(impl)  # compile / warm caches
            row.append((label, best_of(lambda: case(impl), args.repeat)))
        cells = "  ".join(f"{label} {t * 1e3:8.3f} ms" for label, t in row)
        speedup = ""
        if len(row) == 2:
            speedup = f"  numpy/numba {row[0][1] / row[1][1]:.1f}x"
        print(f"{name:<22} {cells}{speedup}")


if __name__ == "__main__":
    main()
