#!/usr/bin/env python3
"""Time the hot kernels on the numpy backend and, when built, the compiled one.

Usage: python benchmarks/bench_kernels.py [--sizes 1000,4000,16000] [--repeats 200]
"""

import argparse
import time

import numpy as np

from dampedeuler._kernels import pure

try:
    from dampedeuler._kernels import _speedups
except ImportError:
    _speedups = None


def fields(n, seed=0):
    rng = np.random.default_rng(seed)
    x = np.linspace(-30, 30, n)
    v = 0.05 * np.sin(x) + 0.01 * np.cos(7 * x) + 1e-4 * rng.normal(size=n)
    u = 0.05 * np.cos(2 * x) + 1e-4 * rng.normal(size=n)
    rho = 1.0 + 0.2 * np.sin(x) ** 2
    m = rho * u
    return v, u, rho, m


def best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="1000,4000,16000")
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = [("numpy", pure)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled backend not built; timing numpy only")

    kernels = {
        "diff1": lambda mod, f: (lambda: mod.diff1(f[0], 0.01)),
        "diff1_ghost": lambda mod, f: (lambda: mod.diff1_ghost(f[0], 0.01)),
        "sym_rhs": lambda mod, f: (lambda: mod.sym_rhs(f[0], f[1], 1.0, -0.5, 1.5, 0.01)),
        "cons_rhs": lambda mod, f: (
            lambda: mod.cons_rhs(f[2], f[3], -1.0, 1.0, 0.0, 1.5, 0.01, True)
        ),
        "smooth_filter": lambda mod, f: (lambda: mod.smooth_filter(f[0], 1.0)),
    }

    header = f"{'kernel':<14}{'n':>8}" + "".join(f"{name:>14}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for kname, make in kernels.items():
        for n in sizes:
            f = fields(n)
            times = [best_of(make(mod, f), args.repeats) for _, mod in backends]
            row = f"{kname:<14}{n:>8}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
