#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times one full p^4 sweep per kernel and backend and prints a table with the
speedup. Results also double as a parity check: both backends must agree.

Usage: python benchmarks/bench_kernels.py [--primes 11 31 61] [--repeat 3]
"""

import argparse
import time

import numpy as np

from gl2sums import kernels


def _vectors(p, complex_=True, seed=0):
    rng = np.random.default_rng(seed)
    if complex_:
        return [rng.standard_normal(p) + 1j * rng.standard_normal(p) for _ in range(4)]
    return [rng.integers(0, 40, p).astype(np.int64) for _ in range(4)]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--primes", type=int, nargs="+", default=[11, 31, 61])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not available; timing the NumPy fallback only")

    cases = [
        ("class_weights", lambda p, b: kernels.class_weights(
            p, *_vectors(p), backend=b)),
        ("class_counts", lambda p, b: kernels.class_counts(
            p, *_vectors(p, complex_=False), backend=b)),
        ("plancherel_weights", lambda p, b: kernels.plancherel_weights(
            p, *_vectors(p, seed=1), backend=b)),
    ]

    header = f"{'kernel':<20} {'p':>4} {'numpy [ms]':>12} {'cython [ms]':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for p in args.primes:
        kernels.class_weights(p, *_vectors(p))  # warm the lookup tables
        for name, call in cases:
            t_np, out_np = _time(lambda: call(p, "numpy"), args.repeat)
            if "cython" in backends:
                t_cy, out_cy = _time(lambda: call(p, "cython"), args.repeat)
                assert np.allclose(out_np, out_cy, rtol=1e-9, atol=1e-9), name
                print(f"{name:<20} {p:>4} {t_np*1e3:>12.2f} {t_cy*1e3:>12.2f} "
                      f"{t_np/t_cy:>8.1f}x")
            else:
                print(f"{name:<20} {p:>4} {t_np*1e3:>12.2f} {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
