#!/usr/bin/env python3
"""Benchmark the compiled matrix kernel against the pure-NumPy fallback.

Two workloads bracket real usage:
  * batch: one call over many operating points (spectrum sweeps, HOM nodes)
  * scalar: many calls with one point each (derivative probes, ensembles)

Run:  python benchmarks/bench_kernel.py [--layers 11] [--points 20000]
"""

import argparse
import math
import time

import numpy as np

from bandgap_delay import _core_py

try:
    from bandgap_delay import _core_cy
except ImportError:
    _core_cy = None


def _workload(layers: int, points: int, seed: int = 42):
    rng = np.random.default_rng(seed)
    n = rng.uniform(1.3, 2.3, layers).astype(np.complex128)
    d = rng.uniform(50.0, 200.0, layers)
    k0 = 2.0 * math.pi / rng.uniform(500.0, 900.0, points)
    alpha = np.sin(rng.uniform(0.0, 1.2, points))
    return n, d, k0, alpha


def _time(fn, repeats: int = 5) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_batch(impl, n, d, k0, alpha) -> float:
    return _time(lambda: impl.amplitudes(n, d, 1.0, 1.0, k0, alpha, 1))


def bench_scalar(impl, n, d, k0, alpha, calls: int) -> float:
    k0 = k0[:calls]
    alpha = alpha[:calls]

    def run():
        for i in range(calls):
            impl.amplitudes(n, d, 1.0, 1.0, k0[i : i + 1], alpha[i : i + 1], 1)

    return _time(run, repeats=3)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--layers", type=int, default=11)
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--scalar-calls", type=int, default=2000)
    args = parser.parse_args()

    n, d, k0, alpha = _workload(args.layers, args.points)

    backends = [("python", _core_py)]
    if _core_cy is not None:
        backends.append(("compiled", _core_cy))
    else:
        print("compiled kernel not importable; benchmarking the fallback only")

    print(f"{args.layers}-layer stack")
    print(f"\nbatch: {args.points} points in one call")
    batch_times = {}
    for name, impl in backends:
        t = bench_batch(impl, n, d, k0, alpha)
        batch_times[name] = t
        print(f"  {name:9s} {t * 1e3:9.3f} ms   {args.points / t / 1e6:8.2f} Mpts/s")

    print(f"\nscalar: {args.scalar_calls} calls of one point each")
    scalar_times = {}
    for name, impl in backends:
        t = bench_scalar(impl, n, d, k0, alpha, args.scalar_calls)
        scalar_times[name] = t
        print(f"  {name:9s} {t * 1e3:9.3f} ms   {t / args.scalar_calls * 1e6:8.2f} us/call")

    if _core_cy is not None:
        print(
            f"\nspeedup compiled/python: batch {batch_times['python'] / batch_times['compiled']:.1f}x, "
            f"scalar {scalar_times['python'] / scalar_times['compiled']:.1f}x"
        )


if __name__ == "__main__":
    main()
