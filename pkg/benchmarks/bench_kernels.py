#!/usr/bin/env python3
"""Benchmark: compiled Cython kernels vs the numpy/Python fallback.

Times the two hot paths that dominate verification runs: the Gauss 2F1
series near its convergence radius (the weighted-limit ladder climbs into
t = 1 - 2^-16 territory) and Gegenbauer reconstruction over quadrature
nodes.  Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from balltrace._kernels import _purepy

try:
    from balltrace._kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_series(mod, label):
    cases = [(1.25, 1.75, 4.5, 1 - 2.0 ** (-j)) for j in (8, 12, 16)]

    def run():
        total = 0
        for a, b, c, t in cases:
            _, terms, _ = mod.hyp2f1(a, b, c, t * t)
            total += terms
        return total

    dt, terms = timeit(run)
    print(f"  {label:10s} 2F1 ladder rungs j=8,12,16: {dt * 1e3:9.2f} ms "
          f"({terms} terms, {terms / dt / 1e6:.1f} Mterm/s)")
    return dt


def bench_series_dd(mod, label):
    def run():
        _, _, terms, _ = mod.hyp2f1_dd(1.25, 1.75, 4.5, (1 - 2.0 ** (-10)) ** 2)
        return terms

    dt, terms = timeit(run)
    print(f"  {label:10s} 2F1 double-double rung j=10: {dt * 1e3:9.2f} ms "
          f"({terms} terms)")
    return dt


def bench_zonal(mod, label):
    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal(61) * 0.6 ** np.arange(61)
    nodes = np.cos(np.pi * (np.arange(276) + 0.5) / 276)

    def run():
        out = None
        for _ in range(200):
            out = mod.zonal_eval(coeffs, 3.0, nodes)
        return out

    dt, _ = timeit(run, repeat=3)
    print(f"  {label:10s} zonal reconstruction 200x(61 modes, 276 nodes): "
          f"{dt * 1e3:9.2f} ms")
    return dt


def main():
    print(f"compiled extension available: {_fast is not None}")
    mods = [(_purepy, "python")] + ([(_fast, "compiled")] if _fast else [])
    for bench in (bench_series, bench_series_dd, bench_zonal):
        print(bench.__name__)
        times = {}
        for mod, label in mods:
            times[label] = bench(mod, label)
        if len(times) == 2:
            print(f"  {'speedup':10s} {times['python'] / times['compiled']:.1f}x")


if __name__ == "__main__":
    main()
