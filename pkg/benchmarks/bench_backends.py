#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-python fallback.

Usage:
    python benchmarks/bench_backends.py [--repeat 5]

Times the two hot kernels (the gain-tuned fidelity series and the
displaced-overlap batch behind the quadrature oracle) on representative
workloads, checks that both backends agree numerically, and prints a
side-by-side table.
"""

import argparse
import time

import numpy as np

from pairtel import _kernels_py
from pairtel.special import LOG_FACTORIALS

try:
    from pairtel import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_series(impl, repeat):
    lf = LOG_FACTORIALS.values
    cases = [(1.0, 0.5, 0.8), (4.0, 2.0, 0.6), (1.0, 1.2357, 0.95), (9.0, 1.0, 0.9)]

    def run():
        return [impl.fidelity_series_sum(lf, x, z, g, 1e-10, 200)[0] for x, z, g in cases]

    return best_of(run, repeat)


def bench_overlaps(impl, repeat):
    rng = np.random.default_rng(7)
    betas = (rng.normal(size=4096) + 1j * rng.normal(size=4096)).astype(complex)
    coh = (rng.normal(size=61) + 1j * rng.normal(size=61)).astype(complex)

    def run():
        return impl.displaced_coherent_overlaps(betas, coh, 40)

    return best_of(run, repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rows = []
    for name, bench in (("fidelity_series_sum x4", bench_series),
                        ("displaced_coherent_overlaps 4096x61x41", bench_overlaps)):
        t_py, out_py = bench(_kernels_py, args.repeat)
        if _compiled is not None:
            t_c, out_c = bench(_compiled, args.repeat)
            err = float(np.max(np.abs(np.asarray(out_c) - np.asarray(out_py))))
            rows.append((name, t_py, t_c, t_py / t_c, err))
        else:
            rows.append((name, t_py, None, None, 0.0))

    print(f"{'kernel':45s} {'python':>10s} {'compiled':>10s} {'speedup':>8s} {'max|diff|':>10s}")
    for name, t_py, t_c, speedup, err in rows:
        if t_c is None:
            print(f"{name:45s} {t_py*1e3:9.2f}ms {'absent':>10s} {'-':>8s} {'-':>10s}")
        else:
            print(f"{name:45s} {t_py*1e3:9.2f}ms {t_c*1e3:9.2f}ms {speedup:7.1f}x {err:10.2e}")
    if _compiled is None:
        print("\ncompiled extension not built; showing fallback timings only")


if __name__ == "__main__":
    main()
