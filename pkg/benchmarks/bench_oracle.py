#!/usr/bin/env python3
"""Benchmark the two chain-simulation kernels.

Runs the same seeded workloads through the compiled Cython kernel and
the pure-NumPy fallback and reports wall time, draw throughput, and the
largest per-trial discrepancy (expected at floating-point summation
level only, since both consume identical random streams).

    python3 benchmarks/bench_oracle.py [--trials 100000]
"""

import argparse
import time

import numpy as np

from vmmdse.cells import InputDistribution, load_cell_spec
from vmmdse.fixtures import fixture_path
from vmmdse.oracle import _kernel_py

try:
    from vmmdse.oracle import _kernel
except ImportError:
    _kernel = None

CASES = [
    # (bit width, n, r)
    (1, 16, 1),
    (1, 576, 1),
    (4, 576, 2),
    (4, 576, 4),
    (1, 4096, 2),
]


def run(kernel, spec, n, r, trials, seed=7):
    dist = InputDistribution.default(spec.bit_width)
    cdf = np.cumsum(dist.px)
    batch = max(1, min(4096, 4_194_304 // (n * r)))
    inl = np.ascontiguousarray(spec.inl)
    sig = np.ascontiguousarray(spec.sigma)
    t0 = time.perf_counter()
    out = kernel.chain_error_batches(
        inl, sig, n, r, trials, batch, seed, cdf, dist.pw, None, None
    )
    return time.perf_counter() - t0, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100_000)
    args = parser.parse_args()

    specs = {b: load_cell_spec(fixture_path(f"cell_b{b}.json")) for b in (1, 4)}
    if _kernel is None:
        print("compiled kernel not available; benchmarking the fallback only\n")

    header = f"{'case':>18} {'draws':>12} {'numpy [s]':>10}"
    if _kernel is not None:
        header += f" {'cython [s]':>11} {'speedup':>8} {'max |diff|':>11}"
    print(header)
    for b, n, r in CASES:
        spec = specs[b]
        draws = args.trials * n * r
        t_py, out_py = run(_kernel_py, spec, n, r, args.trials)
        line = f"B={b} n={n:>5} r={r}".rjust(18) + f" {draws:>12,} {t_py:>10.2f}"
        if _kernel is not None:
            t_cy, out_cy = run(_kernel, spec, n, r, args.trials)
            diff = float(np.max(np.abs(out_py - out_cy)))
            line += f" {t_cy:>11.2f} {t_py / t_cy:>7.2f}x {diff:>11.2e}"
        print(line)


if __name__ == "__main__":
    main()
