#!/usr/bin/env python3
"""Compare the compiled kernel backend against the pure-Python fallback.

Times the raw kernels (the residual evaluations that dominate solver
runtime) and two whole solves. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--panel-sizes 4 8 16] [--calls 20000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import peersplit as ps
from peersplit import _kernels


def time_call(fn, repeats: int) -> float:
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def bench_kernels(sizes, calls):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        w = rng.uniform(0.05, 1.0, (n, n))
        w = np.ascontiguousarray(w / w.sum(axis=0))
        z = np.ascontiguousarray(rng.uniform(-3.0, 0.0, n))
        per_backend = {}
        for backend in _kernels.available_backends():
            _kernels.use_backend(backend)
            per_backend[backend] = time_call(lambda: _kernels.objective_geometric(w, z), calls)
        rows.append((f"objective_geometric n={n}", per_backend))
    return rows


def bench_solvers(sizes):
    rng = np.random.default_rng(1)
    rows = []
    for n in sizes:
        w = ps.WeightMatrix(np.ascontiguousarray(
            (m := rng.uniform(0.05, 1.0, (n, n))) / m.sum(axis=0)
        ))
        cases = {
            f"dia_solve aaip n={n}": lambda w=w: ps.dia_solve(
                w, ps.SolverConfig(aggregation_mode="aaip")
            ),
            f"nelder-mead multistart gaip n={n}": lambda w=w: ps.nelder_mead_multistart(
                ps.build_residual_objective(w, "gaip"), ps.SolverConfig()
            ),
            f"simulated annealing gaip n={n}": lambda w=w: ps.simulated_annealing(
                ps.build_residual_objective(w, "gaip"), ps.SolverConfig(sa_starts=1)
            ),
        }
        for label, fn in cases.items():
            per_backend = {}
            for backend in _kernels.available_backends():
                _kernels.use_backend(backend)
                fn()  # warm-up
                per_backend[backend] = time_call(fn, 3)
            rows.append((label, per_backend))
    return rows


def print_table(rows):
    width = max(len(label) for label, _ in rows)
    have_compiled = "compiled" in _kernels.available_backends()
    header = f"{'case':<{width}}  {'pure':>12}"
    if have_compiled:
        header += f"  {'compiled':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, timings in rows:
        line = f"{label:<{width}}  {timings['pure'] * 1e6:>10.2f}us"
        if have_compiled:
            speedup = timings["pure"] / timings["compiled"]
            line += f"  {timings['compiled'] * 1e6:>10.2f}us  {speedup:>7.1f}x"
        print(line)
    print()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--panel-sizes", type=int, nargs="+", default=[4, 8, 16])
    parser.add_argument("--calls", type=int, default=20000, help="kernel micro-bench repetitions")
    args = parser.parse_args()

    print(f"available backends: {', '.join(_kernels.available_backends())}")
    print(f"default backend: {_kernels.backend_name()}\n")
    try:
        print_table(bench_kernels(args.panel_sizes, args.calls))
        print_table(bench_solvers(args.panel_sizes))
    finally:
        _kernels.use_backend("auto")


if __name__ == "__main__":
    main()
