#!/usr/bin/env python3
"""Benchmark the jit-compiled kernels against the pure-numpy reference.

Runs the same sequence of solver steps on the traveling-vortex case with
both backends and reports wall time per step and the speedup.

Usage:  python3 benchmarks/backend_bench.py [--h 0.6] [--order 2] [--steps 20]
"""

import argparse
import time

import numpy as np

from polydg import cases, discretization, mesh as meshmod, solver


def time_backend(backend, cfg, m, N, steps):
    disc = discretization.build(m, N)
    bcs = cfg.boundary_factory(cfg.gas) if cfg.boundary_factory else {}
    s = solver.Solver(disc, cfg.gas, boundary=bcs, cfl=cfg.cfl,
                      backend=backend)
    U = discretization.project(disc, cfg.initial)
    # warm-up step (jit compilation, caches)
    U1, _ = s.step(U, 0.0)
    t0 = time.perf_counter()
    t = 0.0
    for _ in range(steps):
        U1, info = s.step(U1, t)
        t = info.t_new
    wall = time.perf_counter() - t0
    return wall / steps, U1


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--h", type=float, default=0.6)
    ap.add_argument("--order", type=int, default=2)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = cases.get_case("vortex")
    m = meshmod.generate_mesh(cfg.domain, args.h, args.seed, cfg.periodic)
    print(f"case=vortex N={args.order} cells={m.n_cells} steps={args.steps}")

    results = {}
    for backend in ("numpy", "numba"):
        try:
            per_step, U = time_backend(backend, cfg, m, args.order, args.steps)
        except Exception as exc:   # e.g. numba unavailable
            print(f"{backend:>6}: skipped ({exc})")
            continue
        results[backend] = (per_step, U)
        print(f"{backend:>6}: {per_step * 1e3:10.2f} ms/step")

    if len(results) == 2:
        diff = np.abs(results["numpy"][1] - results["numba"][1]).max()
        speedup = results["numpy"][0] / results["numba"][0]
        print(f"speedup (numpy/numba): {speedup:.1f}x")
        print(f"max |state difference|: {diff:.3e}")


if __name__ == "__main__":
    main()
