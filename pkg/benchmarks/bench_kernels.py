#!/usr/bin/env python3
"""Time the compiled kernels against the pure-NumPy fallback.

Both backends are fed identical, pre-built inputs, so the comparison
isolates the stepping loops (no RNG, no band assembly). Best-of-N wall
times are reported together with the speedup.

    python benchmarks/bench_kernels.py [--paths N] [--steps N]
                                       [--grid NX,NY,NT] [--repeat N]
"""

import argparse
import time

import numpy as np

from epiopt import EpidemicParams, Grid2D, Model, OptionKind, OptionTerms
from epiopt._kernels import _mc_numpy, _pde_numpy
from epiopt.pde import (THETA, _axis_bands, _thomas_factors, pde_coefficients,
                        terminal_surface)

try:
    from epiopt._kernels import _mc_cy, _pde_cy
except ImportError:
    _mc_cy = _pde_cy = None


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mc(n_paths, n_steps, repeat):
    rng = np.random.default_rng(0)
    l0 = rng.uniform(0.01, 3.0, n_paths)
    m0 = rng.uniform(0.01, 5.0, n_paths)
    draws = rng.standard_normal((n_paths, n_steps, 2))
    args = (0.3, 0.1, 0.4, 0.25, -0.6, 0.02)  # beta gamma sigma zeta rho delta

    out = {}
    for name, mod in [("numpy", _mc_numpy), ("cython", _mc_cy)]:
        if mod is None:
            continue
        out[name] = _best(lambda: mod.run_block(l0.copy(), m0.copy(), draws, *args),
                          repeat)
    return out, n_paths * n_steps


def bench_pde(grid, repeat):
    p = EpidemicParams(0.08, 0.03, sigma=0.3, zeta=0.15, rho=-0.4)
    terms = OptionTerms(OptionKind.CALL, 0.1, 25.0)

    X, Y = np.meshgrid(grid.x_nodes, grid.y_nodes, indexing="ij")
    a_x, a_y, d_xx, d_xy, d_yy = pde_coefficients(X, Y, p, Model.TWO_FACTOR)
    dtau = terms.expiry / grid.n_time
    ax = _axis_bands(a_x, d_xx, grid.hx, grid.n_x)
    ay = _axis_bands(a_y.T, d_yy.T, grid.hy, grid.n_y)
    ay = tuple(b.T.copy() for b in ay)
    cxy4 = d_xy / (4.0 * grid.hx * grid.hy)
    th = THETA * dtau
    fx = _thomas_factors(-th * ax[0], 1.0 - th * ax[1], -th * ax[2], axis=0)
    fy = _thomas_factors(-th * ay[0], 1.0 - th * ay[1], -th * ay[2], axis=1)
    V0 = terminal_surface(terms, grid).values
    call_args = [np.ascontiguousarray(a) for a in (V0, *ax, *ay, cxy4)]

    out = {}
    for name, mod in [("numpy", _pde_numpy), ("cython", _pde_cy)]:
        if mod is None:
            continue
        out[name] = _best(
            lambda: mod.douglas_run(*call_args, *fx, *fy, dtau, THETA, grid.n_time),
            repeat)
    return out, grid.n_x * grid.n_y * grid.n_time


def _show(label, times, work, unit):
    print(f"\n{label}")
    for name in ("numpy", "cython"):
        if name not in times:
            print(f"  {name:<8} (extension not built)")
            continue
        t = times[name]
        print(f"  {name:<8} {t * 1e3:9.1f} ms   {work / t / 1e6:8.1f} M {unit}/s")
    if "numpy" in times and "cython" in times:
        print(f"  speedup  {times['numpy'] / times['cython']:.2f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=50_000)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--grid", default="201,201,200")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    nx, ny, nt = (int(s) for s in args.grid.split(","))

    mc_times, mc_work = bench_mc(args.paths, args.steps, args.repeat)
    _show(f"Monte Carlo stepping ({args.paths} paths x {args.steps} steps)",
          mc_times, mc_work, "path-steps")

    pde_times, pde_work = bench_pde(Grid2D(nx, ny, nt), args.repeat)
    _show(f"Douglas ADI ({nx}x{ny} grid, {nt} time steps)",
          pde_times, pde_work, "node-steps")


if __name__ == "__main__":
    main()
