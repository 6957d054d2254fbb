"""End-to-end acceptance: ten numbered criteria, one report line each.

Report lines accumulate in REPORT_LINES and are echoed after the run by
the terminal-summary hook in conftest.py; every criterion also asserts,
so pytest's own PASSED/FAILED verdict stays authoritative.
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np

import epiopt as ep

REPORT_LINES: list[str] = []


def _report(num: int, ok: bool, detail: str) -> None:
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} — {detail}"
    REPORT_LINES.append(line)
    print(line)  # shows inline in the failure report if the test fails


# ---------------------------------------------------------------------------

def test_criterion_01_deterministic_reduction():
    """sigma=0 MC reproduces the RK4 terminal infected fraction pathwise."""
    p = ep.EpidemicParams(0.3, 0.1, sigma=0.0)
    s0 = ep.SirState(0.99, 0.01)
    t0 = time.perf_counter()
    plan = ep.plan_for(ep.Model.ONE_FACTOR, 50.0, n_paths=100_000,
                       n_steps=1000, seed=1)  # delta = 0.05
    sample = ep.simulate_terminal(p, s0, 50.0, plan)
    ref = ep.integrate_sir(p, s0, 50.0, 10_000).terminal.y
    err = float(np.abs(sample.y_terminal - ref).max())
    wall = time.perf_counter() - t0
    ok = err <= 1e-3 and wall < 5.0
    _report(1, ok, f"max pathwise |y_mc - y_ode| = {err:.3e} (cap 1e-3), "
                   f"{wall:.2f}s (cap 5s)")
    assert err <= 1e-3
    assert wall < 5.0


def test_criterion_02_mc_pde_cross_validation():
    """5 strikes x 2 maturities x 2 models: |PDE - MC| <= 3 stderr."""
    s0 = ep.SirState(0.60, 0.10)
    grid = ep.Grid2D(201, 201, 200)
    t0 = time.perf_counter()
    worst = 0.0
    cells = 0
    for model, params in [
        (ep.Model.ONE_FACTOR, ep.EpidemicParams(0.08, 0.03, sigma=0.2)),
        (ep.Model.TWO_FACTOR,
         ep.EpidemicParams(0.08, 0.03, sigma=0.2, zeta=0.1, rho=-0.3)),
    ]:
        for T in (25.0, 50.0):
            n_steps = round(T / 0.05)
            plan = ep.plan_for(model, T, n_paths=100_000, n_steps=n_steps,
                               seed=42)
            sample = ep.simulate_terminal(params, s0, T, plan)
            for K in (0.01, 0.02, 0.05, 0.1, 0.2):
                terms = ep.OptionTerms(ep.OptionKind.CALL, K, T)
                mc = ep.price_mc(sample, terms)
                surf = ep.pde_solve(params, terms, grid, model)
                pde = ep.price_pde(surf, s0, terms)
                worst = max(worst, abs(pde.price - mc.price) / mc.stderr)
                cells += 1
    wall = time.perf_counter() - t0
    ok = worst <= 3.0 and wall < 120.0
    _report(2, ok, f"{cells} cells, worst |PDE-MC| = {worst:.2f} stderr "
                   f"(cap 3), {wall:.1f}s (cap 120s)")
    assert cells == 20
    assert worst <= 3.0
    assert wall < 120.0


def test_criterion_03_parity_identity():
    """Call - Put = e^{-rT}(mean(Y_T) - K) * notional to 1e-12 relative."""
    p = ep.EpidemicParams(0.3, 0.1, sigma=0.25)
    s0 = ep.SirState(0.95, 0.03)
    plan = ep.plan_for(ep.Model.ONE_FACTOR, 10.0, n_paths=10_000,
                       n_steps=200, seed=8)
    sample = ep.simulate_terminal(p, s0, 10.0, plan)
    worst = 0.0
    for r, notional, K in [(0.0, 1.0, 0.1), (0.03, 5e6, 0.02), (0.1, 2.0, 0.6)]:
        call = ep.price_mc(sample, ep.OptionTerms(ep.OptionKind.CALL, K, 10.0, r, notional))
        put = ep.price_mc(sample, ep.OptionTerms(ep.OptionKind.PUT, K, 10.0, r, notional))
        expected = math.exp(-r * 10.0) * (float(np.mean(sample.y_terminal)) - K) * notional
        worst = max(worst, abs(call.price - put.price - expected) / abs(expected))
    ok = worst <= 1e-12
    _report(3, ok, f"worst relative parity defect = {worst:.2e} (cap 1e-12)")
    assert worst <= 1e-12


def test_criterion_04_weak_order():
    """Euler weak error vs a coupled delta/8 reference: slope in [0.8, 1.2]."""
    p = ep.EpidemicParams(0.3, 0.1, sigma=0.1)
    s0 = ep.SirState(0.9, 0.01)
    T = 10.0
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    deltas = [0.2, 0.1, 0.05, 0.025]
    errs = []
    floors = 0
    for delta in deltas:
        n_steps = round(T / delta)
        diffs = []
        for _ in range(8):  # 20k paths in memory-friendly chunks
            fine = rng.standard_normal((2500, n_steps * 8, 2))
            coarse = fine.reshape(2500, n_steps, 8, 2).sum(axis=2) / math.sqrt(8.0)
            sc = ep.simulate_with_draws(p, s0, coarse, delta, ep.Model.ONE_FACTOR)
            sf = ep.simulate_with_draws(p, s0, fine, delta / 8.0, ep.Model.ONE_FACTOR)
            floors += sc.floor_count + sf.floor_count
            diffs.append(sc.y_terminal - sf.y_terminal)
        errs.append(abs(float(np.concatenate(diffs).mean())))
    slope = float(np.polyfit(np.log(deltas), np.log(errs), 1)[0])
    wall = time.perf_counter() - t0
    ok = 0.8 <= slope <= 1.2 and floors == 0 and wall < 60.0
    _report(4, ok, f"log-log slope = {slope:.3f} (band [0.8, 1.2]), "
                   f"floor hits = {floors}, {wall:.1f}s (cap 60s)")
    assert floors == 0
    assert 0.8 <= slope <= 1.2
    assert wall < 60.0


def test_criterion_05_degeneration_bit_identity():
    """Two-factor with zeta=0 is pathwise bit-identical to one-factor."""
    p = ep.EpidemicParams(0.3, 0.1, sigma=0.2)
    s0 = ep.SirState(0.99, 0.01)
    k = dict(n_paths=1000, n_steps=200, seed=7, store_paths=True)
    one = ep.simulate_terminal(p, s0, 10.0,
                               ep.plan_for(ep.Model.ONE_FACTOR, 10.0, **k))
    two = ep.simulate_terminal(p, s0, 10.0,
                               ep.plan_for(ep.Model.TWO_FACTOR, 10.0, **k))
    same = (np.array_equal(one.l_paths, two.l_paths)
            and np.array_equal(one.m_paths, two.m_paths)
            and np.array_equal(one.y_terminal, two.y_terminal))
    _report(5, same, "1000 paths x 200 steps bitwise equal (l, m, terminal)")
    assert same


def test_criterion_06_flooring_and_bounds():
    """Aggressive volatility: floors hold, fractions stay in (0, 1]."""
    p = ep.EpidemicParams(0.3, 0.1, sigma=0.8, zeta=0.5, rho=-0.3)
    s0 = ep.SirState(0.99, 0.01)
    plan = ep.plan_for(ep.Model.TWO_FACTOR, 10.0, n_paths=100_000,
                       n_steps=500, seed=11)
    sample = ep.simulate_terminal(p, s0, 10.0, plan)
    in_bounds = (sample.min_l >= 0.0 and sample.min_m >= 0.0
                 and float(sample.x_terminal.min()) > 0.0
                 and float(sample.y_terminal.min()) > 0.0
                 and float(sample.x_terminal.max()) <= 1.0
                 and float(sample.y_terminal.max()) <= 1.0)
    min_z = float(sample.z_diagnostic.min())  # reported, not asserted
    _report(6, in_bounds,
            f"min l = {sample.min_l:.3g}, min m = {sample.min_m:.3g}, "
            f"{sample.floor_count} floor hits, min z_diagnostic = {min_z:.4f}")
    assert in_bounds


def test_criterion_07_ode_conservation_and_final_size():
    """x+y+z stays within 1e-10 of 1; terminal x matches the final-size root."""
    p = ep.EpidemicParams(0.3, 0.1)
    s0 = ep.SirState(0.99, 0.01)
    defect = 0.0
    for T, n in [(50.0, 1000), (500.0, 5000), (10.0, 37)]:
        defect = max(defect, ep.integrate_sir(p, s0, T, n).max_conservation_defect)

    path = ep.integrate_sir(p, s0, 500.0, 5000)
    r0 = p.beta / p.gamma
    f = lambda x: math.log(x / s0.x) - r0 * (x - 1.0)
    lo, hi = 1e-12, p.gamma / p.beta
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
    gap = abs(path.terminal.x - 0.5 * (lo + hi))
    ok = defect <= 1e-10 and gap <= 1e-6
    _report(7, ok, f"max conservation defect = {defect:.2e} (cap 1e-10), "
                   f"|x(500) - x_inf| = {gap:.2e} (cap 1e-6)")
    assert defect <= 1e-10
    assert gap <= 1e-6


def test_criterion_08_correlated_pair_covariance():
    """Empirical covariance of 1e6 draws within 0.01 of C entrywise."""
    rng = np.random.default_rng(123)
    worst = 0.0
    for rho in (-0.9, 0.0, 0.5):
        u = rng.standard_normal(1_000_000)
        v = rng.standard_normal(1_000_000)
        z, b = ep.correlated_pair(u, v, rho)
        c = np.cov(z, b)
        target = np.array([[1.0, rho], [rho, 1.0]])
        worst = max(worst, float(np.abs(c - target).max()))
    ok = worst < 0.01
    _report(8, ok, f"worst covariance entry error = {worst:.4f} (cap 0.01) "
                   f"over rho in {{-0.9, 0, 0.5}}")
    assert worst < 0.01


def test_criterion_09_cli_byte_determinism(tmp_path):
    """Identical seeds give byte-identical CSV across runs and worker counts."""
    scen = tmp_path / "scen.json"
    scen.write_text(json.dumps({
        "beta": 0.08, "gamma": 0.03, "sigma": 0.2, "zeta": 0.1, "rho": -0.3,
        "x0": 0.6, "y0": 0.1, "strikes": [0.05, 0.1], "T": 25,
        "n_paths": 20_000, "n_steps": 250, "grid": [51, 51, 50], "seed": 42,
    }))
    def run(*extra):
        out = subprocess.run(
            [sys.executable, "-m", "epiopt.cli", "price",
             "--scenario", str(scen), "--no-timing", *extra],
            capture_output=True, env=dict(os.environ))
        assert out.returncode == 0, out.stderr.decode()
        return out.stdout
    a, b = run(), run()
    c = run("--workers", "4")
    ok = a == b == c
    _report(9, ok, f"{len(a)} bytes, run-to-run and 1-vs-4 workers identical")
    assert a == b
    assert a == c


def test_criterion_10_pde_grid_convergence():
    """ATM price differences shrink >= 1.7x per grid doubling."""
    p = ep.EpidemicParams(0.08, 0.03, sigma=0.2)
    s0 = ep.SirState(0.60, 0.10)
    terms = ep.OptionTerms(ep.OptionKind.CALL, 0.10, 25.0)  # K = y0
    prices = []
    for n in (101, 201, 401):
        surf = ep.pde_solve(p, terms, ep.Grid2D(n, n, n - 1), ep.Model.ONE_FACTOR)
        prices.append(ep.price_pde(surf, s0, terms).price)
    d1 = abs(prices[1] - prices[0])
    d2 = abs(prices[2] - prices[1])
    ratio = d1 / d2
    ok = ratio >= 1.7
    _report(10, ok, f"doubling differences {d1:.3e} -> {d2:.3e}, "
                    f"ratio = {ratio:.2f} (floor 1.7)")
    assert ratio >= 1.7
