"""Discounting, parity, bounds and bump Greeks."""

import math

import numpy as np
import pytest

from epiopt import (EmptySample, EpidemicParams, Grid2D, Method, Model,
                    OptionKind, OptionTerms, SirState, greeks_bump, payoff,
                    plan_for, price_mc, price_pde, pde_solve, simulate_terminal)
from epiopt.mc import TerminalSample

P = EpidemicParams(0.3, 0.1, sigma=0.2)
S0 = SirState(0.99, 0.01)
PLAN = plan_for(Model.ONE_FACTOR, 10.0, n_paths=20_000, n_steps=100, seed=6)
SAMPLE = simulate_terminal(P, S0, 10.0, PLAN)


def test_price_reconstruction_is_bit_exact():
    terms = OptionTerms(OptionKind.CALL, 0.1, 10.0, discount_rate=0.03,
                        notional=2_500_000.0)
    est = price_mc(SAMPLE, terms)
    assert est.price == math.exp(-0.03 * 10.0) * est.undiscounted_mean * 2_500_000.0
    assert est.method is Method.MONTE_CARLO
    assert est.n_paths == 20_000
    assert est.stderr > 0


def test_empty_sample_rejected():
    empty = TerminalSample(np.array([]), np.array([]), 0, np.inf, np.inf)
    with pytest.raises(EmptySample):
        price_mc(empty, OptionTerms(OptionKind.CALL, 0.1, 10.0))


def test_single_path_sample_has_zero_stderr():
    one = TerminalSample(np.array([0.3]), np.array([0.6]), 0, 0.5, 1.2)
    est = price_mc(one, OptionTerms(OptionKind.CALL, 0.1, 10.0))
    assert est.stderr == 0.0 and est.n_paths == 1


def test_strike_zero_call_is_discounted_mean():
    terms = OptionTerms(OptionKind.CALL, 0.0, 10.0, discount_rate=0.02)
    est = price_mc(SAMPLE, terms)
    assert est.price == math.exp(-0.2) * float(np.mean(SAMPLE.y_terminal)) * 1.0


def test_strike_one_call_is_worthless():
    est = price_mc(SAMPLE, OptionTerms(OptionKind.CALL, 1.0, 10.0))
    assert est.price == 0.0 and est.stderr == 0.0


def test_put_call_parity_per_sample():
    for r in (0.0, 0.04):
        call = price_mc(SAMPLE, OptionTerms(OptionKind.CALL, 0.1, 10.0, r, 3.0))
        put = price_mc(SAMPLE, OptionTerms(OptionKind.PUT, 0.1, 10.0, r, 3.0))
        expected = math.exp(-r * 10.0) * (np.mean(SAMPLE.y_terminal) - 0.1) * 3.0
        assert call.price - put.price == pytest.approx(expected, rel=1e-12)


def test_discounting_applied_after_expectation():
    flat = price_mc(SAMPLE, OptionTerms(OptionKind.CALL, 0.1, 10.0, 0.0))
    disc = price_mc(SAMPLE, OptionTerms(OptionKind.CALL, 0.1, 10.0, 0.05))
    assert disc.price == flat.price * math.exp(-0.5)  # exact at notional 1
    assert disc.undiscounted_mean == flat.undiscounted_mean


def test_payoff_bounds():
    call = price_mc(SAMPLE, OptionTerms(OptionKind.CALL, 0.1, 10.0, 0.03, 2.0))
    put = price_mc(SAMPLE, OptionTerms(OptionKind.PUT, 0.1, 10.0, 0.03, 2.0))
    df = math.exp(-0.3)
    assert call.price <= df * float(np.mean(SAMPLE.y_terminal)) * 2.0 + 1e-15
    assert put.price <= df * 0.1 * 2.0


def test_price_pde_fields_and_tiny_expiry_collapse():
    terms = OptionTerms(OptionKind.CALL, 0.1, 1e-8)
    surf = pde_solve(P, terms, Grid2D(41, 41, 1), Model.ONE_FACTOR)
    est = price_pde(surf, SirState(0.5, 0.3), terms)
    assert est.method is Method.PDE
    assert est.stderr == 0.0 and est.n_paths == 0
    assert est.price == pytest.approx(0.2, abs=1e-6)
    # absorbed state: y0 = 0 is worth nothing for a call
    assert price_pde(surf, SirState(0.5, 0.0), terms).price == 0.0


def test_greeks_argument_checks():
    terms = OptionTerms(OptionKind.CALL, 0.05, 10.0)
    with pytest.raises(ValueError):
        greeks_bump(P, S0, terms)  # neither plan nor grid
    with pytest.raises(ValueError):
        greeks_bump(P, S0, terms, plan=PLAN, grid=Grid2D(11, 11, 5))
    with pytest.raises(ValueError):
        greeks_bump(P, S0, terms, plan=PLAN, dy0=0.0)


def test_mc_call_delta_bounded_in_decaying_regime():
    # beta*x0 < gamma: infections decay, so Y_T moves less than y0 and
    # delta stays below the discounted notional
    terms = OptionTerms(OptionKind.CALL, 0.01, 10.0, discount_rate=0.02)
    g = greeks_bump(P, SirState(0.2, 0.05), terms, plan=PLAN)
    assert -0.05 <= g.delta_y0 <= math.exp(-0.2) * 1.05


def test_strike_zero_delta_limit():
    # K=0 payoff is Y_T itself: delta approximates d E[Y_T]/d y0 discounted
    terms = OptionTerms(OptionKind.CALL, 0.0, 10.0)
    g = greeks_bump(P, SirState(0.2, 0.05), terms, plan=PLAN)
    assert 0.0 < g.delta_y0 <= 1.05


def test_delta_exceeds_one_while_epidemic_grows():
    # beta*x0 > gamma amplifies the infected fraction, so dE[Y_T]/dy0 > 1;
    # the unit bound on delta is a property of decaying regimes only
    terms = OptionTerms(OptionKind.CALL, 0.0, 10.0)
    g = greeks_bump(P, SirState(0.9, 0.05), terms, plan=PLAN)
    assert g.delta_y0 > 1.0


def test_notional_linearity():
    base = OptionTerms(OptionKind.CALL, 0.05, 10.0, 0.01, 1.0)
    dbl = OptionTerms(OptionKind.CALL, 0.05, 10.0, 0.01, 2.0)
    g1 = greeks_bump(P, S0, base, plan=PLAN)
    g2 = greeks_bump(P, S0, dbl, plan=PLAN)
    assert g2.delta_y0 == pytest.approx(2 * g1.delta_y0, rel=1e-12)
    assert g2.delta_x0 == pytest.approx(2 * g1.delta_x0, rel=1e-12)
    assert g2.vega == pytest.approx(2 * g1.vega, rel=1e-12)
    assert price_mc(SAMPLE, dbl).price == 2 * price_mc(SAMPLE, base).price


def test_crn_sigma_bump_beats_independent_seeds():
    """Paired-sample variance oracle for the common-random-numbers choice.

    The stderr of the sigma-bump estimator from one paired run must be at
    least 5x smaller than with independent seeds on the two sides.
    """
    terms = OptionTerms(OptionKind.CALL, 0.05, 10.0)
    h = 1e-3
    plan = plan_for(Model.ONE_FACTOR, 10.0, n_paths=10_000, n_steps=100, seed=30)
    up_p = EpidemicParams(0.3, 0.1, sigma=0.2 + h)
    dn_p = EpidemicParams(0.3, 0.1, sigma=0.2 - h)

    pay_up = payoff(terms, simulate_terminal(up_p, S0, 10.0, plan).y_terminal)
    pay_dn = payoff(terms, simulate_terminal(dn_p, S0, 10.0, plan).y_terminal)
    se_crn = np.std(pay_up - pay_dn, ddof=1) / math.sqrt(pay_up.size) / (2 * h)

    other = plan_for(Model.ONE_FACTOR, 10.0, n_paths=10_000, n_steps=100, seed=31)
    pay_ind = payoff(terms, simulate_terminal(dn_p, S0, 10.0, other).y_terminal)
    var_ind = np.var(pay_up, ddof=1) + np.var(pay_ind, ddof=1)
    se_ind = math.sqrt(var_ind / pay_up.size) / (2 * h)

    assert se_ind >= 5.0 * se_crn


def test_pde_route_greeks():
    terms = OptionTerms(OptionKind.CALL, 0.1, 25.0)
    p = EpidemicParams(0.08, 0.03, sigma=0.2)
    g = greeks_bump(p, SirState(0.6, 0.1), terms, grid=Grid2D(101, 101, 100))
    assert 0.0 <= g.delta_y0 <= 1.0
    assert g.vega > 0.0  # near the money, more volatility means more value
    assert np.isfinite(g.delta_x0)
