"""Discounted prices with error bars, plus bump Greeks.

There is no replication argument for these contracts, so expectations are
taken under the physical measure and the discount rate r is plain scenario
input. Discounting is applied after the expectation, which makes
price(r) = price(0) * exp(-r*T) exact for both engines, and the estimate
always reconstructs as exp(-r*T) * undiscounted_mean * notional bit-for-bit.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySample
from .mc import Model, SimulationPlan, TerminalSample, simulate_terminal
from .model import EpidemicParams, OptionTerms, SirState, payoff
from .pde import Grid2D, ValueSurface, interpolate_surface, pde_solve


class Method(enum.Enum):
    MONTE_CARLO = "MonteCarlo"
    PDE = "PDE"


@dataclass(frozen=True)
class PriceEstimate:
    price: float
    stderr: float
    n_paths: int
    method: Method
    undiscounted_mean: float


def _discount(terms: OptionTerms) -> float:
    return math.exp(-terms.discount_rate * terms.expiry)


def price_mc(sample: TerminalSample, terms: OptionTerms) -> PriceEstimate:
    """Mean discounted payoff over the sample's paths.

    stderr uses the n-1 normalization and is 0 for a single-path sample
    (no spread estimate exists there, and the field must stay nonnegative).
    """
    n = int(sample.y_terminal.size)
    if n == 0:
        raise EmptySample("terminal sample contains no paths")
    pay = payoff(terms, sample.y_terminal)
    mean = float(np.mean(pay))
    df = _discount(terms)
    price = df * mean * terms.notional
    if n >= 2:
        stderr = df * (float(np.std(pay, ddof=1)) / math.sqrt(n)) * terms.notional
    else:
        stderr = 0.0
    return PriceEstimate(price, stderr, n, Method.MONTE_CARLO, mean)


def price_pde(surface: ValueSurface, s0: SirState, terms: OptionTerms) -> PriceEstimate:
    """Read the solved surface at the current state, discount and scale."""
    mean = interpolate_surface(surface, s0.x, s0.y)
    price = _discount(terms) * mean * terms.notional
    return PriceEstimate(price, 0.0, 0, Method.PDE, mean)


@dataclass(frozen=True)
class Greeks:
    """Central-difference sensitivities of the discounted price."""

    delta_y0: float
    delta_x0: float
    vega: float


def greeks_bump(p: EpidemicParams, s0: SirState, terms: OptionTerms, *,
                plan: SimulationPlan | None = None,
                grid: Grid2D | None = None,
                model: Model | None = None,
                dy0: float = 1e-4, dx0: float = 1e-4,
                dsigma: float = 1e-3) -> Greeks:
    """Bump-and-reprice Greeks, central differences.

    Exactly one of plan (Monte Carlo) or grid (PDE) selects the engine. The
    MC route reruns the same plan — same seed — for each bumped input, so the
    two sides of every difference share their random numbers and the noise
    largely cancels. The PDE route solves once and re-interpolates for the
    state bumps; only the sigma bump needs two extra solves. Bumped states
    and parameters go through the usual validation, so a bump that leaves
    the admissible region raises rather than extrapolating.
    """
    if (plan is None) == (grid is None):
        raise ValueError("pass exactly one of plan= or grid=")
    for name, h in (("dy0", dy0), ("dx0", dx0), ("dsigma", dsigma)):
        if not h > 0.0:
            raise ValueError(f"{name} must be positive, got {h!r}")
    if model is None:
        model = Model.TWO_FACTOR if p.two_factor else Model.ONE_FACTOR

    if plan is not None:
        def run(pp: EpidemicParams, ss: SirState) -> float:
            return price_mc(simulate_terminal(pp, ss, terms.expiry, plan), terms).price

        d_y = (run(p, SirState(s0.x, s0.y + dy0)) - run(p, SirState(s0.x, s0.y - dy0))) / (2.0 * dy0)
        d_x = (run(p, SirState(s0.x + dx0, s0.y)) - run(p, SirState(s0.x - dx0, s0.y))) / (2.0 * dx0)
        up = dataclasses.replace(p, sigma=p.sigma + dsigma)
        dn = dataclasses.replace(p, sigma=p.sigma - dsigma)
        vega = (run(up, s0) - run(dn, s0)) / (2.0 * dsigma)
        return Greeks(d_y, d_x, vega)

    surface = pde_solve(p, terms, grid, model)

    def read(ss: SirState, surf: ValueSurface = surface) -> float:
        return price_pde(surf, ss, terms).price

    d_y = (read(SirState(s0.x, s0.y + dy0)) - read(SirState(s0.x, s0.y - dy0))) / (2.0 * dy0)
    d_x = (read(SirState(s0.x + dx0, s0.y)) - read(SirState(s0.x - dx0, s0.y))) / (2.0 * dx0)
    surf_up = pde_solve(dataclasses.replace(p, sigma=p.sigma + dsigma), terms, grid, model)
    surf_dn = pde_solve(dataclasses.replace(p, sigma=p.sigma - dsigma), terms, grid, model)
    vega = (read(s0, surf_up) - read(s0, surf_dn)) / (2.0 * dsigma)
    return Greeks(d_y, d_x, vega)
