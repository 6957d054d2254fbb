"""Parameters, state and payoff primitives shared by every pricer.

All types are frozen dataclasses: validate once, then share freely across
workers. The recovered fraction z is always derived as 1 - x - y, never
stored, so the conservation law cannot drift.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange


class OptionKind(enum.Enum):
    CALL = "call"
    PUT = "put"


@dataclass(frozen=True)
class EpidemicParams:
    """Infection/recovery rates and their volatilities.

    beta and gamma are per unit time; sigma and zeta per sqrt(unit time).
    zeta == 0 is the one-factor configuration, in which rho is unused.
    """

    beta: float
    gamma: float
    sigma: float = 0.0
    zeta: float = 0.0
    rho: float = 0.0

    @property
    def two_factor(self) -> bool:
        return self.zeta > 0.0


@dataclass(frozen=True)
class SirState:
    """Susceptible/infected fractions; recovered fraction is derived."""

    x: float
    y: float

    @property
    def z(self) -> float:
        return 1.0 - self.x - self.y


@dataclass(frozen=True)
class OptionTerms:
    kind: OptionKind
    strike: float
    expiry: float
    discount_rate: float = 0.0
    notional: float = 1.0


def check_params(p: EpidemicParams) -> EpidemicParams:
    """Field bounds for the rate parameters alone (no state attached)."""
    if not p.beta > 0.0:
        raise OutOfRange("beta", p.beta, "beta > 0")
    if not p.gamma > 0.0:
        raise OutOfRange("gamma", p.gamma, "gamma > 0")
    if not p.sigma >= 0.0:
        raise OutOfRange("sigma", p.sigma, "sigma >= 0")
    if not p.zeta >= 0.0:
        raise OutOfRange("zeta", p.zeta, "zeta >= 0")
    if not -1.0 <= p.rho <= 1.0:
        raise OutOfRange("rho", p.rho, "-1 <= rho <= 1")
    return p


def validate_params(p: EpidemicParams, s: SirState) -> tuple[EpidemicParams, SirState]:
    """Check every field bound; return the pair unchanged when all hold.

    Raises OutOfRange naming the offending field and bound. NaNs fail every
    comparison and are rejected by the same checks.
    """
    check_params(p)
    if not 0.0 <= s.x <= 1.0:
        raise OutOfRange("x", s.x, "0 <= x <= 1")
    if not 0.0 <= s.y <= 1.0:
        raise OutOfRange("y", s.y, "0 <= y <= 1")
    return p, s


def validate_terms(t: OptionTerms) -> OptionTerms:
    """Bound-check option terms (strike in [0,1], positive expiry/notional)."""
    if not isinstance(t.kind, OptionKind):
        raise OutOfRange("kind", t.kind, "OptionKind.CALL or OptionKind.PUT")
    if not 0.0 <= t.strike <= 1.0:
        # Y <= 1 makes K > 1 calls identically zero and such puts degenerate.
        raise OutOfRange("strike", t.strike, "0 <= strike <= 1")
    if not t.expiry > 0.0:
        raise OutOfRange("expiry", t.expiry, "expiry > 0")
    if not t.notional > 0.0:
        raise OutOfRange("notional", t.notional, "notional > 0")
    return t


def eta_squared(x, p: EpidemicParams):
    """sigma^2 x^2 - 2 rho sigma zeta x + zeta^2, clipped at 0.

    The radicand is a completed square plus (1 - rho^2) zeta^2, so it is
    nonnegative for |rho| <= 1; the clip only absorbs rounding at exact
    cancellation (e.g. rho = 1 with sigma x = zeta). Shared by both models'
    PDE coefficients and the MC kernels so the zeta = 0 degeneration is exact.
    """
    rad = p.sigma * p.sigma * x * x - 2.0 * p.rho * p.sigma * p.zeta * x + p.zeta * p.zeta
    return np.maximum(rad, 0.0)


def eta(x, p: EpidemicParams):
    """Diffusion coefficient of the infected fraction in the two-factor model.

    Accepts scalars or arrays. With zeta = 0 this is exactly sigma*x (the
    one-factor coefficient), returned without going through the square root.
    """
    if p.zeta == 0.0:
        return p.sigma * np.asarray(x) if np.ndim(x) else p.sigma * x
    return np.sqrt(eta_squared(x, p))


def payoff(terms: OptionTerms, y_terminal):
    """Undiscounted payoff per unit notional; scalar or array y_terminal."""
    if terms.kind is OptionKind.CALL:
        return np.maximum(y_terminal - terms.strike, 0.0)
    return np.maximum(terms.strike - y_terminal, 0.0)
