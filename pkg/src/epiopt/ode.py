"""Deterministic SIR integration: the sigma -> 0 reference for both pricers.

Classical fixed-step RK4. Fixed step (rather than adaptive) keeps reference
values bit-reproducible across runs, which the test suite relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange, StepCountTooSmall
from .model import EpidemicParams, SirState, validate_params


@dataclass(frozen=True)
class OdePath:
    """Time grid and (x, y) trajectory of one integration.

    z is derived (1 - x - y). The integrator does carry a redundant z
    internally as a self-test; max_conservation_defect records the largest
    |x + y + z_integrated - 1| seen before that copy is discarded.
    """

    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    max_conservation_defect: float

    @property
    def z(self) -> np.ndarray:
        return 1.0 - self.x - self.y

    def state(self, i: int) -> SirState:
        return SirState(float(self.x[i]), float(self.y[i]))

    @property
    def terminal(self) -> SirState:
        return self.state(len(self.times) - 1)


def sir_derivative(s: SirState, p: EpidemicParams) -> tuple[float, float, float]:
    """Right-hand side (dx, dy, dz) of the SIR system at state s.

    dx = -beta*x*y, dy = (beta*x - gamma)*y, dz = gamma*y; the three sum to
    zero up to rounding.
    """
    dx = -p.beta * s.x * s.y
    dy = (p.beta * s.x - p.gamma) * s.y
    dz = p.gamma * s.y
    return dx, dy, dz


def integrate_sir(p: EpidemicParams, s0: SirState, T: float, n_steps: int) -> OdePath:
    """Integrate the SIR system from s0 over [0, T] with RK4, fixed step T/n_steps.

    Raises StepCountTooSmall when T/n_steps > 0.5/max(beta, gamma); coarser
    steps than that are outside the regime where fixed-step RK4 is trustworthy
    for these rates.
    """
    validate_params(p, s0)
    if n_steps < 1:
        raise OutOfRange("n_steps", n_steps, "n_steps >= 1")
    if not T > 0.0:
        raise OutOfRange("T", T, "T > 0")
    h = T / n_steps
    if h > 0.5 / max(p.beta, p.gamma):
        raise StepCountTooSmall(
            f"step {h:g} exceeds 0.5/max(beta, gamma) = {0.5 / max(p.beta, p.gamma):g}; "
            f"increase n_steps"
        )

    beta, gamma = p.beta, p.gamma

    def f(x, y):
        return -beta * x * y, (beta * x - gamma) * y, gamma * y

    times = np.linspace(0.0, T, n_steps + 1)
    xs = np.empty(n_steps + 1)
    ys = np.empty(n_steps + 1)
    x, y, z = s0.x, s0.y, s0.z
    xs[0], ys[0] = x, y
    defect = abs(x + y + z - 1.0)
    for k in range(n_steps):
        k1x, k1y, k1z = f(x, y)
        k2x, k2y, k2z = f(x + 0.5 * h * k1x, y + 0.5 * h * k1y)
        k3x, k3y, k3z = f(x + 0.5 * h * k2x, y + 0.5 * h * k2y)
        k4x, k4y, k4z = f(x + h * k3x, y + h * k3y)
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        xs[k + 1], ys[k + 1] = x, y
        d = abs(x + y + z - 1.0)
        if d > defect:
            defect = d
    return OdePath(times=times, x=xs, y=ys, max_conservation_defect=defect)
