"""ADI pricer: backward equations for both models on the unit square.

After the time reversal tau = T - t the value function satisfies
V_tau = a_x V_x + a_y V_y + d_xx V_xx + d_xy V_xy + d_yy V_yy with the payoff
as tau = 0 data. Time stepping is Douglas ADI with theta = 1/2: both axis
operators implicit, the mixed derivative explicit. All coefficients vanish on
x = 0 (one-factor) and y = 0, which are natural degenerate boundaries — those
rows never change. At x = 1 and y = 1 the simulated process is reflected (the
flooring of the log-state), so the matching closure is zero normal slope:
drift dropped, diffusion mirrored, cross term zeroed on the edges. One-sided
(extrapolation) closures there are exponentially unstable wherever the drift
points into the boundary; the reflecting closure is stable and converges to
the Monte Carlo prices under grid refinement.

First derivatives are central unless a node's cell Peclet number |a| h / d
exceeds 2, where the stencil switches to upwind — otherwise the coarse-sigma
limit oscillates near y = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GridTooCoarse, OutOfDomain, UnstableConfiguration
from .mc import Model
from .model import (EpidemicParams, OptionTerms, check_params, eta_squared,
                    payoff, validate_terms)

THETA = 0.5


@dataclass(frozen=True)
class Grid2D:
    """Uniform tensor grid on [0,1]^2 with n_time backward steps."""

    n_x: int = 201
    n_y: int = 201
    n_time: int = 200

    def __post_init__(self):
        if self.n_x < 3 or self.n_y < 3:
            raise GridTooCoarse(f"n_x={self.n_x}, n_y={self.n_y}: need at least 3 nodes per axis")
        if self.n_time < 1:
            raise GridTooCoarse(f"n_time={self.n_time}: need at least one time step")

    @property
    def x_nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_x)

    @property
    def y_nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_y)

    @property
    def hx(self) -> float:
        return 1.0 / (self.n_x - 1)

    @property
    def hy(self) -> float:
        return 1.0 / (self.n_y - 1)


@dataclass
class ValueSurface:
    """Option value per unit notional on the grid at time-to-expiry tau."""

    values: np.ndarray
    grid: Grid2D
    tau: float


def pde_coefficients(x, y, p: EpidemicParams, model: Model):
    """Drift and diffusion coefficients (a_x, a_y, d_xx, d_xy, d_yy) at (x, y).

    Broadcasts over array input. Both models share a_x = -beta*x*y,
    a_y = (beta*x - gamma)*y and d_xx = sigma^2 x^2 y^2 / 2; the y-direction
    and mixed coefficients generalize through eta(x)^2 = sigma^2 x^2
    - 2 rho sigma zeta x + zeta^2, with the one-factor model evaluated at
    zeta = rho = 0 through the same expressions (so its degeneration is exact).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    zeta, rho = (p.zeta, p.rho) if model is Model.TWO_FACTOR else (0.0, 0.0)
    eff = EpidemicParams(p.beta, p.gamma, p.sigma, zeta, rho)
    a_x = -p.beta * x * y
    a_y = (p.beta * x - p.gamma) * y
    y2 = y * y
    d_xx = 0.5 * p.sigma * p.sigma * x * x * y2
    d_xy = -p.sigma * x * y2 * (p.sigma * x - rho * zeta)
    d_yy = 0.5 * y2 * eta_squared(x, eff)
    return a_x, a_y, d_xx, d_xy, d_yy


def _check_cross_dominance(d_xx, d_xy, d_yy):
    """Explicit mixed-term stability: require |d_xy| <= 2 sqrt(d_xx d_yy).

    Holds for every valid parameter set (it is equivalent to rho^2 <= 1), so
    this guard only fires on corrupted inputs; kept as a hard error rather
    than an assert because the scheme genuinely diverges when it is violated.
    """
    bound = 2.0 * np.sqrt(d_xx * d_yy) + 1e-12 * (1.0 + np.abs(d_xy))
    if np.any(np.abs(d_xy) > bound):
        worst = float(np.max(np.abs(d_xy) - bound))
        raise UnstableConfiguration(
            f"mixed derivative exceeds the cross-dominance bound by {worst:g}; "
            "the explicit cross term would be unstable"
        )


def _axis_bands(a, d, h, n):
    """Tridiagonal bands (lo, di, up) for a*d/ds + d*d2/ds2 along an axis.

    a, d: coefficient arrays with the swept axis first, shape (n, ...).
    Interior nodes: central second difference; first derivative central
    unless |a| h > 2 d (cell Peclet), then upwind. Index 0 carries no stencil
    (coefficients vanish there on both axes of this problem). The last index
    is a reflecting closure: ghost node mirrored, drift dropped.
    """
    lo = np.zeros_like(a)
    di = np.zeros_like(a)
    up = np.zeros_like(a)

    ai = a[1:-1]
    di_ = d[1:-1]
    # diffusion, central everywhere it exists
    lo[1:-1] += di_ / (h * h)
    di[1:-1] += -2.0 * di_ / (h * h)
    up[1:-1] += di_ / (h * h)
    # drift: central where the cell Peclet number allows, upwind otherwise
    use_central = np.abs(ai) * h <= 2.0 * di_
    central_lo = np.where(use_central, -ai / (2.0 * h), 0.0)
    central_up = np.where(use_central, ai / (2.0 * h), 0.0)
    up_pos = np.where(~use_central & (ai > 0.0), ai / h, 0.0)   # forward difference
    up_neg = np.where(~use_central & (ai < 0.0), -ai / h, 0.0)  # backward difference
    lo[1:-1] += central_lo + up_neg
    di[1:-1] += -up_pos - up_neg
    up[1:-1] += central_up + up_pos
    # reflecting closure at the top: V_{n} ghost = V_{n-2}, zero normal slope
    lo[-1] += 2.0 * d[-1] / (h * h)
    di[-1] += -2.0 * d[-1] / (h * h)
    return lo, di, up


def _thomas_factors(lo, di, up, axis):
    """Factor M = I - THETA*dtau*A (bands already scaled) along axis 0 or 1.

    Returns (mlo, cp, den) with the recursion den_k = mdi_k - mlo_k cp_{k-1},
    cp_k = mup_k / den_k. M is strictly diagonally dominant (the operator's
    diagonal is nonpositive), so den stays positive.
    """
    if axis == 1:
        lo, di, up = lo.T, di.T, up.T
    n = lo.shape[0]
    cp = np.empty_like(lo)
    den = np.empty_like(lo)
    den[0] = di[0]
    cp[0] = up[0] / den[0]
    for k in range(1, n):
        den[k] = di[k] - lo[k] * cp[k - 1]
        cp[k] = up[k] / den[k]
    if axis == 1:
        return np.ascontiguousarray(lo.T), np.ascontiguousarray(cp.T), np.ascontiguousarray(den.T)
    return lo, cp, den


def terminal_surface(terms: OptionTerms, grid: Grid2D) -> ValueSurface:
    """tau = 0 layer: the payoff evaluated on y_nodes, replicated over x."""
    validate_terms(terms)
    row = payoff(terms, grid.y_nodes)
    return ValueSurface(np.tile(row, (grid.n_x, 1)), grid, 0.0)


def pde_solve(p: EpidemicParams, terms: OptionTerms, grid: Grid2D,
              model: Model) -> ValueSurface:
    """Solve backward to tau = T; returns the undiscounted value surface."""
    check_params(p)
    validate_terms(terms)
    if grid.n_x < 3 or grid.n_y < 3 or grid.n_time < 1:
        raise GridTooCoarse(f"grid {grid.n_x}x{grid.n_y}x{grid.n_time} too coarse to difference")
    X, Y = np.meshgrid(grid.x_nodes, grid.y_nodes, indexing="ij")
    a_x, a_y, d_xx, d_xy, d_yy = pde_coefficients(X, Y, p, model)
    _check_cross_dominance(d_xx, d_xy, d_yy)

    dtau = terms.expiry / grid.n_time
    ax_lo, ax_di, ax_up = _axis_bands(a_x, d_xx, grid.hx, grid.n_x)
    ay_lo, ay_di, ay_up = _axis_bands(a_y.T, d_yy.T, grid.hy, grid.n_y)
    ay_lo, ay_di, ay_up = ay_lo.T.copy(), ay_di.T.copy(), ay_up.T.copy()
    cxy4 = d_xy / (4.0 * grid.hx * grid.hy)

    th = THETA * dtau
    fx = _thomas_factors(-th * ax_lo, 1.0 - th * ax_di, -th * ax_up, axis=0)
    fy = _thomas_factors(-th * ay_lo, 1.0 - th * ay_di, -th * ay_up, axis=1)

    V0 = terminal_surface(terms, grid).values
    V = _kernels.pde.douglas_run(
        np.ascontiguousarray(V0),
        np.ascontiguousarray(ax_lo), np.ascontiguousarray(ax_di), np.ascontiguousarray(ax_up),
        np.ascontiguousarray(ay_lo), np.ascontiguousarray(ay_di), np.ascontiguousarray(ay_up),
        np.ascontiguousarray(cxy4),
        *fx, *fy, dtau, THETA, grid.n_time,
    )
    return ValueSurface(V, grid, terms.expiry)


def interpolate_surface(surface: ValueSurface, x0: float, y0: float) -> float:
    """Bilinear interpolation of the surface at (x0, y0)."""
    if not (0.0 <= x0 <= 1.0 and 0.0 <= y0 <= 1.0):
        raise OutOfDomain(f"({x0}, {y0}) outside the unit square")
    g = surface.grid
    i = min(int(x0 / g.hx), g.n_x - 2)
    j = min(int(y0 / g.hy), g.n_y - 2)
    tx = (x0 - i * g.hx) / g.hx
    ty = (y0 - j * g.hy) / g.hy
    v = surface.values
    return float(
        (1 - tx) * (1 - ty) * v[i, j]
        + tx * (1 - ty) * v[i + 1, j]
        + (1 - tx) * ty * v[i, j + 1]
        + tx * ty * v[i + 1, j + 1]
    )


def write_surface_csv(surface: ValueSurface, stream) -> None:
    """Dump the surface as CSV (header tau,x,y,value), row-major over the grid."""
    g = surface.grid
    xs, ys = g.x_nodes, g.y_nodes
    stream.write("tau,x,y,value\n")
    for i in range(g.n_x):
        for j in range(g.n_y):
            stream.write(
                f"{surface.tau:.12g},{xs[i]:.12g},{ys[j]:.12g},{surface.values[i, j]:.12g}\n"
            )
