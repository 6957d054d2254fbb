"""Monte Carlo engines for the log-transformed one- and two-factor schemes.

Paths evolve the log-state (l, m) = (-ln X, -ln Y), floored at 0 each step so
X and Y stay in (0, 1]. Randomness comes from per-path Philox substreams
keyed by (seed, path index): results are bit-identical for a given seed no
matter how paths are blocked or how many workers run, and any path's draws
are unchanged when n_paths changes.

Draw contract: each step consumes one (z, b) pair per path, z first, for both
models; the one-factor scheme simply never uses b. One-factor runs execute
the two-factor recursion with zeta = rho = 0, which makes the zeta -> 0
degeneration bit-exact rather than merely close.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from . import _kernels
from .errors import DegenerateStart, OutOfRange, StepCountTooSmall
from .model import EpidemicParams, SirState, validate_params

# Paths per kernel invocation. Sized by step count so the draw buffer stays
# ~30 MB; depends only on n_steps, never on worker count, so blocking cannot
# influence results.
_BLOCK_DRAWS = 2_000_000


class Model(enum.Enum):
    ONE_FACTOR = "one-factor"
    TWO_FACTOR = "two-factor"


@dataclass(frozen=True)
class LogState:
    """Log-transformed state: l = -ln X, m = -ln Y, both >= 0."""

    l: float
    m: float


@dataclass(frozen=True)
class SimulationPlan:
    model: Model
    n_paths: int
    n_steps: int
    delta: float
    seed: int
    store_paths: bool = False


def plan_for(model: Model, T: float, n_paths: int = 100_000, n_steps: int = 500,
             seed: int = 0, store_paths: bool = False) -> SimulationPlan:
    """Convenience constructor with delta = T / n_steps."""
    if n_steps < 1:
        raise OutOfRange("n_steps", n_steps, "n_steps >= 1")
    return SimulationPlan(model, n_paths, n_steps, T / n_steps, seed, store_paths)


@dataclass
class TerminalSample:
    """Terminal fractions per path plus run diagnostics.

    z_diagnostic can go negative in the two-factor model (the floors bound X
    and Y individually, not their sum); it is reported, never clipped.
    floor_count counts (path, step) events where a raw update went below 0;
    min_l/min_m track the post-floor minima over the whole run.
    """

    y_terminal: np.ndarray
    x_terminal: np.ndarray
    floor_count: int
    min_l: float
    min_m: float
    l_paths: np.ndarray | None = None
    m_paths: np.ndarray | None = None

    @property
    def z_diagnostic(self) -> np.ndarray:
        return 1.0 - self.x_terminal - self.y_terminal

    @property
    def n(self) -> int:
        return len(self.y_terminal)


def _step(l, m, beta, gamma, sigma, zeta, rho, z, b, delta):
    """One step of the (two-factor) recursion; scalar mirror of the kernels."""
    sq = math.sqrt(delta)
    xl = math.exp(-l)
    xm = math.exp(-m)
    A = beta * delta + sigma * sq * z
    eta2 = sigma * sigma * xl * xl - 2.0 * rho * sigma * zeta * xl + zeta * zeta
    l_new = l + A * xm + 0.5 * sigma * sigma * delta * (xm * xm)
    m_new = m + gamma * delta - A * xl + zeta * sq * b + 0.5 * delta * eta2
    return LogState(max(l_new, 0.0), max(m_new, 0.0))


def euler_step_one_factor(s: LogState, p: EpidemicParams, z: float, delta: float) -> LogState:
    """Single one-factor step; zeta is ignored, excursions below 0 are floored."""
    return _step(s.l, s.m, p.beta, p.gamma, p.sigma, 0.0, 0.0, z, 0.0, delta)


def euler_step_two_factor(s: LogState, p: EpidemicParams, z: float, b: float,
                          delta: float) -> LogState:
    """Single two-factor step with correlated draws (z, b); floored at 0."""
    return _step(s.l, s.m, p.beta, p.gamma, p.sigma, p.zeta, p.rho, z, b, delta)


def correlated_pair(u, v, rho: float):
    """Map independent standard normals to a pair with covariance [[1,rho],[rho,1]].

    Works elementwise on arrays: z = u, b = rho*u + sqrt(1-rho^2)*v.
    """
    if not -1.0 <= rho <= 1.0:
        raise OutOfRange("rho", rho, "-1 <= rho <= 1")
    return u, rho * u + math.sqrt(1.0 - rho * rho) * v


def _substream_normals(seed: int, lo: int, hi: int, n_steps: int) -> np.ndarray:
    """Draws for paths [lo, hi): shape (hi-lo, n_steps, 2), row i from
    Philox keyed (seed, lo + i).

    Reuses one bit generator and reassigns its key/counter per path; verified
    bit-identical to constructing Philox(key=[seed, i]) afresh (locked by a
    unit test), just faster.
    """
    out = np.empty((hi - lo, n_steps, 2))
    bg = Philox(key=np.array([seed, 0], dtype=np.uint64))
    for i in range(lo, hi):
        st = bg.state
        st["state"]["key"][1] = i
        st["state"]["counter"][:] = 0
        st["buffer_pos"] = st["buffer"].shape[0]  # mark buffer consumed
        st["has_uint32"] = 0
        st["uinteger"] = 0
        bg.state = st
        Generator(bg).standard_normal(out=out[i - lo])
    return out


def _blocks(n_paths: int, n_steps: int):
    block = max(256, _BLOCK_DRAWS // max(n_steps, 1))
    return [(lo, min(lo + block, n_paths)) for lo in range(0, n_paths, block)]


def simulate_terminal(p: EpidemicParams, s0: SirState, T: float,
                      plan: SimulationPlan, workers: int = 1) -> TerminalSample:
    """Simulate plan.n_paths paths to time T; returns terminal fractions.

    Deterministic in (inputs, seed) regardless of workers. Raises
    DegenerateStart when x0 or y0 is 0 (the log transform needs positive
    starts) and StepCountTooSmall when delta*max(beta, gamma) > 0.5.
    """
    validate_params(p, s0)
    if s0.x == 0.0 or s0.y == 0.0:
        raise DegenerateStart(f"x0={s0.x}, y0={s0.y}: both must be positive")
    if plan.n_paths < 1:
        raise OutOfRange("n_paths", plan.n_paths, "n_paths >= 1")
    if plan.n_steps < 1:
        raise OutOfRange("n_steps", plan.n_steps, "n_steps >= 1")
    if not plan.delta > 0.0:
        raise OutOfRange("delta", plan.delta, "delta > 0")
    if abs(plan.n_steps * plan.delta - T) > 1e-9 * max(1.0, abs(T)):
        raise OutOfRange("delta", plan.delta, f"n_steps * delta must equal T={T}")
    if plan.delta * max(p.beta, p.gamma) > 0.5:
        raise StepCountTooSmall(
            f"delta={plan.delta:g} too coarse: delta*max(beta, gamma) "
            f"= {plan.delta * max(p.beta, p.gamma):g} > 0.5"
        )

    zeta, rho = (p.zeta, p.rho) if plan.model is Model.TWO_FACTOR else (0.0, 0.0)
    l0 = -math.log(s0.x)
    m0 = -math.log(s0.y)
    n = plan.n_paths
    l_all = np.empty(n)
    m_all = np.empty(n)
    if plan.store_paths:
        l_paths = np.empty((n, plan.n_steps + 1))
        m_paths = np.empty((n, plan.n_steps + 1))
        l_paths[:, 0] = l0
        m_paths[:, 0] = m0
    else:
        l_paths = m_paths = None

    # With zero diffusion the scheme multiplies every draw by 0, so the
    # output cannot depend on them; skip the (expensive) sub-stream
    # generation and feed zeros. Bit-identical either way.
    deterministic = p.sigma == 0.0 and zeta == 0.0

    def run(span):
        lo, hi = span
        if deterministic:
            draws = np.zeros((hi - lo, plan.n_steps, 2))
        else:
            draws = _substream_normals(plan.seed, lo, hi, plan.n_steps)
        l = np.full(hi - lo, l0)
        m = np.full(hi - lo, m0)
        if plan.store_paths:
            stats = _kernels.mc.run_block_store(
                l, m, draws, p.beta, p.gamma, p.sigma, zeta, rho, plan.delta,
                l_paths[lo:hi], m_paths[lo:hi])
        else:
            stats = _kernels.mc.run_block(
                l, m, draws, p.beta, p.gamma, p.sigma, zeta, rho, plan.delta)
        l_all[lo:hi] = l
        m_all[lo:hi] = m
        return stats

    spans = _blocks(n, plan.n_steps)
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, spans))
    else:
        stats = [run(s) for s in spans]

    return TerminalSample(
        y_terminal=np.exp(-m_all),
        x_terminal=np.exp(-l_all),
        floor_count=sum(s[0] for s in stats),
        min_l=min(s[1] for s in stats),
        min_m=min(s[2] for s in stats),
        l_paths=l_paths,
        m_paths=m_paths,
    )


def simulate_with_draws(p: EpidemicParams, s0: SirState, draws: np.ndarray,
                        delta: float, model: Model) -> TerminalSample:
    """Advance every path with caller-supplied draws (n_paths, n_steps, 2).

    Same recursion and flooring as simulate_terminal, but the randomness is
    explicit — useful for coupled-refinement studies and for testing the draw
    contract itself.
    """
    validate_params(p, s0)
    if s0.x == 0.0 or s0.y == 0.0:
        raise DegenerateStart(f"x0={s0.x}, y0={s0.y}: both must be positive")
    draws = np.ascontiguousarray(draws, dtype=np.float64)
    if draws.ndim != 3 or draws.shape[2] != 2:
        raise OutOfRange("draws", draws.shape, "shape (n_paths, n_steps, 2)")
    zeta, rho = (p.zeta, p.rho) if model is Model.TWO_FACTOR else (0.0, 0.0)
    l = np.full(draws.shape[0], -math.log(s0.x))
    m = np.full(draws.shape[0], -math.log(s0.y))
    fc, mn_l, mn_m = _kernels.mc.run_block(
        l, m, draws, p.beta, p.gamma, p.sigma, zeta, rho, delta)
    return TerminalSample(
        y_terminal=np.exp(-m),
        x_terminal=np.exp(-l),
        floor_count=fc,
        min_l=mn_l,
        min_m=mn_m,
    )
