"""NumPy fallback for the Monte Carlo path kernel.

Same contract as the compiled version (_mc_cy): advance a block of paths
through every time step in place, consuming draws[:, k, 0] as z and
draws[:, k, 1] as b at step k. One-factor runs pass zeta=0, rho=0 and flow
through the identical arithmetic, which is what makes the zeta->0
degeneration bit-exact.
"""

import numpy as np


def run_block(l, m, draws, beta, gamma, sigma, zeta, rho, delta):
    """Advance paths; returns (floor_count, min_l, min_m) after flooring.

    l, m : (n,) float64, modified in place
    draws : (n, n_steps, 2) standard normals
    """
    n_steps = draws.shape[1]
    sq = np.sqrt(delta)
    s2 = sigma * sigma
    corr = np.sqrt(max(1.0 - rho * rho, 0.0))
    half_l = 0.5 * s2 * delta
    half_dt = 0.5 * delta
    floor_count = 0
    min_l = float(l.min()) if l.size else np.inf
    min_m = float(m.min()) if m.size else np.inf
    for k in range(n_steps):
        z = draws[:, k, 0]
        b = rho * z + corr * draws[:, k, 1]
        xl = np.exp(-l)
        xm = np.exp(-m)
        A = beta * delta + sigma * sq * z
        eta2 = s2 * xl * xl - 2.0 * rho * sigma * zeta * xl + zeta * zeta
        l_new = l + A * xm + half_l * (xm * xm)
        m_new = m + gamma * delta - A * xl + zeta * sq * b + half_dt * eta2
        floor_count += int(np.count_nonzero(l_new < 0.0))
        floor_count += int(np.count_nonzero(m_new < 0.0))
        np.maximum(l_new, 0.0, out=l)
        np.maximum(m_new, 0.0, out=m)
        min_l = min(min_l, float(l.min()))
        min_m = min(min_m, float(m.min()))
    return floor_count, min_l, min_m


def run_block_store(l, m, draws, beta, gamma, sigma, zeta, rho, delta, l_paths, m_paths):
    """run_block variant that also records l_paths[:, k+1], m_paths[:, k+1].

    Column 0 of the path arrays is the caller's responsibility (initial state).
    """
    n_steps = draws.shape[1]
    sq = np.sqrt(delta)
    s2 = sigma * sigma
    corr = np.sqrt(max(1.0 - rho * rho, 0.0))
    half_l = 0.5 * s2 * delta
    half_dt = 0.5 * delta
    floor_count = 0
    min_l = float(l.min()) if l.size else np.inf
    min_m = float(m.min()) if m.size else np.inf
    for k in range(n_steps):
        z = draws[:, k, 0]
        b = rho * z + corr * draws[:, k, 1]
        xl = np.exp(-l)
        xm = np.exp(-m)
        A = beta * delta + sigma * sq * z
        eta2 = s2 * xl * xl - 2.0 * rho * sigma * zeta * xl + zeta * zeta
        l_new = l + A * xm + half_l * (xm * xm)
        m_new = m + gamma * delta - A * xl + zeta * sq * b + half_dt * eta2
        floor_count += int(np.count_nonzero(l_new < 0.0))
        floor_count += int(np.count_nonzero(m_new < 0.0))
        np.maximum(l_new, 0.0, out=l)
        np.maximum(m_new, 0.0, out=m)
        l_paths[:, k + 1] = l
        m_paths[:, k + 1] = m
        min_l = min(min_l, float(l.min()))
        min_m = min(min_m, float(m.min()))
    return floor_count, min_l, min_m
