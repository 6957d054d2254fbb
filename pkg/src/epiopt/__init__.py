"""Option pricing on the infected fraction of a stochastic SIR epidemic.

Engines: deterministic RK4 integration of the SIR system, log-Euler Monte
Carlo for the one- and two-factor stochastic variants, and a Douglas ADI
finite-difference solver for the associated backward equation. A hot compiled
kernel layer is used when available, with a pure-NumPy fallback selected at
import time (see epiopt._kernels.BACKEND).
"""

from ._kernels import BACKEND as kernel_backend
from .errors import (DegenerateStart, EmptySample, EngineError, GridTooCoarse,
                     OutOfDomain, OutOfRange, ParseError, StepCountTooSmall,
                     UnstableConfiguration, ValidationError)
from .mc import (LogState, Model, SimulationPlan, TerminalSample,
                 correlated_pair, euler_step_one_factor, euler_step_two_factor,
                 plan_for, simulate_terminal, simulate_with_draws)
from .model import (EpidemicParams, OptionKind, OptionTerms, SirState, eta,
                    eta_squared, payoff, validate_params, validate_terms)
from .ode import OdePath, integrate_sir, sir_derivative
from .pde import (Grid2D, ValueSurface, interpolate_surface, pde_coefficients,
                  pde_solve, terminal_surface, write_surface_csv)
from .pricing import (Greeks, Method, PriceEstimate, greeks_bump, price_mc,
                      price_pde)
from .scenario import (ResultRow, Scenario, parse_scenario, run_scenario,
                       scenario_to_dict)

__version__ = "0.1.0"

__all__ = [
    "DegenerateStart", "EmptySample", "EngineError", "GridTooCoarse",
    "OutOfDomain", "OutOfRange", "ParseError", "StepCountTooSmall",
    "UnstableConfiguration", "ValidationError",
    "EpidemicParams", "OptionKind", "OptionTerms", "SirState",
    "eta", "eta_squared", "payoff", "validate_params", "validate_terms",
    "OdePath", "integrate_sir", "sir_derivative",
    "LogState", "Model", "SimulationPlan", "TerminalSample",
    "correlated_pair", "euler_step_one_factor", "euler_step_two_factor",
    "plan_for", "simulate_terminal", "simulate_with_draws",
    "Grid2D", "ValueSurface", "interpolate_surface", "pde_coefficients",
    "pde_solve", "terminal_surface", "write_surface_csv",
    "Greeks", "Method", "PriceEstimate", "greeks_bump", "price_mc", "price_pde",
    "ResultRow", "Scenario", "parse_scenario", "run_scenario", "scenario_to_dict",
    "kernel_backend", "__version__",
]
