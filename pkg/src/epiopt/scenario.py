"""Scenario files: a flat JSON document describing one pricing job.

Minimal document:

    {"beta": 0.3, "gamma": 0.1, "sigma": 0.2,
     "x0": 0.99, "y0": 0.01, "K": 0.05, "T": 50}

Everything else defaults: engine "both", 10^5 paths, 500 Euler steps,
201x201x200 grid, r = 0, notional = 1, call, seed 0. Sweeps are written as
arrays ("strikes": [...], "maturities": [...]); the scalar K/T forms are
aliases for one-element sweeps. Strike and maturity lists are normalized to
sorted order at parse time so output row order never depends on how the file
was written. "time_unit" is accepted as documentation metadata and echoed
back; the engine never converts units.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

from .errors import OutOfRange, ParseError, ValidationError
from .mc import Model, plan_for, simulate_terminal
from .model import (EpidemicParams, OptionKind, OptionTerms, SirState,
                    validate_params, validate_terms)
from .ode import integrate_sir
from .pde import Grid2D, pde_solve
from .pricing import price_mc, price_pde

_ENGINES = ("ode", "mc", "pde", "both")
_FORMATS = ("csv", "json")

_DEFAULTS = {
    "sigma": 0.0, "zeta": 0.0, "rho": 0.0, "r": 0.0, "notional": 1.0,
    "kind": "call", "engine": "both", "n_paths": 100_000, "n_steps": 500,
    "grid": (201, 201, 200), "seed": 0, "format": "csv", "workers": 1,
}

_KNOWN_KEYS = frozenset(
    ["beta", "gamma", "x0", "y0", "K", "T", "strikes", "maturities", "time_unit"]
) | frozenset(_DEFAULTS)


@dataclass(frozen=True)
class Scenario:
    params: EpidemicParams
    state: SirState
    kind: OptionKind
    strikes: tuple[float, ...]
    maturities: tuple[float, ...]
    r: float
    notional: float
    engine: str
    n_paths: int
    n_steps: int
    grid: tuple[int, int, int]
    seed: int
    format: str
    workers: int
    time_unit: str | None = None

    @property
    def model(self) -> Model:
        return Model.TWO_FACTOR if self.params.two_factor else Model.ONE_FACTOR

    def terms(self, strike: float, maturity: float) -> OptionTerms:
        return OptionTerms(self.kind, strike, maturity, self.r, self.notional)


def _require_number(doc, key, default=None):
    if key not in doc:
        if default is None:
            raise ParseError(f"missing required field {key!r}", field=key)
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"field {key!r} must be a number, got {v!r}", field=key)
    return float(v)


def _require_int(doc, key, default):
    v = doc.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"field {key!r} must be an integer, got {v!r}", field=key)
    return v


def _sweep(doc, scalar_key, list_key):
    """Resolve the scalar/list alias pair into a sorted nonempty tuple."""
    if scalar_key in doc and list_key in doc:
        raise ParseError(f"give either {scalar_key!r} or {list_key!r}, not both",
                         field=list_key)
    if scalar_key in doc:
        return (_require_number(doc, scalar_key),)
    if list_key not in doc:
        raise ParseError(f"missing required field {scalar_key!r} (or {list_key!r})",
                         field=scalar_key)
    vals = doc[list_key]
    if not isinstance(vals, list) or not vals:
        raise ParseError(f"field {list_key!r} must be a nonempty array", field=list_key)
    out = []
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"field {list_key!r} must contain numbers, got {v!r}",
                             field=list_key)
        out.append(float(v))
    return tuple(sorted(out))


def parse_scenario(source) -> Scenario:
    """Build a validated Scenario from a file path or a JSON string.

    Strings that start with '{' are treated as inline JSON; anything else is
    a path. Unknown keys, type mismatches and malformed JSON raise ParseError
    (with the line number when the JSON parser provides one); values that
    violate model bounds raise ValidationError carrying the model-core
    message.
    """
    text = source
    if not (isinstance(source, str) and source.lstrip().startswith("{")):
        path = os.fspath(source)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ParseError(f"cannot read scenario file {path!r}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")

    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(unknown)}", field=unknown[0])
    if "rho" in doc and "zeta" not in doc:
        raise ValidationError("rho supplied without zeta: two-factor fields must come together")

    params = EpidemicParams(
        beta=_require_number(doc, "beta"),
        gamma=_require_number(doc, "gamma"),
        sigma=_require_number(doc, "sigma", _DEFAULTS["sigma"]),
        zeta=_require_number(doc, "zeta", _DEFAULTS["zeta"]),
        rho=_require_number(doc, "rho", _DEFAULTS["rho"]),
    )
    state = SirState(_require_number(doc, "x0"), _require_number(doc, "y0"))

    kind_s = doc.get("kind", _DEFAULTS["kind"])
    if kind_s not in ("call", "put"):
        raise ParseError(f"field 'kind' must be 'call' or 'put', got {kind_s!r}", field="kind")
    engine = doc.get("engine", _DEFAULTS["engine"])
    if engine not in _ENGINES:
        raise ParseError(f"field 'engine' must be one of {_ENGINES}, got {engine!r}",
                         field="engine")
    fmt = doc.get("format", _DEFAULTS["format"])
    if fmt not in _FORMATS:
        raise ParseError(f"field 'format' must be one of {_FORMATS}, got {fmt!r}",
                         field="format")
    time_unit = doc.get("time_unit")
    if time_unit is not None and not isinstance(time_unit, str):
        raise ParseError("field 'time_unit' must be a string", field="time_unit")

    grid_v = doc.get("grid", list(_DEFAULTS["grid"]))
    if (not isinstance(grid_v, (list, tuple)) or len(grid_v) != 3
            or any(isinstance(g, bool) or not isinstance(g, int) for g in grid_v)):
        raise ParseError("field 'grid' must be an array of three integers [nx, ny, nt]",
                         field="grid")

    strikes = _sweep(doc, "K", "strikes")
    maturities = _sweep(doc, "T", "maturities")

    scenario = Scenario(
        params=params, state=state, kind=OptionKind(kind_s),
        strikes=strikes, maturities=maturities,
        r=_require_number(doc, "r", _DEFAULTS["r"]),
        notional=_require_number(doc, "notional", _DEFAULTS["notional"]),
        engine=engine,
        n_paths=_require_int(doc, "n_paths", _DEFAULTS["n_paths"]),
        n_steps=_require_int(doc, "n_steps", _DEFAULTS["n_steps"]),
        grid=tuple(grid_v), seed=_require_int(doc, "seed", _DEFAULTS["seed"]),
        format=fmt, workers=_require_int(doc, "workers", _DEFAULTS["workers"]),
        time_unit=time_unit,
    )
    _validate(scenario)
    return scenario


def _validate(s: Scenario) -> None:
    """Delegate bound checks to model-core, re-raising as ValidationError."""
    try:
        validate_params(s.params, s.state)
        for strike in s.strikes:
            for maturity in s.maturities:
                validate_terms(s.terms(strike, maturity))
    except OutOfRange as e:
        raise ValidationError(str(e)) from e
    if s.n_paths < 1:
        raise ValidationError(f"n_paths={s.n_paths}: need at least one path")
    if s.n_steps < 1:
        raise ValidationError(f"n_steps={s.n_steps}: need at least one step")
    if s.workers < 1:
        raise ValidationError(f"workers={s.workers}: need at least one worker")
    if s.seed < 0:
        raise ValidationError(f"seed={s.seed}: must be nonnegative")
    if any(g < 1 for g in s.grid):
        raise ValidationError(f"grid={s.grid}: dimensions must be positive")


def scenario_to_dict(s: Scenario) -> dict:
    """Normalized full-precision document; parse(dumps(·)) is the identity."""
    doc = {
        "beta": s.params.beta, "gamma": s.params.gamma, "sigma": s.params.sigma,
        "zeta": s.params.zeta, "rho": s.params.rho,
        "x0": s.state.x, "y0": s.state.y,
        "kind": s.kind.value,
        "strikes": list(s.strikes), "maturities": list(s.maturities),
        "r": s.r, "notional": s.notional, "engine": s.engine,
        "n_paths": s.n_paths, "n_steps": s.n_steps, "grid": list(s.grid),
        "seed": s.seed, "format": s.format, "workers": s.workers,
    }
    if s.time_unit is not None:
        doc["time_unit"] = s.time_unit
    return doc


@dataclass(frozen=True)
class ResultRow:
    strike: float
    maturity: float
    method: str
    price: float
    stderr: float
    n_paths: int
    wall_ms: float


def run_scenario(s: Scenario, *, no_timing: bool = False):
    """Price every (strike, maturity, engine) cell; rows in deterministic order.

    Monte Carlo terminal samples depend on the maturity but not the strike,
    so one simulation per maturity is shared across the strike sweep; its
    cost is charged to the first row that needs it. With no_timing the
    wall_ms column is forced to 0 so repeated runs are byte-identical.

    For engine "ode" the result is not a price table but the integrated path,
    returned as (t, x, y, z) tuples; the CLI routes those to the path CSV.
    """
    if s.engine == "ode":
        path = integrate_sir(s.params, s.state, max(s.maturities), s.n_steps)
        z = path.z
        return [(float(path.times[i]), float(path.x[i]), float(path.y[i]), float(z[i]))
                for i in range(path.times.size)]

    rows = []
    samples = {}
    for maturity in s.maturities:
        for strike in s.strikes:
            terms = s.terms(strike, maturity)
            if s.engine in ("mc", "both"):
                t0 = time.perf_counter()
                if maturity not in samples:
                    plan = plan_for(s.model, maturity, n_paths=s.n_paths,
                                    n_steps=s.n_steps, seed=s.seed)
                    samples[maturity] = simulate_terminal(
                        s.params, s.state, maturity, plan, workers=s.workers)
                est = price_mc(samples[maturity], terms)
                ms = 0.0 if no_timing else (time.perf_counter() - t0) * 1e3
                rows.append(ResultRow(strike, maturity, est.method.value,
                                      est.price, est.stderr, est.n_paths, ms))
            if s.engine in ("pde", "both"):
                t0 = time.perf_counter()
                grid = Grid2D(*s.grid)
                surface = pde_solve(s.params, terms, grid, s.model)
                est = price_pde(surface, s.state, terms)
                ms = 0.0 if no_timing else (time.perf_counter() - t0) * 1e3
                rows.append(ResultRow(strike, maturity, est.method.value,
                                      est.price, est.stderr, est.n_paths, ms))
    rows.sort(key=lambda r: (r.strike, r.maturity, r.method))
    return rows
