"""Batch CLI: scenario file in, CSV/JSON out.

    epiopt price        --scenario job.json [--seed N] [--paths N] [...]
    epiopt ode          --scenario job.json            # deterministic path
    epiopt surface      --scenario job.json            # PDE surface dump
    epiopt print-config --scenario job.json            # normalized echo

Exit codes: 0 success; 2 parse or validation failure; 3 a numerical guard
tripped (step count, grid, stability, degenerate start, domain, empty
sample). All numbers are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import sys

from .errors import (DegenerateStart, EmptySample, GridTooCoarse, OutOfDomain,
                     OutOfRange, ParseError, StepCountTooSmall,
                     UnstableConfiguration, ValidationError)
from .pde import Grid2D, pde_solve, write_surface_csv
from .scenario import Scenario, parse_scenario, run_scenario, scenario_to_dict

_USAGE_ERRORS = (ParseError, ValidationError, OutOfRange)
_GUARD_ERRORS = (StepCountTooSmall, GridTooCoarse, UnstableConfiguration,
                 DegenerateStart, OutOfDomain, EmptySample)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _grid_arg(text: str):
    parts = text.split(",")
    try:
        nx, ny, nt = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected nx,ny,nt integers, got {text!r}")
    return (nx, ny, nt)


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epiopt",
        description="Price options on the infected fraction of an SIR epidemic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "price": "price the scenario's strikes/maturities by MC, PDE or both",
        "ode": "integrate the deterministic SIR path and dump t,x,y,z",
        "surface": "solve the PDE and dump the value surface as tau,x,y,value",
        "print-config": "echo the fully-defaulted scenario as normalized JSON",
    }
    for name in ("price", "ode", "surface", "print-config"):
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--scenario", required=True, metavar="PATH",
                        help="scenario JSON file (or inline JSON text)")
        sp.add_argument("--seed", type=_nonneg_int, help="override the RNG seed")
        sp.add_argument("--paths", type=_positive_int, help="override n_paths")
        sp.add_argument("--grid", type=_grid_arg, metavar="NX,NY,NT",
                        help="override the PDE grid")
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        sp.add_argument("--format", choices=["csv", "json"], dest="fmt",
                        help="override the scenario's output format")
        sp.add_argument("--workers", type=_positive_int,
                        help="override the MC worker count")
        sp.add_argument("--no-timing", action="store_true",
                        help="report wall_ms as 0 for byte-stable output")
    return parser


def _apply_overrides(s: Scenario, args) -> Scenario:
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.paths is not None:
        changes["n_paths"] = args.paths
    if args.grid is not None:
        changes["grid"] = args.grid
    if args.fmt is not None:
        changes["format"] = args.fmt
    if args.workers is not None:
        changes["workers"] = args.workers
    return dataclasses.replace(s, **changes) if changes else s


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _price_text(rows, fmt: str) -> str:
    if fmt == "csv":
        lines = ["strike,maturity,method,price,stderr,n_paths,wall_ms"]
        for r in rows:
            lines.append(
                f"{_fmt(r.strike)},{_fmt(r.maturity)},{r.method},"
                f"{_fmt(r.price)},{_fmt(r.stderr)},{r.n_paths},{_fmt(r.wall_ms)}"
            )
        return "\n".join(lines) + "\n"
    payload = [
        {"strike": float(_fmt(r.strike)), "maturity": float(_fmt(r.maturity)),
         "method": r.method, "price": float(_fmt(r.price)),
         "stderr": float(_fmt(r.stderr)), "n_paths": r.n_paths,
         "wall_ms": float(_fmt(r.wall_ms))}
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def _path_text(rows, fmt: str) -> str:
    if fmt == "csv":
        lines = ["t,x,y,z"]
        for t, x, y, z in rows:
            lines.append(f"{_fmt(t)},{_fmt(x)},{_fmt(y)},{_fmt(z)}")
        return "\n".join(lines) + "\n"
    payload = [
        {"t": float(_fmt(t)), "x": float(_fmt(x)), "y": float(_fmt(y)),
         "z": float(_fmt(z))}
        for t, x, y, z in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def _dispatch(args) -> int:
    s = _apply_overrides(parse_scenario(args.scenario), args)

    if args.command == "print-config":
        _emit(json.dumps(scenario_to_dict(s), indent=2) + "\n", args.out)
        return 0

    if args.command == "ode":
        if s.engine != "ode":
            s = dataclasses.replace(s, engine="ode")
        rows = run_scenario(s, no_timing=args.no_timing)
        _emit(_path_text(rows, s.format), args.out)
        return 0

    if args.command == "surface":
        if s.format != "csv":
            raise ParseError("the surface dump is CSV only")
        # one surface per dump: the lowest strike and earliest maturity
        terms = s.terms(s.strikes[0], s.maturities[0])
        surface = pde_solve(s.params, terms, Grid2D(*s.grid), s.model)
        buf = io.StringIO()
        write_surface_csv(surface, buf)
        _emit(buf.getvalue(), args.out)
        return 0

    # price
    if s.engine == "ode":
        raise ValidationError("scenario engine is 'ode'; use the ode subcommand")
    rows = run_scenario(s, no_timing=args.no_timing)
    _emit(_price_text(rows, s.format), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _dispatch(args)
    except _USAGE_ERRORS as e:
        print(f"epiopt: error: {e}", file=sys.stderr)
        return 2
    except _GUARD_ERRORS as e:
        print(f"epiopt: numerical guard: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
