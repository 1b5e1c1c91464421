"""Command-line front end.

Subcommands ``solve``, ``expand``, ``simulate``, ``growth`` and ``table``
each emit one JSON object (or a CSV table with a header row).  Floats are
written with 17 significant digits; infinities and NaNs as the strings
``"inf"``, ``"-inf"`` and ``"nan"``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import asymptotics
from .errors import ShadowPriceError
from .growth import growth_rate_closed, growth_report
from .model import MarketParams, validate_params
from .simulate import PathConfig, simulate_paths
from .solver import admissibility_margin, solve

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2
SWEEP_AXES = ("lambda", "theta")


# --- serialisation ------------------------------------------------------------

def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        s = format_float(obj)
        return s if math.isfinite(obj) else json.dumps(s)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(obj) -> str:
    """JSON text with every float at 17 significant digits."""
    return _json(obj) + "\n"


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for row in rows:
        w.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


# --- argument handling --------------------------------------------------------

def _sweep(text: str):
    parts = text.split(":")
    if len(parts) not in (4, 5) or parts[0] not in SWEEP_AXES:
        raise argparse.ArgumentTypeError("expected AXIS:START:STOP:POINTS[:log] with AXIS lambda or theta")
    if len(parts) == 5 and parts[4] != "log":
        raise argparse.ArgumentTypeError("the optional fifth field must be 'log'")
    try:
        start, stop, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if n < 1:
        raise argparse.ArgumentTypeError("POINTS must be at least 1")
    if len(parts) == 5:
        if not (start > 0 and stop > 0):
            raise argparse.ArgumentTypeError("log sweeps need positive endpoints")
        grid = np.geomspace(start, stop, n)
    else:
        grid = np.linspace(start, stop, n)
    return parts[0], [float(v) for v in grid]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=float, help="stock drift")
    common.add_argument("--sigma", type=float, help="stock volatility (default 1 with --theta)")
    common.add_argument("--theta", type=float, help="Merton ratio mu/sigma^2; sets mu = theta sigma^2")
    common.add_argument("--lambda", dest="lam", type=float, help="proportional cost, in (0, 1)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the document here instead of stdout")

    p = argparse.ArgumentParser(prog="shadowprice",
                                description="Log-optimal trading under proportional costs.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve for c and s_bar")
    e = sub.add_parser("expand", parents=[common], help="coefficient tables in powers of lambda^(1/3)")
    e.add_argument("--order", type=int, default=asymptotics.DEFAULT_ORDER)
    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo of the shadow-price policy")
    s.add_argument("--T", type=float, default=100.0)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--paths", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--substeps", type=int, default=1,
                   help="draw the Brownian driver on a grid this many times finer than dt")
    s.add_argument("--paths-csv", metavar="DIR", help="write one CSV per simulated path into DIR")
    sub.add_parser("growth", parents=[common], help="closed-form and quadrature growth rates")
    t = sub.add_parser("table", parents=[common], help="sweep lambda or theta")
    t.add_argument("--sweep", type=_sweep, required=True,
                   metavar="AXIS:START:STOP:POINTS[:log]")
    t.add_argument("--order", type=int, default=3,
                   help="truncation order of the asymptotic columns")
    return p


def _resolve(p: argparse.ArgumentParser, a: argparse.Namespace, *, need_lam: bool = True,
             theta: float | None = None, lam: float | None = None) -> MarketParams:
    """MarketParams from --mu/--sigma or --theta[/--sigma], with optional overrides."""
    if a.theta is not None and a.mu is not None:
        p.error("--theta cannot be combined with --mu")
    sigma = 1.0 if a.sigma is None else a.sigma
    if theta is None:
        theta = a.theta
    if theta is not None:
        mu = theta * sigma * sigma
    elif a.mu is not None:
        if a.sigma is None:
            p.error("--mu requires --sigma")
        mu = a.mu
    else:
        p.error("one of --mu/--sigma or --theta is required")
    lam = a.lam if lam is None else lam
    if lam is None:
        if need_lam:
            p.error("--lambda is required")
        lam = 0.5                                 # placeholder, only theta and sigma are used
    return validate_params(mu, sigma, lam)


# --- commands -----------------------------------------------------------------

def _solve_record(params: MarketParams) -> dict:
    sol = solve(params)
    return {
        "theta": params.theta, "lambda": params.lam,
        "c": sol.c, "s_bar": sol.s_bar,
        "pi_lo": sol.pi_lo, "pi_hi": sol.pi_hi,
        "shadow_pi_lo": sol.shadow_pi_lo, "shadow_pi_hi": sol.shadow_pi_hi,
        "symmetry_residual": sol.symmetry_residual,
        "admissibility_margin": admissibility_margin(sol),
    }


def cmd_solve(params: MarketParams) -> list[dict]:
    return [_solve_record(params)]


def cmd_growth(params: MarketParams) -> list[dict]:
    rep = growth_report(solve(params))
    return [{"theta": params.theta, "lambda": params.lam, "sigma": params.sigma,
             "delta_closed": rep.delta_closed, "delta_quadrature": rep.delta_quadrature,
             "delta_frictionless": rep.delta_frictionless,
             "relative_gap": rep.relative_gap,
             "stationary_normalizer": rep.stationary_normalizer}]


def cmd_expand(params: MarketParams, order: int) -> list[dict]:
    theta, sigma = params.theta, params.sigma
    cols = {
        "c": asymptotics.expand_c(theta, order),
        "s_bar": asymptotics.expand_s_bar(theta, order),
    }
    b = asymptotics.expand_boundaries(theta, order)
    cols.update(pi_lo=b.lo, pi_hi=b.hi, width=b.width)
    cols["growth"] = asymptotics.expand_growth(theta, sigma, order)
    m = asymptotics.expand_midprice(theta, order)
    cols.update(mid_lo=m.lo, mid_hi=m.hi, mid_width=m.width)
    me = asymptotics.expand_midprice(theta, order, exact_scaling=True)
    cols.update(mid_exact_lo=me.lo, mid_exact_hi=me.hi, mid_exact_width=me.width)
    return [{"power": f"{k}/3", **{name: float(s.coeffs[k]) for name, s in cols.items()}}
            for k in range(order + 1)]


def _expand_document(params: MarketParams, rows: list[dict]) -> dict:
    names = [k for k in rows[0] if k != "power"]
    return {"theta": params.theta, "sigma": params.sigma, "order": len(rows) - 1,
            "powers": [r["power"] for r in rows],
            **{n: [r[n] for r in rows] for n in names}}


def cmd_simulate(params: MarketParams, a: argparse.Namespace) -> dict:
    cfg = PathConfig(T=a.T, dt=a.dt, n_paths=a.paths, seed=a.seed, substeps=a.substeps,
                     record_full_paths=a.paths_csv is not None)
    sol = solve(params)
    summ = simulate_paths(params, sol, cfg)
    if a.paths_csv is not None:
        os.makedirs(a.paths_csv, exist_ok=True)
        for i, rec in enumerate(summ.paths):
            rec.write_csv(os.path.join(a.paths_csv, f"path_{i:05d}.csv"))
    doc = {"theta": params.theta, "lambda": params.lam, "mu": params.mu, "sigma": params.sigma,
           **summ.to_dict(), "substeps": cfg.substeps,
           "delta_closed": growth_rate_closed(sol, params.sigma)}
    return doc


def cmd_table(p: argparse.ArgumentParser, a: argparse.Namespace) -> list[dict]:
    axis, grid = a.sweep
    rows = []
    for v in grid:
        if axis == "lambda":
            params = _resolve(p, a, lam=v)
        else:
            if a.mu is not None:
                p.error("a theta sweep takes --sigma, not --mu")
            params = _resolve(p, a, theta=v)
        sol = solve(params)
        row = _solve_record(params)
        row["width"] = sol.pi_hi - sol.pi_lo
        row["delta"] = growth_rate_closed(sol, params.sigma)
        row["delta_frictionless"] = params.frictionless_growth
        if sol.degenerate:
            row["width_asymptotic"] = row["delta_asymptotic"] = math.nan
        else:
            b = asymptotics.expand_boundaries(params.theta, a.order)
            row["width_asymptotic"] = asymptotics.evaluate(b.width, params.lam)
            row["delta_asymptotic"] = asymptotics.evaluate(
                asymptotics.expand_growth(params.theta, params.sigma, a.order), params.lam)
        rows.append(row)
    return rows


def run(argv: Sequence[str] | None = None) -> tuple[str, str | None]:
    """Parse ``argv``; return the rendered document and the ``--out`` path."""
    p = build_parser()
    a = p.parse_args(argv)
    return _render(p, a), a.out


def _render(p: argparse.ArgumentParser, a: argparse.Namespace) -> str:
    if a.command == "solve":
        rows = cmd_solve(_resolve(p, a))
    elif a.command == "growth":
        rows = cmd_growth(_resolve(p, a))
    elif a.command == "expand":
        params = _resolve(p, a, need_lam=False)
        rows = cmd_expand(params, a.order)
        if a.format == "json":
            return to_json(_expand_document(params, rows))
    elif a.command == "simulate":
        doc = cmd_simulate(_resolve(p, a), a)
        if a.format == "json":
            return to_json(doc)
        rows = [{k: v for k, v in doc.items() if not isinstance(v, list)}]
    else:
        rows = cmd_table(p, a)
        if a.format == "json":
            return to_json({"sweep": a.sweep[0], "rows": rows})
    if a.format == "csv":
        return to_csv(rows)
    return to_json(rows[0])


def main(argv: Sequence[str] | None = None) -> int:
    try:
        text, out = run(argv)
    except SystemExit as exc:                    # argparse: usage errors and --help
        return int(exc.code or 0)
    except ShadowPriceError as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_ERROR
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
