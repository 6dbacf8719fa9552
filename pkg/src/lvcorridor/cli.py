"""Command-line front end: runs the standard experiments and serializes
results as CSV + JSON (optionally SVG).

Subcommands
    simulate   one trajectory: time series, spectral/corridor summary
    map        parameter-plane class raster plus analytic contours
    scaling    convergence-time sweep along a near-critical family
    corridor   corridor intervals and dwell statistics for one trajectory

Every run writes ``<out>_manifest.json`` capturing the resolved flag
values; ``--manifest <path>`` replays a previous run (only ``--out`` may be
overridden) and regenerates byte-identical CSV/JSON payloads. Numeric CSV
fields are written in shortest round-trip form, so parsing them back loses
nothing. Diagnostics go to stderr; data only ever goes to files.

Exit codes: 0 success, 2 usage error, 3 degenerate equilibrium gap,
4 convergence horizon exceeded, 5 solver failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys

import numpy as np

from . import __version__
from .corridor import EPS_MIN, corridor_analysis, equilibrium_gap
from .errors import (
    ConvergenceLostError,
    DegenerateGapError,
    HorizonExceededError,
    IntegrationError,
    NoInteriorEquilibriumError,
)
from .integrator import SolverConfig, convergence_time, dense_eval, integrate
from .model import (
    Params,
    interior_equilibrium,
    interior_spectrum,
    near_critical_family,
)
from .regime_map import MapThresholds, RegimeClass, sweep
from .svg import render_map, render_timeseries

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE_GAP = 3
EXIT_HORIZON = 4
EXIT_SOLVER = 5

_DEFAULT_ETAS = (0.2, 0.1, 0.05, 0.025, 0.0125)
_CONTOUR_IDS = {
    "symmetry": 0,
    "gap_upper": 1,
    "gap_lower": 2,
    "capacity_L": 3,
    "capacity_S": 4,
}
_CLASS_LEGEND = {
    f"class_{int(c)}": c.name.lower() for c in RegimeClass
}


def _warn(msg: str):
    print(f"lvcorridor: {msg}", file=sys.stderr)


def _fmt_number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt_number(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    _warn(f"wrote {path}")


def _write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _warn(f"wrote {path}")


def _write_manifest(out_prefix, subcommand, flags):
    manifest = {
        "artifact": f"lvcorridor {__version__}",
        "subcommand": subcommand,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "flags": flags,
    }
    _write_json(f"{out_prefix}_manifest.json", manifest)


def _load_manifest(path, subcommand):
    with open(path) as fh:
        manifest = json.load(fh)
    found = manifest.get("subcommand")
    if found != subcommand:
        raise ValueError(
            f"manifest {path} records subcommand {found!r}, not {subcommand!r}"
        )
    return manifest["flags"]


def _solver_config(flags) -> SolverConfig:
    return SolverConfig(rel_tol=flags["rel_tol"], abs_tol=flags["abs_tol"],
                        t_max=flags["tmax"])


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def run_simulate(flags, out_prefix):
    p = Params(flags["a12"], flags["a21"], flags["rho"])
    cfg = _solver_config(flags)
    x0 = (flags["l0"], flags["s0"])
    n_samples = flags["n_samples"]
    traj = integrate(p, x0, cfg)

    taus = np.linspace(traj.t0, traj.t_end, n_samples)
    states = dense_eval(traj, taus)

    summary = {
        "a12": p.a12, "a21": p.a21, "rho": p.rho, "eta": p.eta,
        "l0": float(flags["l0"]), "s0": float(flags["s0"]),
        "t_max": cfg.t_max, "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
        "L_star": None, "S_star": None, "gap_epsilon": None,
        "lambda_fast": None, "lambda_slow": None, "slow_estimate": None,
        "timescale_ratio": None,
        "t_conv_delta": float(flags["delta"]), "t_conv": None,
        "degenerate_gap": False,
        "intervals": None, "dwell_total": None, "dwell_fraction": None,
        "L_final": float(traj.ys[-1, 0]), "S_final": float(traj.ys[-1, 1]),
        "n_accepted": traj.n_accepted, "n_rejected": traj.n_rejected,
        "n_fev": traj.n_fev,
    }

    eq = interior_equilibrium(p)
    gammas = None
    if eq is None:
        _warn("no coexistence equilibrium for these coefficients; "
              "gamma column and equilibrium summary fields omitted")
    else:
        spec = interior_spectrum(p)
        gap = equilibrium_gap(p)
        summary.update({
            "L_star": float(eq[0]), "S_star": float(eq[1]),
            "gap_epsilon": gap,
            "lambda_fast": spec.lambda_fast, "lambda_slow": spec.lambda_slow,
            "slow_estimate": spec.slow_estimate,
            "timescale_ratio": spec.timescale_ratio,
        })
        if gap < EPS_MIN:
            summary["degenerate_gap"] = True
            _warn(f"equilibrium gap {gap:.3e} is degenerate (a12 = a21); "
                  f"gamma column and corridor intervals omitted")
        else:
            gammas = np.abs(states[:, 0] - states[:, 1]) / gap
            series = corridor_analysis(p, traj, n_samples)
            summary["intervals"] = [[float(a), float(b)]
                                    for a, b in series.intervals]
            summary["dwell_total"] = series.dwell_total
            summary["dwell_fraction"] = series.dwell_fraction
        try:
            summary["t_conv"] = convergence_time(p, x0, flags["delta"], cfg)
        except HorizonExceededError as exc:
            _warn(f"convergence time unavailable: {exc}")
        except ConvergenceLostError as exc:
            _warn(f"convergence time unreliable: {exc}")

    if gammas is None:
        header = ["tau", "L", "S"]
        rows = zip(taus, states[:, 0], states[:, 1])
    else:
        header = ["tau", "L", "S", "gamma"]
        rows = zip(taus, states[:, 0], states[:, 1], gammas)
    _write_csv(f"{out_prefix}_timeseries.csv", header, rows)
    _write_json(f"{out_prefix}_summary.json", summary)

    if flags["svg"]:
        iv = summary["intervals"] if summary["intervals"] else []
        render_timeseries(
            f"{out_prefix}.svg", taus, states[:, 0], states[:, 1], iv,
            title=f"a12={p.a12:g} a21={p.a21:g} rho={p.rho:g}",
        )
        _warn(f"wrote {out_prefix}.svg")
    return EXIT_OK


# ---------------------------------------------------------------------------
# map
# ---------------------------------------------------------------------------

def run_map(flags, out_prefix):
    th = MapThresholds(eps_balance=flags["eps_balance"],
                       gamma_capacity=flags["gamma_capacity"])
    grid = sweep(flags["n"], th, overlay_points=flags["contour_points"])
    n = grid.resolution

    rows = []
    for i in range(n):
        for j in range(n):
            rows.append((grid.axis[i], grid.axis[j], grid.l_star[i, j],
                         grid.s_star[i, j], grid.eta[i, j],
                         int(grid.classes[i, j])))
    _write_csv(f"{out_prefix}_raster.csv",
               ["a12", "a21", "Lstar", "Sstar", "eta", "class"], rows)

    crows = []
    for name in ("symmetry", "gap_upper", "gap_lower",
                 "capacity_L", "capacity_S"):
        cid = _CONTOUR_IDS[name]
        for a, b in grid.overlays[name]:
            crows.append((cid, a, b))
    _write_csv(f"{out_prefix}_contours.csv", ["curve", "a12", "a21"], crows)

    counts = {
        f"count_{c.name.lower()}": int(np.sum(grid.classes == int(c)))
        for c in RegimeClass
    }
    summary = {
        "n": n, "eps_balance": th.eps_balance,
        "gamma_capacity": th.gamma_capacity,
        "contour_points": int(flags["contour_points"]),
        "contour_ids": dict(_CONTOUR_IDS),
        **_CLASS_LEGEND, **counts,
    }
    _write_json(f"{out_prefix}_summary.json", summary)

    if flags["svg"]:
        render_map(f"{out_prefix}.svg", grid,
                   title=f"eps_balance={th.eps_balance:g} "
                         f"gamma_capacity={th.gamma_capacity:g}")
        _warn(f"wrote {out_prefix}.svg")
    return EXIT_OK


# ---------------------------------------------------------------------------
# scaling
# ---------------------------------------------------------------------------

def run_scaling(flags, out_prefix):
    etas = [float(e) for e in flags["etas"]]
    if any(not 0.0 < e < 1.0 for e in etas):
        raise ValueError(f"all eta values must lie in (0, 1), got {etas}")
    if any(b >= a for a, b in zip(etas, etas[1:])):
        raise ValueError(f"eta values must be strictly decreasing, got {etas}")
    a12_frac = flags["a12_frac"]
    if a12_frac is not None and not 0.0 < a12_frac < 1.0:
        raise ValueError(f"a12-frac must lie in (0, 1), got {a12_frac}")
    delta = float(flags["delta"])
    cfg = _solver_config(flags)
    x0 = (flags["l0"], flags["s0"])

    rows = []
    ok_eta = []
    ok_t = []
    for eta in etas:
        if a12_frac is None:
            p = near_critical_family(eta, rho=flags["rho"])
        else:
            p = near_critical_family(eta, (1.0 - eta) + a12_frac * eta,
                                     rho=flags["rho"])
        spec = interior_spectrum(p)
        eq = interior_equilibrium(p)
        d0 = max(abs(x0[0] - eq[0]), abs(x0[1] - eq[1]))
        predicted = 0.0
        if d0 > delta:
            predicted = math.log(d0 / delta) / abs(spec.lambda_slow)
        try:
            t_conv = convergence_time(p, x0, delta, cfg)
            failed = 0
        except (HorizonExceededError, ConvergenceLostError) as exc:
            _warn(f"eta={eta}: {exc}")
            t_conv = float("nan")
            failed = 1
        rows.append((eta, p.a12, p.a21, spec.lambda_slow, spec.slow_estimate,
                     predicted, t_conv, failed))
        if not failed:
            ok_eta.append(eta)
            ok_t.append(t_conv)

    _write_csv(f"{out_prefix}_scaling.csv",
               ["eta", "a12", "a21", "lambda_slow", "slow_estimate",
                "predicted_t_conv", "t_conv", "failed"], rows)

    fit = {
        "delta": delta, "rho": float(flags["rho"]),
        "l0": float(flags["l0"]), "s0": float(flags["s0"]),
        "t_max": cfg.t_max,
        "family": "symmetric" if a12_frac is None else f"a12_frac={a12_frac}",
        "etas": etas, "n_requested": len(etas), "n_ok": len(ok_eta),
    }
    if len(ok_eta) >= 2:
        coef = np.polyfit(np.log(ok_eta), np.log(ok_t), 1)
        resid = np.log(ok_t) - np.polyval(coef, np.log(ok_eta))
        fit["slope"] = float(coef[0])
        fit["intercept"] = float(coef[1])
        fit["rms_residual"] = float(np.sqrt(np.mean(resid ** 2)))
    _write_json(f"{out_prefix}_fit.json", fit)

    if len(etas) >= 3 and len(ok_eta) < 3:
        _warn(f"only {len(ok_eta)} of {len(etas)} sweep points converged "
              f"within the horizon; slope is unreliable")
        return EXIT_HORIZON
    return EXIT_OK


# ---------------------------------------------------------------------------
# corridor
# ---------------------------------------------------------------------------

def run_corridor(flags, out_prefix):
    p = Params(flags["a12"], flags["a21"], flags["rho"])
    cfg = _solver_config(flags)
    traj = integrate(p, (flags["l0"], flags["s0"]), cfg)
    series = corridor_analysis(p, traj, flags["n_samples"])

    rows = [(a, b, b - a) for a, b in series.intervals]
    _write_csv(f"{out_prefix}_intervals.csv", ["entry", "exit", "length"], rows)
    _write_json(f"{out_prefix}_dwell.json", {
        "a12": p.a12, "a21": p.a21, "rho": p.rho, "eta": p.eta,
        "l0": float(flags["l0"]), "s0": float(flags["s0"]),
        "gap_epsilon": series.gap_epsilon,
        "horizon": series.horizon,
        "n_samples": int(flags["n_samples"]),
        "n_intervals": int(len(series.intervals)),
        "dwell_total": series.dwell_total,
        "dwell_fraction": series.dwell_fraction,
    })
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_solver_flags(sp):
    sp.add_argument("--tmax", type=float, default=200.0,
                    help="integration horizon (default 200)")
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-6,
                    help="relative tolerance (default 1e-6)")
    sp.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-8,
                    help="absolute tolerance (default 1e-8)")


# flags without a default must be present unless a manifest supplies them
_REQUIRED = ("a12", "a21", "l0", "s0")


def _add_system_flags(sp):
    sp.add_argument("--a12", type=float, default=None,
                    help="inhibition of L by S (required)")
    sp.add_argument("--a21", type=float, default=None,
                    help="inhibition of S by L (required)")
    sp.add_argument("--rho", type=float, default=1.0,
                    help="relative adjustment rate of S (default 1)")
    sp.add_argument("--l0", type=float, default=None,
                    help="initial L (required)")
    sp.add_argument("--s0", type=float, default=None,
                    help="initial S (required)")


def _add_common_flags(sp, default_out):
    sp.add_argument("--out", default=default_out,
                    help=f"output path prefix (default {default_out!r})")
    sp.add_argument("--manifest", default=None,
                    help="replay flags from a previous run's manifest")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lvcorridor",
        description="Numerical laboratory for near-critical two-species "
                    "competition dynamics.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("simulate", help="integrate one trajectory")
    _add_system_flags(sp)
    _add_solver_flags(sp)
    sp.add_argument("--delta", type=float, default=1e-3,
                    help="convergence ball radius for t_conv (default 1e-3)")
    sp.add_argument("--n-samples", dest="n_samples", type=int, default=20001,
                    help="uniform output samples (default 20001)")
    sp.add_argument("--svg", action="store_true", help="also render an SVG")
    _add_common_flags(sp, "simulate")

    sp = sub.add_parser("map", help="classify the parameter plane")
    sp.add_argument("--n", type=int, default=512,
                    help="grid resolution per axis (default 512)")
    sp.add_argument("--eps-balance", dest="eps_balance", type=float,
                    default=0.1, help="balanced-band gap threshold (default 0.1)")
    sp.add_argument("--gamma-capacity", dest="gamma_capacity", type=float,
                    default=0.6,
                    help="capacity threshold splitting the balanced band "
                         "(default 0.6)")
    sp.add_argument("--contour-points", dest="contour_points", type=int,
                    default=1025, help="samples per overlay curve (default 1025)")
    sp.add_argument("--rho", type=float, default=1.0,
                    help="accepted for interface uniformity; equilibria and "
                         "hence the map do not depend on it")
    sp.add_argument("--svg", action="store_true", help="also render an SVG")
    _add_common_flags(sp, "map")

    sp = sub.add_parser("scaling", help="convergence-time sweep in eta")
    sp.add_argument("--eta", dest="etas", type=float, nargs="+",
                    default=list(_DEFAULT_ETAS),
                    help="strictly decreasing eta values (default "
                         "0.2 0.1 0.05 0.025 0.0125)")
    sp.add_argument("--a12-frac", dest="a12_frac", type=float, default=None,
                    help="position of a12 within (1-eta, 1); omit for the "
                         "symmetric family sqrt(1-eta)")
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--delta", type=float, default=1e-3,
                    help="convergence ball radius (default 1e-3)")
    sp.add_argument("--l0", type=float, default=0.3,
                    help="initial L (default 0.3)")
    sp.add_argument("--s0", type=float, default=0.6,
                    help="initial S (default 0.6)")
    _add_solver_flags(sp)
    sp.set_defaults(tmax=4000.0)
    _add_common_flags(sp, "scaling")

    sp = sub.add_parser("corridor", help="corridor intervals and dwell")
    _add_system_flags(sp)
    _add_solver_flags(sp)
    sp.add_argument("--n-samples", dest="n_samples", type=int, default=20001,
                    help="uniform indicator samples (default 20001)")
    _add_common_flags(sp, "corridor")

    return parser


_FLAG_NAMES = {
    "simulate": ("a12", "a21", "rho", "l0", "s0", "tmax", "rel_tol",
                 "abs_tol", "delta", "n_samples", "svg"),
    "map": ("n", "eps_balance", "gamma_capacity", "contour_points", "svg"),
    "scaling": ("etas", "a12_frac", "rho", "delta", "l0", "s0", "tmax",
                "rel_tol", "abs_tol"),
    "corridor": ("a12", "a21", "rho", "l0", "s0", "tmax", "rel_tol",
                 "abs_tol", "n_samples"),
}

_RUNNERS = {
    "simulate": run_simulate,
    "map": run_map,
    "scaling": run_scaling,
    "corridor": run_corridor,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args.subcommand

    try:
        if args.manifest is not None:
            flags = _load_manifest(args.manifest, sub)
            missing = [k for k in _FLAG_NAMES[sub] if k not in flags]
            if missing:
                raise ValueError(
                    f"manifest {args.manifest} lacks flags {missing}"
                )
        else:
            flags = {k: getattr(args, k) for k in _FLAG_NAMES[sub]}
            missing = [k for k in _REQUIRED
                       if k in flags and flags[k] is None]
            if missing:
                flagnames = ", ".join(f"--{k}" for k in missing)
                raise ValueError(f"{flagnames} required (or use --manifest)")
        code = _RUNNERS[sub](flags, args.out)
        _write_manifest(args.out, sub, flags)
        return code
    except DegenerateGapError as exc:
        _warn(f"error: {exc}")
        return EXIT_DEGENERATE_GAP
    except (HorizonExceededError, ConvergenceLostError) as exc:
        _warn(f"error: {exc}")
        return EXIT_HORIZON
    except IntegrationError as exc:
        _warn(f"error: {exc}")
        return EXIT_SOLVER
    except (ValueError, NoInteriorEquilibriumError, OSError) as exc:
        _warn(f"error: {exc}")
        return EXIT_USAGE
