"""Command-line front end.

Subcommands: eval, classify, green, fit, convert, admissible, cm-check.
Inputs are JSON model/law/spectrum files and CSV sample files; outputs are
CSV tables and JSON reports, each stamped with the tool version and a hash
of the resolved configuration.  Exit codes: 0 success, 2 input error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .causality import classify
from .dispersion import FrequencyGrid, attenuation, dispersion, local_exponent, phase_speed
from .errors import ViscowaveError
from .fit import (AttenuationSamples, attenuation_to_relaxation, fit_atoms,
                  relaxation_to_attenuation)
from .green import ContourParams, snapshot
from .laws import (MaterialModel, admissibility_check, cm_check, law_from_json)

_INPUT_ERROR = 2
_NUMERIC_ERROR = 3


class InputError(Exception):
    pass


def _config_hash(args: argparse.Namespace) -> str:
    blob = json.dumps({k: repr(v) for k, v in sorted(vars(args).items())
                       if k != "func"}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_model(path: str) -> MaterialModel:
    obj = _load_json(path)
    try:
        if "rho" in obj:
            return MaterialModel.from_json(obj)
        if "type" in obj:  # bare law: wrap with unit density and front speed
            return MaterialModel(rho=1.0, c0=1.0, law=law_from_json(obj))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad model file {path}: {exc}") from exc
    raise InputError(f"{path} is neither a model nor a law description")


def _load_law(path: str):
    obj = _load_json(path)
    try:
        if "type" in obj:
            return law_from_json(obj)
        if "rho" in obj:
            model = MaterialModel.from_json(obj)
            if model.law is None:
                raise ValueError("model file carries no attenuation law")
            return model.law
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad law file {path}: {exc}") from exc
    raise InputError(f"{path} is neither a model nor a law description")


def _meta(args: argparse.Namespace) -> dict:
    return {"tool": "viscowave", "version": __version__,
            "config_hash": _config_hash(args)}


def _write_json(path: str, payload: dict, args: argparse.Namespace) -> None:
    payload = {"meta": _meta(args), **payload}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, allow_nan=True)
        fh.write("\n")


def _csv_header(args: argparse.Namespace) -> list[str]:
    meta = _meta(args)
    return [f"# {meta['tool']} {meta['version']}",
            f"# config {meta['config_hash']}"]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def cmd_eval(args: argparse.Namespace) -> int:
    model = _load_model(args.model)
    if args.omega_log:
        grid = FrequencyGrid.log_spaced(args.omega_min, args.omega_max, args.omega_points)
    else:
        grid = FrequencyGrid.linear(args.omega_min, args.omega_max, args.omega_points)
    law = model.law

    def row(w: float) -> tuple:
        try:
            exponent = local_exponent(law, w)
        except ValueError:
            exponent = math.nan
        return (w, attenuation(law, w), dispersion(law, w),
                phase_speed(model, w), exponent)

    omegas = grid.as_array()
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(row, omegas))
    else:
        rows = [row(w) for w in omegas]

    lines = _csv_header(args)
    lines.append("omega,attenuation,dispersion,phase_speed,variable_exponent")
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")

    if args.figure:
        from .plotting import render_eval_figure
        cols = {name: [r[i] for r in rows] for i, name in enumerate(
            ("omega", "attenuation", "dispersion", "phase_speed", "variable_exponent"))}
        render_eval_figure(omegas, cols, args.figure)
    return 0


# ---------------------------------------------------------------------------
# classify / admissible
# ---------------------------------------------------------------------------

def cmd_classify(args: argparse.Namespace) -> int:
    law = _load_law(args.model)
    verdict = classify(law, omega_max=args.omega_max)
    _write_json(args.out, verdict.to_json(), args)
    return 0


def cmd_admissible(args: argparse.Namespace) -> int:
    law = _load_law(args.model)
    report = admissibility_check(law, tol=args.tol)
    _write_json(args.out, report.to_json(), args)
    return 0


# ---------------------------------------------------------------------------
# green
# ---------------------------------------------------------------------------

def cmd_green(args: argparse.Namespace) -> int:
    model = _load_model(args.model)
    if not (0 < args.x_min < args.x_max):
        raise InputError("need 0 < --x-min < --x-max")
    positions = np.linspace(args.x_min, args.x_max, args.x_points)
    contour = ContourParams(eps=args.contour_eps, omega_max=args.contour_pmax,
                            nodes=args.nodes, tol=args.tol)

    if args.threads > 1:
        from .green import green_1d, green_3d
        point = (lambda x: green_1d(model, args.t, float(x), contour=contour)) \
            if args.dim == 1 else \
            (lambda x: green_3d(model, args.t, float(x), contour=contour))
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            values = list(pool.map(point, positions))
        from .green import GreenSnapshot
        snap = GreenSnapshot(t=args.t, positions=tuple(positions),
                             values=tuple(values), dimension=args.dim,
                             contour=contour.to_json(),
                             front_position=model.c0 * args.t)
    else:
        snap = snapshot(model, args.t, positions, dimension=args.dim,
                        contour=contour)

    lines = _csv_header(args)
    lines.append("x,value")
    lines += [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(snap.positions, snap.values)]
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_json(args.out + ".meta.json", snap.metadata(model), args)

    if args.figure:
        from .plotting import render_snapshot_figure
        render_snapshot_figure(snap.positions, snap.values, snap.front_position,
                               args.figure, title=f"t = {args.t:g}")
    return 0


# ---------------------------------------------------------------------------
# fit / convert
# ---------------------------------------------------------------------------

def _load_samples(path: str) -> AttenuationSamples:
    rows = []
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = [p.strip() for p in line.split(",")]
                if parts[0].lower() in ("omega", "w", "frequency"):
                    continue  # header row
                rows.append([float(p) for p in parts])
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"bad samples file {path}: {exc}") from exc
    if not rows:
        raise InputError(f"samples file {path} is empty")
    if any(len(r) not in (2, 3) for r in rows):
        raise InputError("samples need columns omega,attenuation[,weight]")
    rows.sort(key=lambda r: r[0])
    omegas = tuple(r[0] for r in rows)
    values = tuple(r[1] for r in rows)
    weights = tuple(r[2] for r in rows) if all(len(r) == 3 for r in rows) else None
    try:
        return AttenuationSamples(omegas, values, weights)
    except ValueError as exc:
        raise InputError(f"bad samples: {exc}") from exc


def cmd_fit(args: argparse.Namespace) -> int:
    samples = _load_samples(args.samples)
    r_min = args.r_min if args.r_min is not None else samples.omegas[0] / 10.0
    r_max = args.r_max if args.r_max is not None else samples.omegas[-1] * 10.0
    if not 0 < r_min < r_max:
        raise InputError("need 0 < --r-min < --r-max")
    candidates = np.logspace(math.log10(r_min), math.log10(r_max), args.r_points)
    try:
        spectrum = fit_atoms(samples, candidates)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = {"spectrum": spectrum.to_json()}
    if args.convert:
        result = attenuation_to_relaxation(spectrum.atoms, rho=args.rho, c0=args.c0)
        payload["conversion"] = result.to_json()
    _write_json(args.out, payload, args)

    if args.figure:
        from .plotting import render_fit_figure
        om = np.array(samples.omegas)
        fitted = [sum(c * w**2 / (r**2 + w**2) for r, c in spectrum.atoms)
                  for w in om]
        render_fit_figure(om, samples.values, fitted, spectrum.atoms, args.figure)
    return 0


def cmd_convert(args: argparse.Namespace) -> int:
    obj = _load_json(args.spectrum)
    side = obj.get("side")
    atoms = tuple((a["r"], a["c"]) for a in obj.get("atoms") or ())
    if side == "attenuation":
        if args.c0 is None:
            raise InputError("attenuation -> relaxation conversion needs --c0")
        result = attenuation_to_relaxation(atoms, rho=args.rho, c0=args.c0)
        _write_json(args.out, result.to_json(), args)
    elif side == "relaxation":
        out = relaxation_to_attenuation(atoms, mu0=obj.get("mass_at_zero", 0.0),
                                        rho=args.rho)
        _write_json(args.out, out.to_json(), args)
    else:
        raise InputError("spectrum file needs side: attenuation | relaxation")
    return 0


# ---------------------------------------------------------------------------
# cm-check
# ---------------------------------------------------------------------------

def cmd_cm_check(args: argparse.Namespace) -> int:
    model = _load_model(args.model)
    grid = np.logspace(math.log10(args.t_min), math.log10(args.t_max), args.t_points)
    values: dict[float, float] = {}

    def modulus(t: float) -> float:
        if t not in values:
            values[t] = model.relaxation_modulus(t)
        return values[t]

    result = cm_check(modulus, orders=args.orders, grid=grid)
    _write_json(args.out, result.to_json(), args)

    if args.figure:
        from .plotting import render_relaxation_figure
        ts = np.logspace(math.log10(args.t_min), math.log10(args.t_max), 80)
        gs = [model.relaxation_modulus(t) for t in ts]
        render_relaxation_figure(ts, gs, args.figure)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viscowave",
        description="Evaluate, classify, and invert viscoelastic "
                    "dispersion-attenuation models.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="numeric tolerance (where applicable)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for grid evaluation")

    p = sub.add_parser("eval", help="frequency sweep: attenuation, dispersion, "
                                    "phase speed, growth exponent")
    p.add_argument("--model", required=True)
    p.add_argument("--omega-min", type=float, default=1e-2)
    p.add_argument("--omega-max", type=float, default=1e2)
    p.add_argument("--omega-points", type=int, default=64)
    p.add_argument("--omega-log", action=argparse.BooleanOptionalAction,
                   default=True, help="log-spaced grid (default)")
    p.add_argument("--figure", help="also render a figure to this path")
    add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", help="finite/infinite propagation speed verdict")
    p.add_argument("--model", required=True, help="model or law JSON")
    p.add_argument("--omega-max", type=float, default=1e6)
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("green", help="wave-field snapshot on a position grid")
    p.add_argument("--model", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--x-points", type=int, default=101)
    p.add_argument("--dim", type=int, choices=(1, 3), default=3)
    p.add_argument("--contour-eps", type=float, default=None,
                   help="contour shift (default 1/t)")
    p.add_argument("--contour-pmax", type=float, default=None,
                   help="hard truncation of the contour frequency range")
    p.add_argument("--nodes", type=int, default=24,
                   help="quadrature nodes per contour panel")
    p.add_argument("--figure", help="also render a figure to this path")
    add_common(p)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("fit", help="fit an atomic spectrum to attenuation samples")
    p.add_argument("--samples", required=True, help="CSV: omega,attenuation[,weight]")
    p.add_argument("--r-min", type=float, default=None)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--r-points", type=int, default=32)
    p.add_argument("--convert", action="store_true",
                   help="also convert the fit to a relaxation spectrum")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--c0", type=float, default=1.0)
    p.add_argument("--figure", help="also render a figure to this path")
    add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("convert", help="convert a spectrum between the "
                                       "attenuation and relaxation sides")
    p.add_argument("--spectrum", required=True, help="spectrum JSON")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--c0", type=float, default=None)
    add_common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("admissible", help="sampled admissibility certificate")
    p.add_argument("--model", required=True, help="model or law JSON")
    add_common(p)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("cm-check", help="complete-monotonicity check of the "
                                        "relaxation modulus")
    p.add_argument("--model", required=True)
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--t-points", type=int, default=21)
    p.add_argument("--orders", type=int, default=4)
    p.add_argument("--figure", help="also render a figure to this path")
    add_common(p)
    p.set_defaults(func=cmd_cm_check)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _INPUT_ERROR
    except ViscowaveError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return _NUMERIC_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
