"""Command-line front end.

Exit codes: 0 success, 1 failed validation, 2 usage error, 3 physically
forbidden configuration, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from pairgate import exponent as expo
from pairgate import maxprob, oracle, planewave
from pairgate.errors import PairgateError
from pairgate.fields import (
    FieldConfig,
    PhotonState,
    boost_z,
    classify_regime,
    rapidity_from_velocity,
    assemble_solution,
    solve_tunneling,
)

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FORBIDDEN, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _clean(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(command, rows, fmt, units="critical", extra=None) -> str:
    if fmt == "json":
        doc = {"schema": SCHEMA, "command": command, "units": units}
        doc.update(extra or {})
        doc["rows"] = [{k: _clean(v) for k, v in r.items()} for r in rows]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema: {SCHEMA}\n")
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for k, v in r.items()})
    return buf.getvalue()


def read_table(path):
    """Inverse of :func:`render` for either format; returns a list of dicts."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)["rows"]
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _emit(args, rows, extra=None):
    text = render(args.command, rows, args.format, args.units, extra)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _parse_grid(spec: str) -> list[float]:
    """``a,b,c`` or ``start:stop:num``."""
    try:
        if ":" in spec:
            a, b, n = spec.split(":")
            return np.linspace(float(a), float(b), int(n)).tolist()
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}") from exc


def _config(args) -> FieldConfig:
    try:
        return FieldConfig(args.E, args.B, args.charge, args.mass)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _photon(args, config) -> PhotonState:
    if args.k0 < 0:
        raise UsageError("k0 must be >= 0")
    sign = None if args.kz_sign == "auto" else int(args.kz_sign)
    return maxprob.make_photon(config, args.k0, sign)


def _solution(args, config, photon):
    if args.pz is None:
        if args.py:
            raise UsageError("--py needs --pz")
        if classify_regime(config) is expo.Regime.LIGHT_LIKE and photon.k0 == 0:
            raise PairgateError("forbidden: infinite suppression", "|E| = |B| needs an assisting photon")
        res = maxprob.most_probable_exit(config, photon)
        if not res.feasible:
            raise PairgateError("kinematically forbidden", "no most probable exit exists")
        return res.solution
    return solve_tunneling(config, photon, args.py, args.pz)


def cmd_exponent(args) -> int:
    config = _config(args)
    photon = _photon(args, config)
    sol = _solution(args, config, photon)
    res = expo.probability_exponent(sol, config)
    row = {
        "E": config.E,
        "B": config.B,
        "k0": photon.k0,
        "kz_sign": photon.kz_sign,
        "regime": res.regime.value,
        "p_y": sol.electron_exit.p_y,
        "p_z_electron": sol.electron_exit.p_z,
        "p_z_positron": sol.positron_exit.p_z,
        "x_exit_electron": sol.electron_exit.x_exit,
        "x_exit_positron": sol.positron_exit.x_exit,
        "im_w_minus": res.w_minus_im,
        "im_w_plus": res.w_plus_im,
        "gamma_minus": res.gamma_minus,
        "gamma_plus": res.gamma_plus,
        "probability_exponent": res.probability_exponent,
    }
    _emit(args, [row])
    return EXIT_OK


def cmd_picture(args) -> int:
    config = _config(args)
    photon = _photon(args, config)
    sol = _solution(args, config, photon)
    if args.boost:
        config, photon, (e, p) = boost_z(config, photon, (sol.electron_exit, sol.positron_exit), rapidity_from_velocity(args.boost))
        sol = assemble_solution(config, photon, e, p, branch=sol.branch)
    if args.n_samples < 2:
        raise UsageError("--n-samples must be >= 2")
    pic = oracle.emit_picture(sol, config, args.n_samples)
    extra = {
        "E": config.E,
        "B": config.B,
        "k0": photon.k0,
        "x_exit_electron": sol.electron_exit.x_exit,
        "x_exit_positron": sol.positron_exit.x_exit,
        "probability_exponent": 2 * (sol.w_minus.imag + sol.w_plus.imag),
    }
    rows = pic.rows()
    if args.format == "csv":
        # CSV has no header block; repeat the exits on every row instead
        rows = [dict(r, x_exit_electron=extra["x_exit_electron"], x_exit_positron=extra["x_exit_positron"]) for r in rows]
        extra = None
    _emit(args, rows, extra)
    return EXIT_OK


def _maxprob_row(E_fixed, res: maxprob.MaxProbResult, kz_sign):
    return {
        "E": E_fixed,
        "beta": res.beta,
        "k0": res.k0,
        "kz_sign": kz_sign,
        "p_z": res.p_z_exit,
        "exponent": res.exponent,
        "feasible": res.feasible,
    }


def cmd_maxprob(args) -> int:
    if not args.E > 0:
        raise UsageError("maxprob needs --E > 0")
    rows = []
    for b in _parse_grid(args.beta):
        config = FieldConfig(args.E, b * args.E, args.charge, args.mass)
        photon = _photon(args, config)
        res = maxprob.most_probable_exit(config, photon)
        rows.append(_maxprob_row(args.E, res, photon.kz_sign))
    _emit(args, rows)
    return EXIT_OK


def cmd_optimal_beta(args) -> int:
    if not args.E > 0:
        raise UsageError("optimal-beta needs --E > 0")
    rows = []
    for k in _parse_grid(args.k0_grid):
        b, s = maxprob.optimal_beta(args.E, k, e_charge=args.charge, mass=args.mass)
        rows.append(
            {
                "k0": k,
                "beta_opt": b,
                "exponent": s,
                "plane_wave_exponent": maxprob.plane_wave_reference(args.E, k, args.charge, args.mass),
            }
        )
    _emit(args, rows)
    return EXIT_OK


def cmd_critical_k(args) -> int:
    if not args.E > 0:
        raise UsageError("critical-k needs --E > 0")
    k = maxprob.critical_photon_momentum(args.E, args.charge, args.mass, tol=args.bisect_tol)
    _emit(args, [{"E": args.E, "k0_star": k, "k0_star_over_m": k / args.mass}])
    return EXIT_OK


def cmd_planewave(args) -> int:
    if not args.E > 0:
        raise UsageError("planewave needs --E > 0")
    if not args.k0 > 0:
        raise UsageError("planewave needs a photon, --k0 > 0")
    ms = math.hypot(args.mass, args.py)
    omega = args.omega if args.omega else args.charge * args.E / (ms * args.xi)
    try:
        setup = planewave.PlaneWaveSetup.build(
            args.E,
            omega,
            args.k0,
            planewave.SHAPES[args.shape],
            P_x=args.px,
            p_y=args.py,
            lambda_fraction=args.lambda_fraction,
            e_charge=args.charge,
            mass=args.mass,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    pert = planewave.sigma_w_perturbative(setup)
    cont = planewave.sigma_w_contour(setup)
    config, photon, e, p = planewave.constant_field_equivalent(setup)
    const = expo.probability_exponent(assemble_solution(config, photon, e, p), config)
    row = {
        "shape": args.shape,
        "E": args.E,
        "omega_L": omega,
        "xi": setup.xi,
        "k0": args.k0,
        "im_sigma_w_perturbative": pert.imag,
        "im_sigma_w_contour": cont.imag,
        "relative_deviation": abs(cont - pert) / abs(cont),
        "im_sigma_w_constant_field": const.total_im,
        "constant_field_deviation": abs(cont.imag - const.total_im),
        "probability_exponent": 2 * cont.imag,
    }
    _emit(args, [row])
    return EXIT_OK


def validation_grid():
    """Parameter tuples ``(E, B, k0, p_z)`` spanning all three regimes."""
    grid = []
    for E, B in ((0.05, 0.0), (0.05, 0.02), (0.05, 0.04), (-0.04, 0.01), (0.08, -0.05)):
        for k0 in (0.0, 0.3, 1.0):
            for pz in (-0.4, 0.0, 0.25, 0.7):
                grid.append((E, B, k0, pz))
    for E in (0.05, 0.1):
        for k0 in (0.01, 0.5, 1.5):
            for pz in (-0.3, 0.0, 0.5):
                grid.append((E, E, k0, pz))
    for E, B in ((0.0, 0.05), (0.01, 0.05), (0.03, 0.06), (-0.02, 0.04)):
        for k0 in (2.0, 2.5, 4.0):
            for pz in (-0.5, 0.0, 0.6, 1.2):
                grid.append((E, B, k0, pz))
    return grid


def run_validation(rel_tol=1e-6, abs_tol=None):
    """Closed form vs quadrature on :func:`validation_grid`; one dict per point."""
    out = []
    for E, B, k0, pz in validation_grid():
        config = FieldConfig(E, B)
        photon = maxprob.make_photon(config, k0)
        row = dict(E=E, B=B, k0=k0, p_z=pz, regime=None, closed_form=None, quadrature=None, rel_error=None, status=None, reason=None)
        try:
            sol = solve_tunneling(config, photon, 0.0, pz)
        except PairgateError as exc:
            row.update(status="skipped", reason=exc.reason)
            out.append(row)
            continue
        res = expo.probability_exponent(sol, config)
        wm, wp = oracle.integrate_w(sol, config, abs_tol)
        closed = res.total_im
        quad_total = wm + wp
        err = abs(closed - quad_total) / max(abs(quad_total), 1e-300)
        row.update(
            regime=res.regime.value,
            closed_form=closed,
            quadrature=quad_total,
            rel_error=err,
            status="pass" if err <= rel_tol else "fail",
        )
        out.append(row)
    return out


def cmd_validate(args) -> int:
    rows = run_validation(args.rel_tol, args.tol)
    checked = [r for r in rows if r["status"] != "skipped"]
    failed = [r for r in checked if r["status"] == "fail"]
    regimes = sorted({r["regime"] for r in checked})
    _emit(args, rows, {"checked": len(checked), "failed": len(failed), "regimes": regimes})
    for r in rows:
        if r["status"] != "skipped":
            print(f"{r['status'].upper():4s} E={r['E']:+.3g} B={r['B']:+.3g} k0={r['k0']:.3g} pz={r['p_z']:+.3g} rel={r['rel_error']:.2e}", file=sys.stderr)
    print(f"{len(checked) - len(failed)}/{len(checked)} passed across {', '.join(regimes)}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _add_physics(p, photon=True, exits=True):
    p.add_argument("--E", type=float, default=0.05, help="electric field along x [m^2/e]")
    p.add_argument("--B", type=float, default=0.0, help="magnetic field along y [m^2/e]")
    if photon:
        p.add_argument("--k0", type=float, default=0.0, help="photon energy [m]")
        p.add_argument("--kz-sign", choices=("auto", "-1", "1"), default="auto", help="photon direction; auto picks the assisting one")
    if exits:
        p.add_argument("--pz", type=float, default=None, help="electron exit p_z; default: most probable exit")
        p.add_argument("--py", type=float, default=0.0, help="electron exit p_y")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option defaults")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--units", default="critical", help="label for field units; arithmetic is unchanged")
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--charge", type=float, default=1.0)
    common.add_argument("--tol", type=float, default=None, help="quadrature abs tolerance (env PAIRGATE_TOL)")

    parser = argparse.ArgumentParser(prog="pairgate", description="Semiclassical pair creation exponents in crossed fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponent", parents=[common], help="exponent for one configuration")
    _add_physics(p)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("picture", parents=[common], help="tunneling picture curves")
    _add_physics(p)
    p.add_argument("--boost", type=float, default=0.0, help="boost velocity v/c along z")
    p.add_argument("--n-samples", type=int, default=201)
    p.set_defaults(func=cmd_picture)

    p = sub.add_parser("maxprob", parents=[common], help="most probable exits vs beta = B/E")
    p.add_argument("--E", type=float, default=0.05)
    p.add_argument("--beta", default="0", help="grid: a,b,c or start:stop:num")
    p.add_argument("--k0", type=float, default=0.0)
    p.add_argument("--kz-sign", choices=("auto", "-1", "1"), default="auto")
    p.set_defaults(func=cmd_maxprob)

    p = sub.add_parser("optimal-beta", parents=[common], help="optimal field ratio vs photon energy")
    p.add_argument("--E", type=float, default=0.05)
    p.add_argument("--k0-grid", default="0:2:21")
    p.set_defaults(func=cmd_optimal_beta)

    p = sub.add_parser("critical-k", parents=[common], help="critical photon energy")
    p.add_argument("--E", type=float, default=0.05)
    p.add_argument("--bisect-tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_critical_k)

    p = sub.add_parser("planewave", parents=[common], help="plane-wave exponent, expansion vs contour")
    p.add_argument("--E", type=float, default=0.05, help="peak field E0")
    p.add_argument("--k0", type=float, default=0.5)
    p.add_argument("--shape", choices=sorted(planewave.SHAPES), default="sin")
    p.add_argument("--xi", type=float, default=50.0, help="nonlinearity parameter, sets omega_L")
    p.add_argument("--omega", type=float, default=None, help="laser frequency; overrides --xi")
    p.add_argument("--px", type=float, default=0.0, help="canonical P_x")
    p.add_argument("--py", type=float, default=0.0)
    p.add_argument("--lambda-fraction", type=float, default=0.5, help="Lambda_p / Lambda_k")
    p.set_defaults(func=cmd_planewave)

    p = sub.add_parser("validate", parents=[common], help="closed form vs quadrature grid")
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_validate)
    return parser


def _load_config(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    with open(known.config) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        defaults = _load_config(argv)
    except OSError as exc:
        print(json.dumps({"schema": SCHEMA, "error": "io", "detail": str(exc)}))
        return EXIT_IO
    except (UsageError, json.JSONDecodeError) as exc:
        print(f"pairgate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if defaults:
        for action in parser._subparsers._group_actions[0].choices.values():
            action.set_defaults(**defaults)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.tol is None and os.environ.get("PAIRGATE_TOL"):
        args.tol = float(os.environ["PAIRGATE_TOL"])
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pairgate {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PairgateError as exc:
        print(json.dumps({"schema": SCHEMA, "command": args.command, "error": exc.reason, "detail": exc.detail}))
        return EXIT_FORBIDDEN
    except OSError as exc:
        print(json.dumps({"schema": SCHEMA, "command": args.command, "error": "io", "detail": str(exc)}))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
