"""Command-line interface.

Every subcommand prints one JSON report to stdout; tabular data goes to CSV
files when ``--output`` is given.

    diracsector classify   --omega 6.283185307179586 --nu 0
    diracsector hardy      --omega 1.5707963 --channels 2 --output hardy.csv
    diracsector deficiency --omega 3.14159265 --nu 0.5 --k 0
    diracsector modes      --omega 3.14159265 --K 4
    diracsector zero-modes --omega 6.2831853 --nu 0 --k 0 --alpha 0 --output u.csv
    diracsector decompose  --omega 3.14159265 --channels 4 --input field.csv --output coeffs/

Exit codes: 0 success, 2 usage or input error, 3 solver failure,
4 indeterminate numerical verdict.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import params
from ._backend import BACKEND
from .angular import AngularGrid, basis_modes, check_mode_identities, gram
from .errors import DiracSectorError, FitError, SolverError
from .grid import LogGrid, RadialSample
from .io import ReportEnvelope, read_polar_csv, write_radial_csv
from .numerics.hardy import DEFAULT_HARDY_GRID, channel_quotient_table
from .numerics.shooting import DEFAULT_SHOOTING_GRID, Verdict, analytic_index, deficiency_index_numeric
from .params import SectorCoupling
from .partial_wave import decompose, reconstruct
from .radial import DEFAULT_ZERO_MODE_GRID, boundary_model, eval_u_alpha, zero_mode_residual

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_INDETERMINATE = 0, 2, 3, 4


class UsageError(DiracSectorError):
    pass


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _grid(args, default):
    lo, hi, n = default
    return LogGrid(args.grid_min if args.grid_min is not None else lo,
                   args.grid_max if args.grid_max is not None else hi,
                   args.grid_n if args.grid_n is not None else n)


def _coupling(args):
    return SectorCoupling(_angle(args, args.omega), args.nu, args.mass)


# ---------------------------------------------------------------------------

def cmd_classify(args):
    sc = _coupling(args)
    g = params.classify(sc, args.max_channels)
    channels = [
        {"k": c.k, "lambda": c.lambda_k, "delta": c.delta, "regime": c.regime,
         "analytic_index": 0 if c.regime.essentially_self_adjoint else 1}
        for c in g.channels
    ]
    results = {
        "case": g.case,
        "d": g.d,
        "deficiency_index": g.deficiency_index,
        "extension_family": None if g.d is None else f"U({g.d + 1})",
        "extension_family_real_dim": g.extension_family_real_dim,
        "hardy_constant": g.hardy_constant,
        "kato_rellich_threshold": g.kato_rellich_threshold,
        "kato_rellich_applicable": g.kato_rellich_applicable,
        "self_adjointness_threshold_nu_sq": (math.pi**2 - sc.omega**2) / (4 * sc.omega**2),
        "distinguished": {"exists": g.distinguished.exists,
                          "weight_exponent_sup": g.distinguished.weight_exponent_sup},
        "sobolev_exponent_sup": g.sobolev_exponent_sup,
        "essential_spectrum": params.essential_spectrum(sc.mass),
        "channels": channels,
    }
    diagnostics = list(g.warnings)
    if not g.kato_rellich_applicable:
        diagnostics.append("Kato-Rellich threshold is only meaningful for omega < pi")
    return ReportEnvelope("classify", _params(args, sc), results, diagnostics), EXIT_OK


def cmd_hardy(args):
    omega = params.check_omega(_angle(args, args.omega))
    grid = _grid(args, DEFAULT_HARDY_GRID)
    rows = channel_quotient_table(omega, args.channels, grid)
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "sign", "analytic", "numeric", "relative_gap"])
            for row in rows:
                w.writerow([row["k"], row["sign"], repr(row["analytic"]), repr(row["numeric"]),
                            repr(row["relative_gap"])])
    results = {
        "global_constant": params.hardy_constant(omega),
        "numeric_channel_min": min(r["numeric"] for r in rows),
        "channels": rows,
        "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "n": grid.n},
    }
    parameters = {"omega": omega, "channels": args.channels}
    return ReportEnvelope("hardy", parameters, results, []), EXIT_OK


def cmd_deficiency(args):
    sc = _coupling(args)
    grid = _grid(args, DEFAULT_SHOOTING_GRID)
    analytic = analytic_index(sc, args.k)
    per_sign = {}
    diagnostics = []
    code = EXIT_OK
    for sign in ("+i", "-i"):
        res = deficiency_index_numeric(sc, args.k, sign, grid=grid)
        per_sign[sign] = {
            "numeric_index": res.index_contribution,
            "verdict": res.verdict,
            "fitted_exponent": res.fit.exponent,
            "log_flag": res.fit.log_flag,
            "log_corrected_exponent": res.fit.log_exponent,
            "r_squared": res.fit.r_squared,
            "fit_window": list(res.fit.window),
        }
        if res.verdict is Verdict.INDETERMINATE:
            code = EXIT_INDETERMINATE
            diagnostics.append(f"{sign}: fitted exponent {res.fit.exponent!r} is within the "
                               "fit margin of -1/2; L^2 integrability undecided")
    ch = params.delta_of(sc, args.k)
    numeric = per_sign["+i"]["numeric_index"]
    results = {
        "delta": ch.delta,
        "regime": ch.regime,
        "analytic_index": analytic,
        "numeric_index": numeric,
        "analytic_exponent": -math.sqrt(ch.delta) if ch.delta > 0 else 0.0,
        "fitted_exponent": per_sign["+i"]["fitted_exponent"],
        "log_flag": per_sign["+i"]["log_flag"],
        "agreement": None if code == EXIT_INDETERMINATE else (
            numeric == analytic and per_sign["-i"]["numeric_index"] == analytic),
        "signs": per_sign,
    }
    return ReportEnvelope("deficiency", _params(args, sc) | {"k": args.k}, results, diagnostics), code


def cmd_modes(args):
    omega = params.check_omega(_angle(args, args.omega))
    K = args.K
    lam_top = params.lambda_of(omega, K - 1)
    n = max(1001, int(math.ceil(8 * omega * (lam_top + 0.5) / (2 * math.pi))) * 4 + 1)
    grid = AngularGrid.uniform(omega, n)
    rows = []
    for mode in basis_modes(omega, K):
        res = check_mode_identities(mode, grid)
        rows.append({"k": mode.k, "sign": mode.sign, "lambda": mode.lam, "eigenvalue": mode.eigenvalue,
                     "boundary_residual": res.boundary, "eigen_residual": res.eigen,
                     "flip_residual": res.flip})
    G = gram(omega, K, grid)
    gram_dev = float(np.max(np.abs(G - np.eye(2 * K))))
    results = {
        "modes": rows,
        "gram_deviation": gram_dev,
        "gram_reference": "identity",
        "max_residual": max(max(r["boundary_residual"], r["eigen_residual"], r["flip_residual"])
                            for r in rows),
        "angular_nodes": n,
    }
    return ReportEnvelope("modes", {"omega": omega, "K": K}, results, []), EXIT_OK


def cmd_zero_modes(args):
    sc = _coupling(args)
    alpha = _angle(args, args.alpha)
    grid = _grid(args, DEFAULT_ZERO_MODE_GRID)
    bm = boundary_model(sc, args.k)
    residual = zero_mode_residual(sc, args.k, alpha, grid)
    sample = RadialSample(grid, eval_u_alpha(sc, args.k, alpha, grid.nodes))
    if args.output:
        write_radial_csv(args.output, sample)
    M = bm.require_matrix()
    results = {
        "regime": bm.regime,
        "delta": bm.delta,
        "root": complex(bm.root),
        "boundary_matrix": [[complex(x) for x in row] for row in M],
        "residual": residual,
        "residual_reference": 0.0,
        "csv": args.output,
    }
    parameters = _params(args, sc) | {"k": args.k, "alpha": alpha,
                                      "grid": {"r_min": grid.r_min, "r_max": grid.r_max, "n": grid.n}}
    return ReportEnvelope("zero-modes", parameters, results, []), EXIT_OK


def cmd_decompose(args):
    omega = params.check_omega(_angle(args, args.omega))
    if not args.input:
        raise UsageError("decompose needs --input FIELD.csv")
    field = read_polar_csv(args.input, omega)
    coeffs = decompose(field, args.channels)
    total = field.norm_sq()
    parseval = abs(total - coeffs.norm_sq()) / total if total > 0 else 0.0
    back = reconstruct(coeffs, field.theta)
    recon_err = float(np.max(np.abs(back.values - field.values)))
    files = []
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for k in range(coeffs.K):
            path = out / f"channel_{k}.csv"
            write_radial_csv(path, coeffs.sample(k))
            files.append(str(path))
    channels = [{"k": k,
                 "norm_sq_plus": float(coeffs.grid.integrate(np.abs(coeffs.plus[k]) ** 2)),
                 "norm_sq_minus": float(coeffs.grid.integrate(np.abs(coeffs.minus[k]) ** 2))}
                for k in range(coeffs.K)]
    results = {
        "field_norm_sq": total,
        "channel_norm_sq": coeffs.norm_sq(),
        "parseval_residual": parseval,
        "parseval_reference": 0.0,
        "tail_energy": coeffs.tail_energy,
        "reconstruction_error_inf": recon_err,
        "channels": channels,
        "files": files,
    }
    diagnostics = []
    if parseval > 1e-8:
        diagnostics.append("field carries energy outside the first K channels (see tail_energy)")
    parameters = {"omega": omega, "channels": args.channels, "input": args.input}
    return ReportEnvelope("decompose", parameters, results, diagnostics), EXIT_OK


def _params(args, sc):
    return {"omega": sc.omega, "nu": sc.nu, "mass": sc.mass}


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degrees", action="store_true", help="angles are given in degrees")

    def coupling(p):
        p.add_argument("--omega", type=float, required=True, help="opening angle (radians)")
        p.add_argument("--nu", type=float, default=0.0, help="Coulomb coupling")
        p.add_argument("--mass", type=float, default=0.0)

    def grid_flags(p):
        p.add_argument("--grid-min", type=float)
        p.add_argument("--grid-max", type=float)
        p.add_argument("--grid-n", type=int)

    parser = argparse.ArgumentParser(prog="diracsector", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="self-adjointness classification")
    coupling(p)
    p.add_argument("--max-channels", type=int, default=16)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hardy", parents=[common], help="channelwise Hardy quotients")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--channels", type=int, default=3)
    grid_flags(p)
    p.add_argument("--output", help="CSV file for the per-channel table")
    p.set_defaults(func=cmd_hardy)

    p = sub.add_parser("deficiency", parents=[common], help="numerical deficiency index of one channel")
    coupling(p)
    p.add_argument("--k", type=int, default=0)
    grid_flags(p)
    p.set_defaults(func=cmd_deficiency)

    p = sub.add_parser("modes", parents=[common], help="spin-orbit eigenbasis residuals")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--K", "--channels", dest="K", type=int, default=4)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("zero-modes", parents=[common], help="boundary model function u^(alpha)")
    coupling(p)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.0)
    grid_flags(p)
    p.add_argument("--output", help="radial profile CSV")
    p.set_defaults(func=cmd_zero_modes)

    p = sub.add_parser("decompose", parents=[common], help="partial-wave decomposition of a field CSV")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--channels", type=int, default=4)
    p.add_argument("--input")
    p.add_argument("--output", help="directory for channel_<k>.csv files")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("channels", "K", "max_channels"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")
    if getattr(args, "k", 0) < 0:
        parser.error("--k must be >= 0")
    try:
        report, code = args.func(args)
    except SolverError as exc:
        print(f"diracsector {args.command}: solver failure: {exc}", file=sys.stderr)
        env = ReportEnvelope(args.command, vars_for_report(args), {},
                             [str(exc), {"solver_diagnostics": exc.diagnostics}])
        print(env.to_json())
        return EXIT_SOLVER
    except FitError as exc:
        print(f"diracsector {args.command}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except DiracSectorError as exc:
        print(f"diracsector {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.diagnostics.append(f"kernel backend: {BACKEND}")
    print(report.to_json())
    return code


def vars_for_report(args):
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


if __name__ == "__main__":
    sys.exit(main())
