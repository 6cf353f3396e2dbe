"""Batch verification front-end.

Subcommands mirror the verification surface:

  balltrace verify identities [--order 2|4|6|8|all]
  balltrace verify trace --order O --dim N [--tau T] [--kmax K] [--quad Q]
                         [--perturb J:EPS]
  balltrace verify beckner --order O --dim N --s S [--tau T]
  balltrace verify weighted --dim N --s S [--tau T]
  balltrace verify sphere --dim N --gamma G [--tau T]
  balltrace verify lm --order O [--tau T]
  balltrace verify halfspace [--order O] [--lambda L]
  balltrace verify conformal --dim N --k K [--samples M] [--step H] [--extended]
  balltrace tables coeffs --order O [--dim N]

Numeric flags accept exact rationals as "p/q" (floats otherwise).  Output is
deterministic: fixed field order, floats at 17 significant digits.  Exit
status: 0 all reports pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import conformal, halfspace, inequality, sphere
from .exact import RationalPoly
from .sphere import ZonalFunction, extremal_log, extremal_power

REPORT_FIELDS = ["theorem", "order", "dimension", "kmax", "quad_degree",
                 "lhs", "rhs", "sharp_constant", "slack", "rel_slack",
                 "equality_expected", "pass", "notes"]


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, Fraction):
        return str(x)
    return x


def _rat_or_float(text: str):
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def _report_row(rep: inequality.InequalityReport) -> dict:
    d = rep.as_dict()
    return {k: _fmt(d[k]) if k != "notes" else d[k] for k in REPORT_FIELDS}


def _emit(config: dict, reports: list, all_pass: bool, args) -> None:
    fmt = args.format
    payload = {
        "tool_version": __version__,
        "config": config,
        "reports": reports,
        "pass": all_pass,
    }
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS)
        writer.writeheader()
        for row in reports:
            row = dict(row)
            row["notes"] = "; ".join(row.get("notes", []))
            writer.writerow({k: row.get(k, "") for k in REPORT_FIELDS})
        text = buf.getvalue()
    else:
        lines = []
        for row in reports:
            status = "PASS" if _is_pass(row) else "FAIL"
            lines.append(f"[{status}] {row.get('theorem', row.get('check', '?'))}: "
                         + ", ".join(f"{k}={row[k]}" for k in row
                                     if k not in ("theorem", "check", "notes")))
            for note in row.get("notes", []):
                lines.append(f"    note: {note}")
        lines.append("overall: " + ("PASS" if all_pass else "FAIL"))
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _is_pass(row: dict) -> bool:
    v = row.get("pass", row.get("passed", False))
    return v in (True, "True", "true")


def _config_dict(args, keys) -> dict:
    out = {"subcommand": args.what if hasattr(args, "what") else args.command}
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            out[k] = _fmt(v) if isinstance(v, (float, Fraction)) else v
    return out


def _extremal_for(kind: str, m: int, n: int, s, tau: float) -> ZonalFunction:
    if kind == "log":
        return extremal_log(n, tau)
    if kind == "weighted":
        return extremal_power(n, (n - s) / 2.0, tau)
    if kind == "sphere":
        return extremal_power(n, (n - 2 * s) / 2.0, tau)
    w = 2 * m - 1
    e = (n - w * (1.0 if s is None else s)) / 2.0
    return extremal_power(n, e, tau)


def _poly_str(p: RationalPoly) -> str:
    return repr(p)


# -- subcommand runners ------------------------------------------------------

def _run_identities(args) -> tuple:
    orders = [1, 2, 3, 4] if args.order == "all" else [int(args.order) // 2]
    reports = []
    ok_all = True
    for m in orders:
        if m == 1:
            # order 2: lambda_k(1/2) - k == (n-1)/2, the constant a_n
            coeffs = inequality.recast_coefficients(1)
            half = Fraction(1, 2)
            ok = len(coeffs) == 1 and coeffs[0] == (
                (RationalPoly.var("n") - 1) * half)
            reports.append({"check": "coefficient-identity-order-2",
                            "theorem": "coefficient-identity-order-2",
                            "residual": "0" if ok else "nonzero",
                            "pass": ok, "notes": ["a_n = (n-1)/2"]})
            ok_all &= ok
            continue
        ident = inequality.coefficient_identity(m)
        row = {
            "check": f"coefficient-identity-order-{2 * m}",
            "theorem": f"coefficient-identity-order-{2 * m}",
            "residual": _poly_str(ident.residual),
            "published_matches_derived": ident.published_matches,
            "pass": ident.ok,
            "notes": list(ident.notes),
        }
        reports.append(row)
        ok_all &= ident.ok
    if args.order in ("all", "4"):
        p4 = inequality.p4_factorization_identity()
        reports.append({"check": "p4-factorization", "theorem": "p4-factorization",
                        "pass": p4, "notes": []})
        ok_all &= p4
    if args.order == "all":
        pref_ok = [halfspace.halfspace_prefactor(m) for m in (1, 2, 3, 4)] == [
            Fraction(1), Fraction(2), Fraction(8, 3), Fraction(16, 5)]
        reports.append({"check": "halfspace-prefactors", "theorem": "halfspace-prefactors",
                        "pass": pref_ok, "notes": []})
        ok_all &= pref_ok
    return reports, ok_all


def _run_trace(args) -> tuple:
    m = args.order // 2
    if args.dim <= 2 * m - 1:
        raise ValueError(f"trace order {2 * m} needs --dim > {2 * m - 1}")
    tau = float(args.tau)
    e = (args.dim - 2 * m + 1) / 2.0
    if args.kmax:
        from .sphere import decompose_zonal
        f = decompose_zonal(lambda t: (1.0 - tau * t) ** (-e), args.dim,
                            args.kmax)
    else:
        f = extremal_power(args.dim, e, tau)
    rep = inequality.trace_report(m, args.dim, f, equality_expected=True,
                                  quad_degree=args.quad,
                                  equality_tol=args.tolerance)
    reports = [_report_row(rep)]
    ok = rep.passed
    if args.perturb:
        j, eps = args.perturb.split(":")
        scan = inequality.extremality_scan(
            "trace", {"m": m, "n": args.dim}, f, int(j),
            [-float(eps), float(eps)])
        for e, slack in scan:
            ok_here = slack > 0
            reports.append({"theorem": f"trace-order-{2*m}-perturbed",
                            "epsilon": _fmt(e), "slack": _fmt(slack),
                            "pass": ok_here, "notes": []})
            ok &= ok_here
    return reports, ok


def _run_beckner(args) -> tuple:
    m = args.order // 2
    s = float(args.s)
    f = _extremal_for("beckner", m, args.dim, s, float(args.tau))
    rep = inequality.beckner_report(m, args.dim, s, f, equality_expected=True,
                                    equality_tol=args.tolerance)
    return [_report_row(rep)], rep.passed


def _run_weighted(args) -> tuple:
    s = float(args.s)
    f = _extremal_for("weighted", 1, args.dim, s, float(args.tau))
    rep = inequality.weighted_beckner_report(args.dim, s, f,
                                             equality_expected=True,
                                             equality_tol=args.tolerance or 1e-4)
    return [_report_row(rep)], rep.passed


def _run_sphere(args) -> tuple:
    g = float(args.gamma)
    f = _extremal_for("sphere", 1, args.dim, g, float(args.tau))
    rep = inequality.sphere_sobolev_report(args.dim, g, f,
                                           equality_expected=True,
                                           equality_tol=args.tolerance)
    return [_report_row(rep)], rep.passed


def _run_lm(args) -> tuple:
    m = args.order // 2
    f = extremal_log(2 * m - 1, float(args.tau))
    rep = inequality.lm_report(m, f, equality_expected=True,
                               equality_tol=args.tolerance)
    return [_report_row(rep)], rep.passed


def _run_halfspace(args) -> tuple:
    reports = []
    ok_all = True
    orders = [args.order // 2] if args.order else [2, 3, 4]
    for m in orders:
        lam = Fraction(args.lam) if args.lam is not None else (
            halfspace.optimal_lambda(m)[0] if m >= 3 else Fraction(0))
        energy = halfspace.profile_energy(m, lam)
        expected_poly = {2: "2", 3: "3 lam^2 - 2 lam + 3",
                         4: "20 lam^2 - 8 lam + 4"}[m]
        epoly = halfspace.profile_energy_poly(m)
        target = {2: RationalPoly.const(2),
                  3: 3 * RationalPoly.var("lam") ** 2 - 2 * RationalPoly.var("lam") + 3,
                  4: 20 * RationalPoly.var("lam") ** 2 - 8 * RationalPoly.var("lam") + 4}[m]
        ok = epoly == target
        notes = []
        if m == 4:
            notes.append(
                "order-8 energy taken as int (phi'''' - 2 phi'' + phi)^2, the "
                "Fourier side of int (Lap^2 U)^2, which reproduces the stated "
                "constant 20L^2-8L+4; the source displays |grad Lap U|^2 in "
                "the theorem, inconsistent with its W^{4,2} hypothesis")
        row = {"theorem": f"halfspace-profile-order-{2*m}",
               "lambda": _fmt(lam), "energy": _fmt(energy),
               "energy_poly": expected_poly, "pass": ok, "notes": notes}
        if m >= 3:
            lam_star, emin = halfspace.optimal_lambda(m)
            row["optimal_lambda"] = _fmt(lam_star)
            row["minimum_energy"] = _fmt(emin)
        reports.append(row)
        ok_all &= ok
    pref = [halfspace.halfspace_prefactor(m) for m in (1, 2, 3, 4)]
    ok = pref == [Fraction(1), Fraction(2), Fraction(8, 3), Fraction(16, 5)]
    reports.append({"theorem": "halfspace-prefactors",
                    "values": [str(p) for p in pref], "pass": ok, "notes": []})
    return reports, ok_all and ok


def _run_conformal(args) -> tuple:
    rng = np.random.default_rng(20240817)
    n = args.dim
    samples = args.samples
    h = args.step
    worst = {"orthogonality": 0.0, "phi_calculus": 0.0,
             "laplacian_identity": 0.0, "covariance": 0.0,
             "covariant_shift": 0.0}
    F = conformal.PolyField.norm_sq(n + 1)
    u = conformal.PolyField.norm_sq(n + 1)
    for _ in range(samples):
        x = rng.uniform(-2.0, 2.0, size=n)
        y = rng.uniform(0.1, 3.0)
        p = conformal.HalfSpacePoint(x, y)
        worst["orthogonality"] = max(worst["orthogonality"],
                                     conformal.check_orthogonality(p))
        worst["phi_calculus"] = max(worst["phi_calculus"],
                                    conformal.check_phi_calculus(1.0, p, h))
        worst["laplacian_identity"] = max(
            worst["laplacian_identity"],
            conformal.check_laplacian_identity(F, p, h))
        worst["covariance"] = max(
            worst["covariance"],
            conformal.check_conformal_covariance(F, args.k, p, h,
                                                 extended=args.extended))
        worst["covariant_shift"] = max(
            worst["covariant_shift"],
            conformal.check_covariant_shift(u, min(2, args.k), p, h))
    thresholds = {"orthogonality": 1e-12, "phi_calculus": 1e-6,
                  "laplacian_identity": 1e-6,
                  "covariance": {1: 1e-6, 2: 1e-4, 3: 1e-5 if args.extended else 1e-2}[args.k],
                  "covariant_shift": 1e-6 if args.k == 1 else 1e-4}
    reports = []
    ok_all = True
    for name, value in worst.items():
        ok = value < thresholds[name]
        reports.append({"theorem": f"conformal-{name}", "max_residual": _fmt(value),
                        "threshold": _fmt(thresholds[name]), "pass": ok, "notes": []})
        ok_all &= ok
    return reports, ok_all


def _run_tables(args) -> tuple:
    m = args.order // 2
    labels = {1: ["a_n"], 2: ["b_n", "grad"],
              3: ["c(3)", "c(2)", "c(1)"],
              4: ["d(4)", "d(3)", "d(2)", "d(1)"]}[m]
    coeffs = inequality.recast_coefficients(m)
    rows = []
    for label, c in zip(labels, coeffs):
        row = {"theorem": f"coeff-order-{2*m}-{label}", "K_power": labels.index(label),
               "symbolic": _poly_str(c), "pass": True, "notes": []}
        if args.dim:
            row["value"] = _fmt(c.eval(n=args.dim))
        rows.append(row)
    return rows, True


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balltrace", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--output", help="write the report to this path")
    ap.add_argument("--format", choices=["json", "csv", "pretty"],
                    default="pretty")
    # the same options are accepted after the subcommand; SUPPRESS keeps a
    # leaf parser from clobbering values parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=["json", "csv", "pretty"],
                        default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification batch")
    vsub = verify.add_subparsers(dest="what", required=True)

    def leaf(parent, name):
        return parent.add_parser(name, parents=[common])

    p = leaf(vsub, "identities")
    p.add_argument("--order", choices=["2", "4", "6", "8", "all"], default="all")

    p = leaf(vsub, "trace")
    p.add_argument("--order", type=int, required=True, choices=[2, 4, 6, 8])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--tau", type=_rat_or_float, default=0.3)
    p.add_argument("--kmax", type=int)
    p.add_argument("--quad", type=int)
    p.add_argument("--perturb", help="J:EPS perturbation probe")
    p.add_argument("--tolerance", type=float, default=inequality.EQUALITY_TOL)

    p = leaf(vsub, "beckner")
    p.add_argument("--order", type=int, required=True, choices=[2, 4, 6])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--s", type=_rat_or_float, required=True)
    p.add_argument("--tau", type=_rat_or_float, default=0.3)
    p.add_argument("--tolerance", type=float, default=1e-5)

    p = leaf(vsub, "weighted")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--s", type=_rat_or_float, required=True)
    p.add_argument("--tau", type=_rat_or_float, default=0.2)
    p.add_argument("--tolerance", type=float, default=1e-4)

    p = leaf(vsub, "sphere")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--gamma", type=_rat_or_float, required=True)
    p.add_argument("--tau", type=_rat_or_float, default=0.3)
    p.add_argument("--tolerance", type=float, default=inequality.EQUALITY_TOL)

    p = leaf(vsub, "lm")
    p.add_argument("--order", type=int, required=True, choices=[2, 4, 6, 8])
    p.add_argument("--tau", type=_rat_or_float, default=0.3)
    p.add_argument("--tolerance", type=float, default=1e-5)

    p = leaf(vsub, "halfspace")
    p.add_argument("--order", type=int, choices=[4, 6, 8])
    p.add_argument("--lambda", dest="lam", type=str)

    p = leaf(vsub, "conformal")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--step", type=float)
    p.add_argument("--extended", action="store_true")

    tables = sub.add_parser("tables", help="emit coefficient tables")
    tsub = tables.add_subparsers(dest="what", required=True)
    p = leaf(tsub, "coeffs")
    p.add_argument("--order", type=int, required=True, choices=[2, 4, 6, 8])
    p.add_argument("--dim", type=int)

    return ap


_RUNNERS = {
    ("verify", "identities"): (_run_identities, ["order"]),
    ("verify", "trace"): (_run_trace, ["order", "dim", "tau", "kmax", "quad",
                                       "perturb", "tolerance"]),
    ("verify", "beckner"): (_run_beckner, ["order", "dim", "s", "tau", "tolerance"]),
    ("verify", "weighted"): (_run_weighted, ["dim", "s", "tau", "tolerance"]),
    ("verify", "sphere"): (_run_sphere, ["dim", "gamma", "tau", "tolerance"]),
    ("verify", "lm"): (_run_lm, ["order", "tau", "tolerance"]),
    ("verify", "halfspace"): (_run_halfspace, ["order", "lam"]),
    ("verify", "conformal"): (_run_conformal, ["dim", "k", "samples", "step",
                                               "extended"]),
    ("tables", "coeffs"): (_run_tables, ["order", "dim"]),
}


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    runner, keys = _RUNNERS[(args.command, args.what)]
    try:
        reports, ok = runner(args)
    except ValueError as exc:  # invalid parameter combination
        print(f"balltrace: {exc}", file=sys.stderr)
        return 2
    config = _config_dict(args, keys)
    _emit(config, reports, ok, args)
    if not ok:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
