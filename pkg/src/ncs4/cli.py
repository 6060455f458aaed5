"""``ncs4`` command line interface.

Exit codes: 0 when every check passes, 1 when a check fails or a
mathematical precondition is violated, 2 for unusable input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional

from .algebra import NotCentral, center_decompose
from .connection import (
    check_metric_compatibility, check_torsion_free, closed_form_connection, solve_connection,
)
from .curvature import ClosedFormMismatch, gcb_integrand, lowered_components, ricci_scalar
from .geometry import Metric, Perturbation, UnsupportedDelta
from .localization import LocalElement
from .parsing import ParseError, parse, parse_algebra
from .trace import (
    AlphaBoundaryNonzero, ConvergenceFailure, DivergentIntegral, euler_characteristic,
    quadrature_oracle, tau_delta, tau_delta_loc,
)
from .verify import SUITES, run_suite

SCHEMA = "ncs4/1"


class InputError(Exception):
    pass


def _perturbation(args) -> Perturbation:
    n = getattr(args, "N", None)
    chosen = [x for x in (args.delta, args.alpha, n) if x is not None]
    if len(chosen) > 1:
        raise InputError("give at most one of --delta, --alpha, --N")
    if args.alpha is not None:
        return Perturbation.formal_unit(parse(args.alpha), f"Delta[alpha={args.alpha}]")
    if n is not None:
        if n < 0:
            raise InputError("--N must be non-negative")
        return Perturbation.one_plus_t2(n)
    if args.delta is None:
        return Perturbation.explicit()
    return Perturbation.from_element(parse(args.delta))


def _emit(args, payload: dict, lines):
    if args.json:
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    pert = _perturbation(args)
    report = run_suite(args.suite, pert, seed=args.seed, tolerance=args.tolerance,
                       numeric=args.numeric)
    lines = [f"suite {args.suite}, delta = {pert}, seed = {args.seed}"]
    lines += [c.line() for c in report.checks]
    lines.append("all checks passed" if report.ok else "some checks FAILED")
    _emit(args, {"command": "verify", **report.to_json()}, lines)
    return report.exit_code


def cmd_connection(args) -> int:
    pert = _perturbation(args)
    h = Metric(pert)
    table = solve_connection(h)
    compat = check_metric_compatibility(table, h)
    torsion = check_torsion_free(table)
    payload = {"command": "connection", "delta": str(pert), "table": table.to_json(),
               "metric_compatible": compat, "torsion_free": torsion}
    lines = [f"delta = {pert}"]
    for (a, b), v in sorted(table.gamma.items()):
        lines.append(f"nabla_{a} E_{b} = {v}")
    lines.append(f"metric-compatible: {'pass' if compat else 'fail'}")
    lines.append(f"torsion-free: {'pass' if torsion else 'fail'}")
    ok = compat and torsion
    if args.compare_closed_form:
        bad = table.mismatches(closed_form_connection(pert))
        payload["closed_form_mismatches"] = [f"{a}{b}" for a, b in bad]
        lines.append("levi-civita-unique: " + ("pass (Koszul = closed form)" if not bad
                                                else f"fail (mismatch at {bad})"))
        ok = ok and not bad
    payload["ok"] = ok
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_curvature(args) -> int:
    pert = _perturbation(args)
    h = Metric(pert)
    ct = lowered_components(solve_connection(h), h)
    ric, _, s = ricci_scalar(ct)
    try:
        g = gcb_integrand(ct)
        verdict, value = True, g.value
    except ClosedFormMismatch as exc:
        verdict, value = False, None
        print(f"error: {exc}", file=sys.stderr)
    payload = {
        "command": "curvature", "delta": str(pert), "components": ct.to_json(),
        "ricci": {f"{a + 1}{b + 1}": ric[a][b].to_json()
                  for a in range(4) for b in range(4) if not ric[a][b].is_zero},
        "scalar": s.to_json(),
        "integrand": value.to_json() if value is not None else None,
        "closed_form_agrees": verdict,
    }
    lines = [f"delta = {pert}"]
    for idx in ct.nonzero():
        a, b, p, q = idx
        if a < b and p < q and (a, b) == (p, q):
            lines.append(f"R_{a}{b}{p}{q} = {ct[idx]}")
    for a in range(4):
        lines.append(f"Ric_{a + 1}{a + 1} = {ric[a][a]}")
    lines.append(f"S = {s}")
    if value is not None:
        lines.append(f"integrand = {value}")
    lines.append("closed form: " + ("pass" if verdict else "fail"))
    _emit(args, payload, lines)
    return 0 if verdict else 1


def cmd_gcb(args) -> int:
    pert = _perturbation(args)
    try:
        res = euler_characteristic(pert, full=True)
    except AlphaBoundaryNonzero as exc:
        payload = {"command": "gcb", "delta": str(pert), "error": "AlphaBoundaryNonzero",
                   "alpha_at_1": _frac(exc.at_plus), "alpha_at_minus1": _frac(exc.at_minus)}
        if args.json:
            _emit(args, payload, [])
        else:
            print(f"error: AlphaBoundaryNonzero: {exc}", file=sys.stderr)
        return 1
    payload = {"command": "gcb", "delta": str(pert), "chi": _frac(res.chi), "exact": True,
               "alpha_at_1": _frac(res.alpha_at_1), "alpha_at_minus1": _frac(res.alpha_at_minus1),
               "integrand": res.integrand.to_json()}
    lines = [f"delta = {pert}", f"alpha = {pert.alpha}",
             f"alpha(1) = {res.alpha_at_1}, alpha(-1) = {res.alpha_at_minus1}",
             f"integrand = {res.integrand}", f"chi = {res.chi} (exact)"]
    ok = res.chi == 2
    if args.numeric:
        if pert.formal:
            lines.append("numeric: skipped (formal Delta has no numeric value)")
            payload["numeric"] = None
        else:
            v = quadrature_oracle(res.integrand, pert, tol=min(args.tolerance, 1e-8)) \
                / (32 * math.pi ** 2)
            close = abs(v - float(res.chi)) <= max(args.tolerance, 1e-6)
            lines.append(f"numeric chi = {v:.12f} ({'agrees' if close else 'DISAGREES'})")
            payload["numeric"] = v
            ok = ok and close
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_trace(args) -> int:
    pert = _perturbation(args) if (args.delta or args.alpha) else None
    x = parse(args.expr)
    try:
        value = tau_delta_loc(x, pert)
    except NotCentral:
        if x.den.is_trivial and x.delta_pow == 0 and (pert is None or not pert.formal):
            value = tau_delta(x.num, pert)
        else:
            raise
    payload = {"command": "trace", "expr": args.expr, "delta": str(pert or "1"),
               "value": value.to_json()}
    lines = [f"tau = {value}"]
    if args.numeric:
        v = quadrature_oracle(x, pert, tol=args.tolerance)
        lines.append(f"numeric = {v:.12g} (exact {value.evaluate().real:.12g})")
        payload["numeric"] = v
    _emit(args, payload, lines)
    return 0


def cmd_center(args) -> int:
    a = parse_algebra(args.expr)
    try:
        dec = center_decompose(a)
    except NotCentral:
        _emit(args, {"command": "center", "expr": args.expr, "central": False},
              [f"{a} is not central"])
        return 1
    items = sorted(dec.items())
    payload = {"command": "center", "expr": args.expr, "central": True,
               "coefficients": [{"i1": i1, "i2": i2, "eps": e, "coeff": c.to_json()}
                                for (i1, i2, e), c in items]}
    lines = [f"({c}) |Z|^{2 * i1} |W|^{2 * i2} T^{e}" for (i1, i2, e), c in items] or ["0"]
    _emit(args, payload, lines)
    return 0


def cmd_mul(args) -> int:
    x = LocalElement(1)
    for e in args.exprs:
        x = x * parse(e)
    _emit(args, {"command": "mul", "exprs": args.exprs, "result": x.to_json(),
                 "text": str(x)}, [str(x)])
    return 0


# ---------------------------------------------------------------------------

def _add_delta(p, with_n: bool = False):
    p.add_argument("--delta", help='perturbation, e.g. "(1+T^2)^3" or "2*(1-T^2)"')
    p.add_argument("--alpha", help="formal perturbation Delta with d4 Delta = 2 alpha Delta")
    if with_n:
        p.add_argument("--N", type=int, help="shorthand for --delta (1+T^2)^N")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--numeric", action="store_true", help="add quadrature cross-checks")
    p.add_argument("--tolerance", type=float, default=1e-9, help="numeric tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncs4", description="Exact curvature computations on "
                                 "the theta-deformed 4-sphere.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    _add_delta(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("connection", help="Levi-Civita connection table")
    _add_delta(p)
    _add_common(p)
    p.add_argument("--compare-closed-form", action="store_true")
    p.set_defaults(func=cmd_connection)

    p = sub.add_parser("curvature", help="curvature components, Ricci, scalar, integrand")
    _add_delta(p)
    _add_common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("gcb", help="Euler characteristic from the curvature integrand")
    _add_delta(p, with_n=True)
    _add_common(p)
    p.set_defaults(func=cmd_gcb)

    p = sub.add_parser("trace", help="trace of an expression")
    p.add_argument("expr")
    _add_delta(p)
    _add_common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("center", help="decompose a central element")
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("mul", help="multiply expressions and print the normal form")
    p.add_argument("exprs", nargs="+")
    _add_common(p)
    p.set_defaults(func=cmd_mul)
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UnsupportedDelta, InputError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (DivergentIntegral, ConvergenceFailure, NotCentral, ClosedFormMismatch) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
