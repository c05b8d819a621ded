"""Command line front end: `dfstab <command> ...` prints one JSON report.

Exit status: 0 on success, 1 on a domain error (a precondition of the
underlying computation fails), 2 on a usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Callable, Sequence

from .exactalg import factor_cap, format_rat
from .ore import adjoint, apply, infinity_data, local_exponent_data, ore_mul
from .parse import ParseError, parse_operator, parse_poly, parse_poly_in_D, parse_ratfun
from .report import (
    bounds_payload,
    chain_payload,
    emit_report,
    make_report,
    sind_payload,
    verdict_payload,
)
from .stability import (
    DELTA1,
    ChainStep,
    InvariantError,
    first_order_sind_bounds,
    first_order_stable,
    inv_q_operator,
    inv_q_profile,
    katz_operator,
    katz_sind,
    principal_chain,
    sind_exact,
    verify_chain_identity,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _env_cap() -> int | None:
    raw = os.environ.get("DFSTAB_FACTOR_CAP")
    if raw is None:
        return None
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError:
        raise UsageError(f"DFSTAB_FACTOR_CAP must be a nonnegative integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--factor-cap", type=_positive_int, default=argparse.SUPPRESS,
                        help="degree cap for exhaustive factorization (default 6, env DFSTAB_FACTOR_CAP)")
    common.add_argument("--max-depth", type=_positive_int, default=argparse.SUPPRESS,
                        help="refuse chains deeper than this (default 64)")
    common.add_argument("--text", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")

    parser = argparse.ArgumentParser(prog="dfstab", description="Stability of D-finite operators over Q(x).")
    parser.add_argument("--factor-cap", type=_positive_int, default=None, help=argparse.SUPPRESS)
    parser.add_argument("--max-depth", type=_positive_int, default=64, help=argparse.SUPPRESS)
    parser.add_argument("--text", action="store_true", default=False, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("adjoint", "formal adjoint L*")
    p.add_argument("operator")
    p = add("apply", "apply an operator to a rational function")
    p.add_argument("operator")
    p.add_argument("function")
    p = add("mul", "product A*B in the Ore ring")
    p.add_argument("left")
    p.add_argument("right")
    p = add("indicial", "indicial polynomial at infinity or at a point")
    p.add_argument("operator")
    p.add_argument("--at", default=None, help="rational point (default: infinity)")
    p = add("chain", "principal-integral chain with certificates")
    p.add_argument("operator")
    p.add_argument("--depth", type=_positive_int, required=True)
    p.add_argument("--verify", action="store_true", help="re-check certificates from the printed operators")
    p = add("sind", "exact stability index with witnesses")
    p.add_argument("operator")
    p = add("bounds1", "stability index bounds for D + f")
    p.add_argument("function")
    p = add("stable1", "stability verdict and normal form for D + f")
    p.add_argument("function")
    p = add("profile-invq", "order profile of the chain of D + q'/q")
    p.add_argument("--q", required=True)
    p.add_argument("--check", action="store_true", help="compare against an explicit chain")
    p = add("katz", "stability index of p(D) + q(x)")
    p.add_argument("--p", required=True, help="polynomial in D with constant coefficients")
    p.add_argument("--q", required=True, help="polynomial in x")
    return parser


def _reparse_chain_ok(payload: dict[str, Any]) -> bool:
    """Verify a chain using only the rendered strings of the report."""
    base = parse_operator(payload["base"])
    steps = []
    for s in payload["steps"]:
        l = parse_ratfun(s["certificate_l"]) if s["case"] == DELTA1 else None
        H = parse_operator(s["certificate_H"]) if s["case"] == DELTA1 else None
        steps.append(ChainStep(parse_operator(s["operator"]), s["case"], l, H))
    return verify_chain_identity(base, steps)


def _run(args: argparse.Namespace) -> dict[str, Any]:
    cmd = args.command
    if cmd == "adjoint":
        L = parse_operator(args.operator)
        if L.is_zero():
            raise ValueError("adjoint of the zero operator")
        return make_report(cmd, {"operator": L}, {"result": adjoint(L)})
    if cmd == "apply":
        L = parse_operator(args.operator)
        f = parse_ratfun(args.function)
        return make_report(cmd, {"operator": L, "function": f}, {"result": apply(L, f)})
    if cmd == "mul":
        A, B = parse_operator(args.left), parse_operator(args.right)
        return make_report(cmd, {"left": A, "right": B}, {"result": ore_mul(A, B)})
    if cmd == "indicial":
        L = parse_operator(args.operator)
        if L.is_zero():
            raise ValueError("indicial polynomial of the zero operator")
        if args.at is None:
            inf = infinity_data(L)
            payload = {"point": "infinity", "indicial": inf.indicial.to_str("s"), "shift": inf.sigma}
        else:
            c = parse_ratfun(args.at)
            if not c.is_constant():
                raise ParseError("--at expects a rational number", 0)
            e, tau = local_exponent_data(L, c.constant_value())
            payload = {"point": format_rat(c.constant_value()), "indicial": e.to_str("s"), "shift": tau}
        return make_report(cmd, {"operator": L}, payload)
    if cmd == "chain":
        L = parse_operator(args.operator)
        if args.depth > args.max_depth:
            raise UsageError(f"--depth {args.depth} exceeds --max-depth {args.max_depth}")
        if L.is_zero():
            raise ValueError("principal chain of the zero operator")
        rep = principal_chain(L, args.depth)
        report = make_report(cmd, {"operator": L, "depth": args.depth}, chain_payload(rep))
        if args.verify:
            ok = _reparse_chain_ok(report)
            report["certificates_verified"] = ok
            if not ok:
                raise InvariantError("chain certificates failed to re-verify")
        return report
    if cmd == "sind":
        L = parse_operator(args.operator)
        if L.is_zero():
            raise ValueError("stability index of the zero operator")
        rep = sind_exact(L)
        return make_report(cmd, {"operator": L}, sind_payload(rep), rep.warnings)
    if cmd == "bounds1":
        f = parse_ratfun(args.function)
        b = first_order_sind_bounds(f)
        return make_report(cmd, {"function": f}, bounds_payload(b), b.warnings)
    if cmd == "stable1":
        f = parse_ratfun(args.function)
        v = first_order_stable(f)
        return make_report(cmd, {"function": f}, verdict_payload(v), v.warnings)
    if cmd == "profile-invq":
        q = parse_poly(args.q)
        depth = q.degree + 2
        if args.check and depth > args.max_depth:
            raise UsageError(f"chain depth {depth} exceeds --max-depth {args.max_depth}")
        payload: dict[str, Any] = {"formula": inv_q_profile(q, depth), "operator": inv_q_operator(q)}
        if args.check:
            rep = principal_chain(inv_q_operator(q), depth)
            payload["chain_orders"] = list(rep.orders)
            payload["verified_identity"] = rep.verified_identity
            payload["agree"] = list(rep.orders) == payload["formula"]
        return make_report(cmd, {"q": q}, payload)
    if cmd == "katz":
        p, q = parse_poly_in_D(args.p), parse_poly(args.q)
        formula = katz_sind(p, q)
        L = katz_operator(p, q)
        rep = sind_exact(L)
        payload = {"formula": formula, "operator": L, "sind": rep.sind, "agree": formula == rep.sind}
        return make_report(cmd, {"p": p.to_str("D"), "q": q}, payload, rep.warnings)
    raise UsageError(f"unknown command {cmd!r}")


def run_command(argv: Sequence[str], out: Callable[[str], None] = print) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        cap = args.factor_cap if args.factor_cap is not None else _env_cap()
        if cap is None:
            report = _run(args)
        else:
            with factor_cap(cap):
                report = _run(args)
    except (ParseError, UsageError) as e:
        print(f"dfstab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError, ArithmeticError, InvariantError) as e:
        print(f"dfstab: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    out(emit_report(report, "text" if args.text else "json"))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
