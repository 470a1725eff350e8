"""Command line entry point: ``sphbound <command> ...``.

Exit status is 0 on success, 1 when a bound could not be certified or a
certificate is invalid, and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import bounds, certify
from .funspace import BasisSpec, cos_deg, f_alpha, g_beta, musin_hat
from .polycore import gegenbauer_eval

OK, FAILED, USAGE = 0, 1, 2
EXTENSIONS = ("f-alpha", "g-beta", "musin3", "musin4")
PLOT_FUNCTIONS = ("gegenbauer", "f-alpha", "g-beta", "musin3", "musin4")


class UsageError(Exception):
    pass


def _decimal(text: str) -> Decimal:
    try:
        return Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None


def _frac_str(x) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def cmd_kissing(args) -> int:
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    if args.max_degree < 1:
        raise UsageError("--max-degree must be at least 1")
    try:
        spec = BasisSpec.standard(args.dim, 60, args.max_degree, args.ext)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = bounds.cardinality_bound(spec, s=args.grid, digits=args.digits)
    print("basis: " + ", ".join(fn.label for fn in spec.functions))
    for note in res.diagnostics:
        print(note)
    if not res.certified:
        print(f"kissing bound for n={args.dim}: not certified")
        return FAILED
    print(f"c* = {_frac_str(res.c_star)} (~{float(res.c_star):.10g})")
    print(f"kissing number in dimension {args.dim} is at most {res.bound}")
    out = Path(args.out or f"kissing-n{args.dim}.json")
    out.write_text(certify.serialize(res.certificate), encoding="utf-8")
    print(f"certificate written to {out}")
    return OK


def cmd_code_bound(args) -> int:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    if args.precision < Decimal("0.001"):
        raise UsageError("--precision must be at least 0.001")
    template = BasisSpec.standard(args.dim, 60, args.max_degree, ["f-alpha"])
    res = bounds.max_angle_bound(args.dim, args.points, template, precision_deg=args.precision, s=args.grid)
    if res.angle is None:
        print(f"{args.points} points in S^{args.dim - 1}: not excluded below 120.00 degrees")
        return FAILED
    print(f"{args.points} points in S^{args.dim - 1}: minimal angle at most {res.angle:.2f} degrees "
          f"(certified bound {res.result.bound} at that angle, {res.evaluations} LP runs)")
    return OK


def _print_report(rep) -> None:
    print(rep.status)
    if rep.valid:
        print(f"proved bound: {rep.proved_bound}")
        print(f"c* = {_frac_str(rep.c_star)} (~{float(rep.c_star):.12g})")
        print(f"max f on [-1, cos alpha] <= {float(rep.upper):.12g}")
        print(f"margin at t=1: {float(rep.margin_at_one):.6g}")
        if rep.scale != 1:
            print(f"function rescaled by {float(rep.scale):.12g}")
    else:
        print(f"reason: {rep.reason}")
        if rep.proved_bound is not None:
            print(f"proved bound: {rep.proved_bound}")
        if rep.witness_t is not None:
            print(f"witness t = {_frac_str(rep.witness_t)} (~{float(rep.witness_t):.12g}), "
                  f"f(t) = {float(rep.witness_value):.12g}")


def cmd_verify(args) -> int:
    try:
        text = Path(args.path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from None
    try:
        cert = certify.parse(text)
    except certify.CertificateError as exc:
        raise UsageError(f"{args.path}: {exc}") from None
    rep = certify.verify(cert)
    _print_report(rep)
    return OK if rep.valid else FAILED


def cmd_tables(args) -> int:
    certs = certify.builtin_certificates()
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        reports = list(pool.map(certify.verify, certs))
    ok = True
    print("Table 1: kissing numbers")
    print(f"{'n':>4} {'paper':>8} {'proved':>8}  match")
    for cert, rep in zip(certs, reports):
        if cert.alpha_deg != 60:
            continue
        paper = certify.KISSING_TABLE[cert.n]
        match = rep.valid and rep.proved_bound == paper
        ok &= match
        print(f"{cert.n:>4} {paper:>8} {rep.proved_bound if rep.proved_bound is not None else '-':>8}  "
              f"{'yes' if match else 'NO'}")
    print()
    print("Table 2: (n, N, alpha) codes excluded at the printed angle")
    print(f"{'n':>4} {'N':>4} {'alpha':>7} {'proved':>7}  match")
    for cert, rep in zip(certs, reports):
        if cert.alpha_deg == 60:
            continue
        N = cert.claimed_bound + 1
        match = rep.valid and rep.proved_bound <= N - 1
        ok &= match
        proved = rep.proved_bound if rep.proved_bound is not None else "-"
        print(f"{cert.n:>4} {N:>4} {str(cert.alpha_deg):>7} {proved:>7}  {'yes' if match else 'NO'}")
        if not match:
            print(f"      {rep.reason}")
    return OK if ok else FAILED


def _plot_values(args, t: np.ndarray) -> np.ndarray:
    fn = args.function
    if fn == "gegenbauer":
        if args.dim < 2 or args.degree < 0:
            raise UsageError("gegenbauer needs --dim >= 2 and --degree >= 0")
        return gegenbauer_eval(args.dim, args.degree, t)
    if fn == "f-alpha":
        z = cos_deg(args.alpha)
        if not 0 <= z < 1:
            raise UsageError("f-alpha needs 0 < alpha <= 90")
        return f_alpha(z, t)
    if fn == "g-beta":
        cb = cos_deg(args.beta)
        if not cb > 0:
            raise UsageError("g-beta needs 0 < beta < 90")
        return g_beta(cb, t)
    return musin_hat(int(fn[-1]), t)


def cmd_plot(args) -> int:
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    t = np.linspace(-1.0, 1.0, args.samples)
    v = np.asarray(_plot_values(args, t), dtype=float)
    lines = ["t,value"] + [f"{a:.12g},{b:.12g}" for a, b in zip(t, v)]
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphbound", description="LP bounds for spherical codes and kissing numbers")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kissing", help="certified kissing-number bound from an LP search")
    k.add_argument("--dim", type=int, required=True)
    k.add_argument("--max-degree", type=int, default=15)
    k.add_argument("--ext", nargs="*", default=[], choices=EXTENSIONS)
    k.add_argument("--grid", type=int, default=bounds.DEFAULT_GRID)
    k.add_argument("--digits", type=int, default=bounds.DEFAULT_DIGITS)
    k.add_argument("--out", help="certificate path (default kissing-n<dim>.json)")
    k.set_defaults(func=cmd_kissing)

    c = sub.add_parser("code-bound", help="upper bound on the minimal angle of N points")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--points", type=int, required=True)
    c.add_argument("--precision", type=_decimal, default=Decimal("0.01"))
    c.add_argument("--max-degree", type=int, default=15)
    c.add_argument("--grid", type=int, default=bounds.DEFAULT_GRID)
    c.set_defaults(func=cmd_code_bound)

    v = sub.add_parser("verify", help="check a certificate file exactly")
    v.add_argument("path")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", help="verify all built-in certificates against the published tables")
    t.add_argument("--jobs", type=int, default=None)
    t.set_defaults(func=cmd_tables)

    pl = sub.add_parser("plot", help="emit t,value samples of a basis function")
    pl.add_argument("--function", required=True, choices=PLOT_FUNCTIONS)
    pl.add_argument("--dim", type=int, default=4)
    pl.add_argument("--degree", type=int, default=7)
    pl.add_argument("--alpha", type=_decimal, default=Decimal(60))
    pl.add_argument("--beta", type=_decimal, default=Decimal(60))
    pl.add_argument("--samples", type=int, default=400)
    pl.add_argument("--output")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sphbound {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
