"""Command-line interface: ``qhp {eval,coeffs,verify,expand,glaisher,limit}``.

Exit status: 0 success, 1 verification failure, 2 usage error,
3 numeric, domain or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from fractions import Fraction

import numpy as np

from . import families as fam
from . import transforms as tf
from .polycore import as_rational, format_rational
from .verify import DEFAULT_Y_SET, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from exc


def _g(v) -> str:
    return f"{float(v):.12g}"


def _emit_rows(header, rows, fmt, out) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    elif fmt == "json":
        out.write(json.dumps([dict(zip(header, r)) for r in rows]) + "\n")
    else:
        widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h))
                  for i, h in enumerate(header)]
        out.write("  ".join(str(h).rjust(w) for h, w in zip(header, widths)) + "\n")
        for r in rows:
            out.write("  ".join(str(c).rjust(w) for c, w in zip(r, widths)) + "\n")


def _member(args) -> fam.FamilyMember:
    return fam.build_member(args.family, args.n, args.N, args.y, args.m, ys=args.ys,
                            q=args.q, p=args.p, z=args.z)


def cmd_eval(args, out) -> int:
    member = _member(args)
    if args.x is not None:
        value = member.value(args.x)
        if args.format == "json":
            out.write(json.dumps({**member.to_dict(), "x": format_rational(args.x),
                                  "value": format_rational(value)}) + "\n")
        else:
            out.write(format_rational(value) + "\n")
    elif args.format == "json":
        out.write(member.to_json() + "\n")
    else:
        out.write(str(member.value) + "\n")
    return EXIT_OK


def cmd_coeffs(args, out) -> int:
    member = _member(args)
    if args.format == "json":
        out.write(member.to_json() + "\n")
    else:
        rows = [[k, c] for k, c in enumerate(member.value.to_list())]
        _emit_rows(["power", "coefficient"], rows, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    y_set = args.y_set if args.y_set else list(DEFAULT_Y_SET)
    reports = run_suite(args.suite, args.n_max, args.N_max, y_set)
    if args.format == "json":
        out.write(json.dumps([r.to_dict() for r in reports], indent=1) + "\n")
    else:
        for r in reports:
            out.write(r.summary() + "\n")
        total = sum(r.total for r in reports)
        passed = sum(r.passed for r in reports)
        out.write(f"{passed}/{total} cases passed\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_expand(args, out) -> int:
    f = tf.resolve_function(args.f)
    n_max = args.n_max
    if n_max is None:
        n_max = f.poly.degree if f.poly is not None and not f.poly.is_zero() else 12
    result: dict = {"f": f.name, "y": format_rational(args.y), "N": args.N,
                    "method": args.method}
    if args.method == "exact":
        if f.poly is None:
            raise UsageError("method exact needs a polynomial f (poly:c0,c1,...)")
        coeffs = tf.expansion_coeffs_exact(f.poly, args.y, args.N, n_max)
        result["a"] = [format_rational(c) for c in coeffs]
        rows = [[n, format_rational(c)] for n, c in enumerate(coeffs)]
    else:
        series = tf.expansion_coeffs_quadrature(f, args.y, args.N, n_max)
        result["a"] = [_g(v) for v in series.values]
        rows = [[n, _g(v)] for n, v in enumerate(series.values)]
        if f.poly is not None:
            exact = tf.expansion_coeffs_exact(f.poly, args.y, args.N, n_max)
            dev = max(abs(float(series[k]) - float(exact[k])) for k in range(n_max + 1))
            result["max_deviation_from_exact"] = _g(dev)
        else:
            xs = np.linspace(-1, 1, 41)
            recon = tf.reconstruct_float(series.values, args.y, args.N, xs)
            err = np.max(np.abs(recon - f(xs)))
            result["reconstruction_error"] = _g(err)
            result["reconstruction_grid"] = "-1:1:41"
    if args.format == "json":
        out.write(json.dumps(result) + "\n")
    elif args.format == "csv":
        _emit_rows(["n", "a_n"], rows, "csv", out)
    else:
        out.write("a = [" + ", ".join(result["a"]) + "]\n")
        for key in ("max_deviation_from_exact", "reconstruction_error"):
            if key in result:
                out.write(f"{key.replace('_', ' ')}: {result[key]}\n")
    return EXIT_OK


def cmd_glaisher(args, out) -> int:
    grid = tf.parse_grid(args.x)
    table = tf.figure1_table(float(args.y), args.N, grid)
    text = table.to_json() + "\n" if args.format == "json" else table.to_csv()
    if args.out in (None, "-"):
        out.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_limit(args, out) -> int:
    limit_value = fam.hermite2(args.n, args.y)(args.x)
    rows = []
    for N in args.N:
        value = fam.qhp_explicit(args.n, N, args.y)(args.x)
        rows.append([N, format_rational(value), format_rational(abs(value - limit_value))])
    rows.append(["inf", format_rational(limit_value), "0"])
    _emit_rows(["N", "H_n(x,y;N)", "gap"], rows, args.format, out)
    return EXIT_OK


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=fam.FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--y", type=_rational, default=Fraction(0))
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--ys", type=_rational_list, default=None,
                   help="comma list for qhp_multivar; entry s pairs with D^s")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--z", type=_rational, default=Fraction(0))
    p.add_argument("--x", type=_rational, default=None, help="evaluate at this point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def fmt(p, choices=("text", "json", "csv"), default="text"):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("eval", help="print a family member or its value at x")
    _add_family_flags(p)
    fmt(p, ("text", "json"))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("coeffs", help="list exact coefficients of a family member")
    _add_family_flags(p)
    fmt(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("verify", help="run exact identity suites over a grid")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--N-max", type=int, default=4)
    p.add_argument("--y-set", type=_rational_list, default=None)
    fmt(p, ("text", "json"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="expansion coefficients in H_n(x,-|y|;N)")
    p.add_argument("--f", required=True, help="gauss, expsq or poly:c0,c1,...")
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--method", choices=("exact", "quadrature"), default="exact")
    fmt(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("glaisher", help="tabulate F(x,y;N) and its large-N limit")
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--N", type=_int_list, default=[1, 2, 4, 8, 16, 32])
    p.add_argument("--x", default="-3:3:121", help="lo:hi:count")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    fmt(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_glaisher)

    p = sub.add_parser("limit", help="H_n(x,y;N) against its N -> inf limit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", type=_rational, required=True)
    p.add_argument("--x", type=_rational, default=Fraction(0))
    p.add_argument("--N", type=_int_list, default=[1, 2, 4, 8, 16])
    fmt(p)
    p.set_defaults(func=cmd_limit)
    return parser


def _validate(args) -> None:
    for name in ("n", "n_max"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be >= 0")
    for name in ("N", "N_max"):
        v = getattr(args, name, None)
        values = v if isinstance(v, list) else [v]
        if any(x is not None and x < 1 for x in values):
            raise UsageError(f"--{name.replace('_', '-')} must be >= 1")


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--x -3:3:121`` into ``--x=-3:3:121`` so argparse keeps the value."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _validate(args)
        return args.func(args, out)
    except tf.DomainError as exc:
        print(f"qhp: domain error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (tf.QuadratureError, ArithmeticError, OSError) as exc:
        print(f"qhp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, TypeError) as exc:
        print(f"qhp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
