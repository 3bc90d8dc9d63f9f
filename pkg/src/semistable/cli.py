"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 unsupported regime (p < 5).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import descriptor, elliptic, ff
from .fibre import FibreError
from .report import ReductionReport, descriptor_report, elliptic_report

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT, errors: list[str] | None = None):
        super().__init__(message)
        self.code = code
        self.errors = errors


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semistable",
                                 description="Galois action on H^1 of a curve from its semistable reduction.")
    sub = ap.add_subparsers(dest="command", required=True)
    e = sub.add_parser("elliptic", help="elliptic curve over Q_p, p >= 5")
    e.add_argument("--p", required=True, type=int, help="residue characteristic")
    e.add_argument("--a", required=True, help="a1,a2,a3,a4,a6 (integers or fractions)")
    e.add_argument("--trace-element", action="append", default=[], metavar="ID")
    e.add_argument("--json", action="store_true")
    e.add_argument("--descriptor-out", metavar="PATH", help="write the fibre descriptor as JSON")
    f = sub.add_parser("fibre", help="fibre descriptor file")
    f.add_argument("--in", dest="path", required=True, metavar="PATH")
    f.add_argument("--trace-element", action="append", default=[], metavar="ID")
    f.add_argument("--json", action="store_true")
    return ap


def _parse_coeffs(text: str) -> list[Fraction]:
    parts = text.split(",")
    if len(parts) != 5:
        raise CliError("--a needs exactly five comma-separated coefficients")
    try:
        return [Fraction(x.strip()) for x in parts]
    except (ValueError, ZeroDivisionError):
        raise CliError(f"--a: cannot parse {text!r} as rationals") from None


def run_elliptic(args) -> ReductionReport:
    p = args.p
    if p < 2 or not ff.is_prime(p):
        raise CliError(f"p = {p} is not prime")
    if p < 5:
        raise CliError("residue characteristic too small (p >= 5 required)", EXIT_UNSUPPORTED)
    coeffs = _parse_coeffs(args.a)
    try:
        rc, d = elliptic.analyse(p, coeffs)
        rep = elliptic_report(p, coeffs, rc, d, args.trace_element)
    except (elliptic.EllipticError, FibreError, ff.FieldError) as exc:
        raise CliError(str(exc)) from None
    if args.descriptor_out:
        with open(args.descriptor_out, "w", encoding="utf-8") as fh:
            fh.write(descriptor.dumps(d))
    return rep


def run_descriptor(args) -> ReductionReport:
    try:
        d = descriptor.load(args.path)
    except OSError as exc:
        raise CliError(f"cannot read {args.path}: {exc.strerror}") from None
    except descriptor.DescriptorError as exc:
        raise CliError("invalid descriptor", errors=exc.errors) from None
    try:
        return descriptor_report(args.path, d, args.trace_element)
    except FibreError as exc:
        raise CliError(str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = run_elliptic(args) if args.command == "elliptic" else run_descriptor(args)
    except CliError as exc:
        if exc.errors is not None:
            json.dump({"error": str(exc), "violations": exc.errors}, sys.stderr, indent=2)
            sys.stderr.write("\n")
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    sys.stdout.write(rep.to_json() if args.json else rep.to_text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
