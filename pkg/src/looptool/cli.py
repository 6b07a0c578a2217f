"""Command-line front end.

Subcommands: `avg` (exact sums over roots of unity), `knot` (tabulate cover
invariants for the bundled knots or an NZ+diagram file), `reconstruct`
(recover the cover polynomial from sequence values), `verify` (property
suites).  Exit codes: 1 parse/usage, 2 mathematical domain error, 3
cross-method disagreement, 4 singular system, 5 holdout mismatch.

Default working precision for numeric checks is 100 digits, overridable by
--prec or the LOOPTOOL_PREC environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

import mpmath

from .errors import (CrossCheckError, HoldoutMismatchError, LoopToolError,
                     MathDomainError, ParseError, SingularError)
from .knots import KnotFixture, fixture
from .laurent import LaurentPolynomial, RationalFunction
from .numberfield import FieldElement, NumberField, QQ, parse_rational
from .powersum import reconstruct_p
from .rootsum import av_exact
from .verify import SUITES, run_suites


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _default_precision() -> int:
    env = os.environ.get("LOOPTOOL_PREC")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParseError(f"bad LOOPTOOL_PREC value {env!r}")
    return 100


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="looptool",
                     description="exact loop invariants of cyclic covers")
    parser.add_argument("--prec", type=int, default=None,
                        help="working precision in digits (default 100 or "
                             "LOOPTOOL_PREC)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_avg = sub.add_parser("avg", help="exact sum of a rational function "
                                       "over the n-th roots of unity")
    p_avg.add_argument("--f", required=True, help="rational-function JSON file")
    p_avg.add_argument("--n", required=True, type=int)
    p_avg.add_argument("--numeric-check", type=int, default=None, metavar="DIGITS")

    p_knot = sub.add_parser("knot", help="tabulate cover invariants")
    p_knot.add_argument("--knot", required=True,
                        help="4_1, 5_2, or a path to an NZ+diagram JSON file")
    p_knot.add_argument("--loop", required=True, type=int, choices=(2, 3))
    p_knot.add_argument("--nmax", required=True, type=int)
    p_knot.add_argument("--mode", default="all",
                        choices=("average", "closed", "series", "all"))

    p_rec = sub.add_parser("reconstruct", help="recover a cover polynomial "
                                               "from sequence values")
    p_rec.add_argument("--values", required=True, help="CSV of n,coords...")
    p_rec.add_argument("--roots", required=True, help="roots JSON file")
    p_rec.add_argument("--ell", required=True, type=int)
    p_rec.add_argument("--r", required=True, type=int)
    p_rec.add_argument("--holdout", type=int, default=0,
                       help="require at least this many validation rows")
    p_rec.add_argument("--out", default=None, help="output polynomial path")

    p_ver = sub.add_parser("verify", help="run property suites")
    p_ver.add_argument("--suite", default="all",
                       choices=tuple(SUITES) + ("all",))
    p_ver.add_argument("--seed", type=int, default=0)
    return parser


# ---------------------------------------------------------------------------
# avg
# ---------------------------------------------------------------------------

def _load_avg_input(path):
    """A rational function of t, possibly with 1/n-graded delta-power terms.

    Plain form: {"field": {...}, "num": {...}, "den": {...}, "unit": ...}.
    Phi form: {"field": {...}, "delta": {...}, "delta_powers":
    {"k": [c0, c1, c2...]}, "unit": ...}; coefficient i multiplies n^-i.
    """
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    field = NumberField.from_json(obj["field"]) if "field" in obj else QQ
    unit = obj.get("unit") in ("sqrt(-3)", "sqrt-3", True)

    if "delta_powers" in obj:
        delta = LaurentPolynomial.from_json(obj["delta"], field)
        table = {}
        for k, coeffs in obj["delta_powers"].items():
            table[int(k)] = [FieldElement.from_json(c, field) for c in coeffs]

        def build(n: int) -> RationalFunction:
            kmax = max(table)
            num = LaurentPolynomial.zero(field)
            inv_n = Fraction(1, n)
            for k, coeffs in table.items():
                c = field.zero()
                scale = Fraction(1)
                for ci in coeffs:
                    c = c + ci * scale
                    scale *= inv_n
                num = num + delta ** (kmax - k) * c
            return RationalFunction(num, delta ** kmax)

        return build, field, unit
    if "num" not in obj or "den" not in obj:
        raise ParseError("rational-function file needs num/den or delta_powers")
    rf = RationalFunction.from_json(obj, field)
    return (lambda n: rf), field, unit


def _format_value(value: FieldElement, unit: bool) -> str:
    if value.is_rational():
        text = str(value.coords[0])
    else:
        text = ",".join(str(c) for c in value.coords)
    return text + (" (unit sqrt(-3))" if unit else "")


def cmd_avg(args) -> int:
    if args.n < 1:
        raise ParseError("--n must be >= 1")
    build, field, unit = _load_avg_input(args.f)
    rf = build(args.n)
    value = av_exact(rf, args.n)
    print(_format_value(value, unit))
    if args.numeric_check:
        digits = args.numeric_check
        with mpmath.workdps(digits + 10):
            brute = mpmath.mpc(0)
            for k in range(args.n):
                w = mpmath.e ** (2j * mpmath.pi * k / args.n)
                num = sum(c.to_mpc(digits) * w ** e for e, c in rf.num.coeffs.items())
                den = sum(c.to_mpc(digits) * w ** e for e, c in rf.den.coeffs.items())
                brute += num / den
            exact_c = value.to_mpc(digits)
            err = abs(brute - exact_c)
            print(f"numeric check: {mpmath.nstr(brute, min(digits, 30))} "
                  f"(|err| = {mpmath.nstr(err, 3)})")
            if err > mpmath.mpf(10) ** (2 - digits) * (1 + abs(brute)):
                raise CrossCheckError("numeric check disagrees with exact value")
    return 0


# ---------------------------------------------------------------------------
# knot
# ---------------------------------------------------------------------------

def _knot_methods(fx: KnotFixture, mode: str, ell: int):
    methods = {"average": lambda n: fx.phi_average(ell, n)}
    if hasattr(fx, "phi_closed"):
        methods["closed"] = lambda n: fx.phi_closed(ell, n)
        methods["series"] = lambda n: fx.series_value(ell, n)
    if mode == "all":
        return methods
    if mode not in methods:
        raise ParseError(f"mode {mode!r} not available for {fx.name}")
    return {mode: methods[mode]}


def cmd_knot(args) -> int:
    if args.nmax < 1:
        raise ParseError("--nmax must be >= 1")
    if args.knot in ("4_1", "5_2"):
        fx = fixture(args.knot)
        methods = _knot_methods(fx, args.mode, args.loop)
        primary = "average" if "average" in methods else next(iter(methods))
        for n in range(1, args.nmax + 1):
            values = {name: fn(n) for name, fn in methods.items()}
            base = values[primary]
            for name, v in values.items():
                if v != base:
                    print(f"MISMATCH at n = {n}: {primary} != {name}",
                          file=sys.stderr)
                    raise CrossCheckError(f"cross-method disagreement at n = {n}")
            print(f"{n},{_format_value(base.value, base.sqrt_m3)}")
        return 0
    return _knot_from_file(args)


def _knot_from_file(args) -> int:
    from .diagrams import FeynmanDiagram, VertexFactorTable, loop_invariant
    from .nzdata import TwistedNZData
    with open(args.knot) as fh:
        obj = json.load(fh)
    if "nz" not in obj or "diagrams" not in obj:
        raise ParseError("knot file needs 'nz' and 'diagrams' sections")
    data = TwistedNZData.from_json(obj["nz"])
    diagrams = []
    for d in obj["diagrams"]:
        diagrams.append((FeynmanDiagram.from_json(d),
                         VertexFactorTable.from_json(d, data.field)))
    for n in range(1, args.nmax + 1):
        value = loop_invariant(data, n, diagrams, args.loop)
        print(f"{n},{_format_value(value, False)}")
    return 0


# ---------------------------------------------------------------------------
# reconstruct
# ---------------------------------------------------------------------------

def _load_values_csv(path, field: NumberField):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            unit = cells[-1].strip() == "sqrt(-3)"
            if unit:
                cells = cells[:-1]
            n = int(cells[0])
            coords = [parse_rational(c) for c in cells[1:]]
            rows.append((n, field.element(coords), unit))
    if not rows:
        raise ParseError("no value rows found")
    units = {u for _, _, u in rows}
    if len(units) > 1:
        raise ParseError("mixed units in value rows")
    return [(n, v) for n, v, _ in rows], units.pop()


def cmd_reconstruct(args) -> int:
    with open(args.roots) as fh:
        roots_obj = json.load(fh)
    field = NumberField.from_json(roots_obj["field"])
    roots = [FieldElement.from_json(x, field) for x in roots_obj["roots"]]
    if len(roots) != args.r:
        raise ParseError(f"roots file has {len(roots)} roots, --r says {args.r}")
    values, unit = _load_values_csv(args.values, field)
    from math import comb
    needed = (args.ell - 1) * comb(args.r + 2 * args.ell - 2, args.r)
    holdout = len(values) - needed
    if holdout < args.holdout:
        raise ParseError(f"need {needed} + {args.holdout} values, "
                         f"got {len(values)}")
    poly = reconstruct_p(values, roots, args.ell, args.r)
    out_path = args.out or (args.values + ".poly.json")
    obj = poly.to_json()
    if unit:
        obj["unit"] = "sqrt(-3)"
    with open(out_path, "w") as fh:
        json.dump(obj, fh, indent=1)
    print(f"recovered {len(poly.terms)} coefficients from {needed} values; "
          f"{holdout} holdout rows validated exactly")
    print(f"wrote {out_path}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args, prec: int) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = run_suites(names, seed=args.seed, prec=min(prec, 60))
    failed = [r for r in results if not r[1]]
    for name, ok, repro in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            print(f"      repro: {repro}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        prec = args.prec if args.prec is not None else _default_precision()
        if prec < 1:
            raise ParseError("--prec must be >= 1")
        if args.command == "avg":
            return cmd_avg(args)
        if args.command == "knot":
            return cmd_knot(args)
        if args.command == "reconstruct":
            return cmd_reconstruct(args)
        if args.command == "verify":
            return cmd_verify(args, prec)
        raise ParseError(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MathDomainError as exc:
        print(f"math domain error: {exc}", file=sys.stderr)
        return 2
    except CrossCheckError as exc:
        print(f"cross-check failure: {exc}", file=sys.stderr)
        return 3
    except HoldoutMismatchError as exc:
        print(f"holdout mismatch: {exc}", file=sys.stderr)
        return 5
    except SingularError as exc:
        print(f"singular system: {exc}", file=sys.stderr)
        return 4
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
