"""Command-line frontend.

Commands: cascade, generators {adjoint|rep|conj}, verify, eval.  All
randomized checks take --seed (default 0) and --trials (default 25), so
repeated runs with the same arguments produce byte-identical JSON.
Exit codes: 0 success, 2 invalid input, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .adjoint import AdjointConstruction
from .exprparse import ParseError, parse_expression
from .genrep import RepConstruction, RepValidationError, load_rep
from .groupconj import ConjugationConstruction
from .liealg import chevalley_constants
from .projector import verify_invariance
from .rootsystem import InvalidDynkinDatum, build_root_system, kostant_cascade
from .symfield import DenominatorSet, SingularPointError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNVERIFIED = 3


def _emit(payload, fmt, text_lines=None, elapsed=None):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines or []:
            print(line)
        if elapsed is not None:
            print(f"elapsed: {elapsed:.3f}s")


def cmd_cascade(args):
    try:
        if args.type is None or args.rank is None:
            raise InvalidDynkinDatum("--type and --rank are required")
        rs = build_root_system(args.type, args.rank)
    except InvalidDynkinDatum as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    cascade = kostant_cascade(rs)
    payload = cascade.to_json()
    lines = [
        f"cascade of {args.type}{args.rank}: {len(cascade.entries)} roots"
    ]
    for i, xi in enumerate(cascade.entries):
        lines.append(f"  xi_{i + 1} = {list(xi)}")
    _emit(payload, args.format, lines)
    return EXIT_OK


def _generator_payload(gs, elapsed, fmt):
    payload = gs.to_json()
    lines = [f"{len(gs)} generators"]
    for name, elem in gs.entries:
        lines.append(f"  {name} = {elem}")
    lines.append(
        "verification: "
        + ("all checks pass" if gs.all_verified() else "FAILED checks present")
    )
    _emit(payload, fmt, lines, elapsed=elapsed)
    return EXIT_OK if gs.all_verified() else EXIT_UNVERIFIED


def cmd_generators(args):
    t0 = time.monotonic()
    try:
        if args.kind == "adjoint":
            if args.type is None or args.rank is None:
                raise InvalidDynkinDatum("--type and --rank are required")
            basis = chevalley_constants(build_root_system(args.type, args.rank))
            gs = AdjointConstruction(basis).generator_set()
        elif args.kind == "conj":
            if args.n is None:
                raise InvalidDynkinDatum("--n is required")
            gs = ConjugationConstruction(args.n).generator_set()
        else:
            if args.file is None:
                raise InvalidDynkinDatum("--file is required")
            with open(args.file) as fh:
                rep = load_rep(json.load(fh))
            gs = RepConstruction(rep).generator_set()
    except (InvalidDynkinDatum, RepValidationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return _generator_payload(gs, time.monotonic() - t0, args.format)


def _verify_universe(args):
    if args.n is not None:
        c = ConjugationConstruction(args.n)
        return c.dset, c.simple_derivations()
    if args.type is None or args.rank is None:
        raise InvalidDynkinDatum("--type and --rank (or --n) are required")
    basis = chevalley_constants(build_root_system(args.type, args.rank))
    c = AdjointConstruction(basis)
    return c.dset, c.simple_derivations()


def cmd_verify(args):
    try:
        dset, family = _verify_universe(args)
    except InvalidDynkinDatum as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if args.expr:
        sources = list(args.expr)
    elif args.file:
        try:
            with open(args.file) as fh:
                sources = [ln.strip() for ln in fh if ln.strip()]
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INVALID
    else:
        print("error: provide --expr or --file", file=sys.stderr)
        return EXIT_INVALID
    results = []
    ok = True
    for src in sources:
        try:
            elem = parse_expression(src, dset)
        except ParseError as e:
            print(f"error: cannot parse {src!r}: {e}", file=sys.stderr)
            return EXIT_INVALID
        report = verify_invariance(elem, family)
        verdict = all(c["status"] == "pass" for c in report["checks"])
        ok = ok and verdict
        results.append(
            {
                "expression": src,
                "status": "pass" if verdict else "fail",
                "checks": report["checks"],
            }
        )
    payload = {"results": results}
    lines = [f"{r['expression']}: {r['status']}" for r in results]
    _emit(payload, args.format, lines)
    return EXIT_OK if ok else EXIT_UNVERIFIED


def cmd_eval(args):
    try:
        dset, _family = _verify_universe(args)
        elem = parse_expression(args.expr, dset)
        point = {
            k: Fraction(str(v)) for k, v in json.loads(args.point).items()
        }
        value = elem.evaluate(point)
    except (InvalidDynkinDatum, ParseError, SingularPointError,
            ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    payload = {
        "expression": args.expr,
        "value": {"num": str(value.numerator), "den": str(value.denominator)},
    }
    _emit(payload, args.format, [f"{args.expr} = {value}"])
    return EXIT_OK


def _common(sub):
    sub.add_argument("--type", help="Dynkin series letter (A, B, C, D, E, F, G)")
    sub.add_argument("--rank", type=int, help="rank of the root system")
    sub.add_argument("--n", type=int, help="matrix size for conjugation")
    sub.add_argument("--format", choices=("json", "text"), default="json")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--trials", type=int, default=25)
    sub.add_argument("--degree-cap", type=int, default=6)
    sub.add_argument("--iter-cap", type=int, default=None)
    sub.add_argument("--jobs", type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uproj",
        description="Symbolic projectors onto unipotent-invariant fields",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("cascade", help="orthogonal maximal-root chain")
    _common(p)
    p.set_defaults(func=cmd_cascade)

    p = subs.add_parser("generators", help="emit a verified generator set")
    p.add_argument("kind", choices=("adjoint", "rep", "conj"))
    p.add_argument("--file", help="representation JSON file (for rep)")
    _common(p)
    p.set_defaults(func=cmd_generators)

    p = subs.add_parser("verify", help="check expressions for invariance")
    p.add_argument("--expr", action="append", help="expression (repeatable)")
    p.add_argument("--file", help="file with one expression per line")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("eval", help="evaluate an expression at a point")
    p.add_argument("--expr", required=True)
    p.add_argument("--point", required=True, help='JSON object {"E_1": "3", ...}')
    _common(p)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
