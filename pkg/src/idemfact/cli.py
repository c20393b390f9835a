"""Command-line front end.

    idemfact factorize --algebra set --n 4 --map "1 1 2 2" [--json] [--quiet]
    idemfact factorize --algebra vec --p 2 --dim 2 --matrix "0 1; 0 0"
    idemfact verify    <algebra flags> --map ... --factors "0 0 2 2|1 1 2 1"
    idemfact oracle    <algebra flags> --map ... [--max-states N]

Exit codes: 0 success, 2 malformed input, 3 input not singular, 4 a check
failed or an internal invariant broke, 5 oracle indeterminate.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import SET, VEC, Algebra, rank_endo
from .errors import AlgebraError, InvariantError, MalformedInputError, NotSingularError
from .factorization import factorize, verify_factorization
from .instances import format_endo, is_singular, parse_endo
from .oracle import OracleBudget, Reach, idempotent_generated

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_NOT_SINGULAR = 3
EXIT_CHECK_FAILED = 4
EXIT_INDETERMINATE = 5


class _Usage(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", choices=[SET, VEC], required=True)
    common.add_argument("--n", type=int, help="set size (--algebra set)")
    common.add_argument("--p", type=int, help="prime modulus (--algebra vec)")
    common.add_argument("--dim", type=int, help="dimension (--algebra vec)")
    common.add_argument("--map", help='image list, e.g. "1 1 2 2"')
    common.add_argument("--matrix", help='rows separated by ";", e.g. "0 1; 0 0"')
    common.add_argument("--json", action="store_true", help="emit the structured document")
    common.add_argument("--quiet", action="store_true", help="print the checks only")

    parser = argparse.ArgumentParser(prog="idemfact", description="Factor singular endomorphisms into idempotents.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("factorize", parents=[common], help="emit an idempotent factorization")
    verify = sub.add_parser("verify", parents=[common], help="check a supplied factor list")
    verify.add_argument("--factors", required=True, help='factors separated by "|", in application order')
    oracle = sub.add_parser("oracle", parents=[common], help="brute-force reachability check")
    oracle.add_argument("--max-states", type=int, default=OracleBudget().max_bfs_states)
    return parser


def _algebra(args) -> Algebra:
    if args.algebra == SET:
        if args.n is None:
            raise _Usage("--algebra set needs --n")
        return Algebra.finite_set(args.n)
    if args.p is None or args.dim is None:
        raise _Usage("--algebra vec needs --p and --dim")
    return Algebra.vector_space(args.p, args.dim)


def _input_text(args) -> str:
    want, other = ("map", "matrix") if args.algebra == SET else ("matrix", "map")
    if getattr(args, other) is not None:
        raise _Usage(f"--{other} does not apply to --algebra {args.algebra}")
    text = getattr(args, want)
    if text is None:
        raise _Usage(f"--{want} is required")
    return text


def algebra_dict(alg: Algebra) -> dict:
    if alg.kind == SET:
        return {"kind": SET, "n": alg.n}
    return {"kind": VEC, "p": alg.p, "d": alg.d}


def document(a, factors=None, checks=None, stats=None, oracle=None) -> dict:
    """Build the output document; key order is part of the format."""
    doc = {
        "algebra": algebra_dict(a.algebra),
        "input": format_endo(a),
        "rank": rank_endo(a),
        "factors": None if factors is None else [format_endo(f) for f in factors],
        "checks": None if checks is None else checks.as_dict(),
        "stats": stats,
    }
    if oracle is not None:
        doc["oracle"] = {"reachable": oracle.value if oracle is Reach.INDETERMINATE else oracle is Reach.REACHABLE}
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2)


def _word(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "NO"
    return str(v)


def _render(doc: dict, quiet: bool) -> str:
    lines = []
    if not quiet:
        alg = doc["algebra"]
        name = f"finite set, n={alg['n']}" if alg["kind"] == SET else f"GF({alg['p']})^{alg['d']}"
        lines.append(f"algebra: {name}")
        lines.append(f"input:   {doc['input']}")
        lines.append(f"rank:    {doc['rank']}")
        if doc["factors"] is not None:
            lines.append("factors (applied left to right):")
            lines.extend(f"  {i}. {f}" for i, f in enumerate(doc["factors"], 1))
    if doc["checks"] is not None:
        lines.append("checks:  " + " ".join(f"{k}={_word(v)}" for k, v in doc["checks"].items()))
    if doc["stats"] is not None and not quiet:
        lines.append("stats:   " + " ".join(f"{k}={_word(v)}" for k, v in doc["stats"].items()))
    if "oracle" in doc:
        lines.append(f"oracle:  reachable={_word(doc['oracle']['reachable'])}")
    return "\n".join(lines)


def _emit(doc, args, out):
    print(dumps(doc) if args.json else _render(doc, args.quiet), file=out)


def _factorize(args, a, out):
    report = factorize(a)
    stats = {
        "chain_length": report.chain_length,
        "transposition_count": report.transposition_count,
        "factor_count": len(report.factors),
    }
    _emit(document(a, report.factors, report.checks, stats), args, out)
    return EXIT_OK if report.checks.ok else EXIT_CHECK_FAILED


def _verify(args, a, out, err):
    factors = []
    for i, block in enumerate(args.factors.split("|")):
        try:
            factors.append(parse_endo(a.algebra, block))
        except MalformedInputError as exc:
            raise MalformedInputError(f"factor {i + 1}: {exc.reason}", exc.position) from None
    checks = verify_factorization(a, factors)
    stats = {"chain_length": None, "transposition_count": None, "factor_count": len(factors)}
    _emit(document(a, factors, checks, stats), args, out)
    if not checks.ok:
        failed = ", ".join(k for k, v in checks.as_dict().items() if not v)
        print(f"idemfact: verification failed: {failed}", file=err)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _oracle(args, a, out, err):
    verdict = idempotent_generated(a, OracleBudget(max_bfs_states=args.max_states))
    _emit(document(a, oracle=verdict), args, out)
    if verdict is Reach.INDETERMINATE:
        print("idemfact: oracle budget exhausted, result indeterminate", file=err)
        return EXIT_INDETERMINATE
    if verdict is Reach.UNREACHABLE:
        print("idemfact: [oracle] singular input not generated by idempotents of its rank", file=err)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        alg = _algebra(args)
        a = parse_endo(alg, _input_text(args))
    except (_Usage, AlgebraError, MalformedInputError) as exc:
        print(f"idemfact: {exc}", file=err)
        return EXIT_MALFORMED
    if not is_singular(a):
        print("idemfact: input is an automorphism", file=err)
        return EXIT_NOT_SINGULAR
    try:
        if args.command == "factorize":
            return _factorize(args, a, out)
        if args.command == "verify":
            return _verify(args, a, out, err)
        return _oracle(args, a, out, err)
    except MalformedInputError as exc:
        print(f"idemfact: {exc}", file=err)
        return EXIT_MALFORMED
    except (InvariantError, NotSingularError) as exc:
        print(f"idemfact: internal invariant violated: {exc}", file=err)
        return EXIT_CHECK_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
