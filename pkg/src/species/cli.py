"""Command-line front end.

Subcommands:
    count      size of the structure set on a given label set
    series     counts and coefficients of an expression up to an order
    enumerate  list every structure on a label set
    transport  relabel a structure (JSON in, JSON or text out)
    solve      series of a name defined in a definitions file
    verify     run the built-in identity suite

Exit codes: 0 success, 1 parse/validation failure (also a failed verify run),
2 non-integer or negative count, 3 enumeration budget exceeded, 4 label-set
mismatch in transport.
"""

import argparse
import json
import re
import sys
from pathlib import Path

from .enumerator import DEFAULT_BUDGET, enumerate_structures, transport
from .errors import (
    BudgetExceeded,
    DomainMismatch,
    DuplicateName,
    IllFoundedEquation,
    NonIntegerCount,
    NonzeroConstantTerm,
    NotABijection,
    OrderExceeded,
    ParseError,
    RecursionGuard,
    UnboundName,
)
from .expr import Name, RESERVED
from .identities import SUITE_NOTE, run_suite
from .parser import parse_defs, parse_expr
from .semantics import DEFAULT_ORDER, egf_of
from .structures import Bijection, check_label, decode_structure

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_SIZE_RE = re.compile(r"\d+")


def _load_env(path):
    if path is None:
        return None
    return parse_defs(Path(path).read_text(encoding="utf-8"))


def _parse_labels(text):
    """A label argument: either a size n (meaning 1..n) or a comma list."""
    text = text.strip()
    if not text:
        return []
    if _SIZE_RE.fullmatch(text):
        return list(range(1, int(text) + 1))
    return [check_label(tok.strip()) for tok in text.split(",")]


def _parse_bijection(text):
    mapping = {}
    text = text.strip()
    if not text:
        return Bijection({})
    for part in text.split(","):
        src, arrow, dst = part.partition("->")
        if not arrow:
            raise ParseError(f"bijection entry {part.strip()!r} is not of the form a->b")
        mapping[check_label(src.strip())] = check_label(dst.strip())
    return Bijection(mapping)


def _checked_count(series, n):
    value = series.count(n)
    if value < 0:
        raise NonIntegerCount(f"count at n={n} is negative: {value}")
    return value


def _print_series(series, as_json):
    counts = [_checked_count(series, n) for n in range(series.order + 1)]
    if as_json:
        payload = {
            "order": series.order,
            "counts": counts,
            "coefficients": [str(series.coefficient(n)) for n in range(series.order + 1)],
        }
        print(json.dumps(payload))
    else:
        for n, value in enumerate(counts):
            print(n, value, series.coefficient(n))


def _cmd_count(args):
    env = _load_env(args.defs)
    expr = parse_expr(args.expr)
    labels = _parse_labels(args.labels)
    n = len(labels)
    value = _checked_count(egf_of(expr, env, order=n), n)
    if args.json:
        print(json.dumps({"n": n, "count": value}))
    else:
        print(value)
    return 0


def _cmd_series(args):
    env = _load_env(args.defs)
    expr = parse_expr(args.expr)
    _print_series(egf_of(expr, env, order=args.order), args.json)
    return 0


def _cmd_enumerate(args):
    env = _load_env(args.defs)
    expr = parse_expr(args.expr)
    labels = _parse_labels(args.labels)
    structures = enumerate_structures(expr, env, labels, budget=args.budget)
    if args.json:
        print(json.dumps([s.to_json() for s in structures]))
    else:
        for s in structures:
            print(s.render())
        print(len(structures))
    return 0


def _cmd_transport(args):
    env = _load_env(args.defs)
    expr = parse_expr(args.expr)
    bijection = _parse_bijection(args.bijection)
    text = args.structure if args.structure is not None else sys.stdin.read()
    try:
        obj = json.loads(text)
    except ValueError as exc:
        raise ParseError(f"structure is not valid JSON: {exc}") from exc
    moved = transport(expr, env, decode_structure(obj), bijection)
    if args.json:
        print(json.dumps(moved.to_json()))
    else:
        print(moved.render())
    return 0


def _cmd_solve(args):
    name = args.name.strip()
    if not _IDENT_RE.fullmatch(name):
        raise ParseError(f"{name!r} is not a name; solve takes a defined name")
    if name in RESERVED:
        raise ParseError(f"'{name}' is a built-in species, not a defined name")
    env = _load_env(args.defs)
    _print_series(egf_of(Name(name), env, order=args.order), args.json)
    return 0


def _cmd_verify(args):
    env = _load_env(args.defs)
    names = set(args.case) if args.case else None
    reports = run_suite(order=args.order, names=names, extra_env=env)
    if names:
        missing = names - {r.name for r in reports}
        if missing:
            raise ParseError(
                "no such case: " + ", ".join(sorted(missing))
            )
    ok = all(r.passed for r in reports)
    if args.json:
        payload = {
            "note": SUITE_NOTE,
            "ok": ok,
            "cases": [r.to_json() for r in reports],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"# {SUITE_NOTE}")
        for r in reports:
            if r.passed:
                print(f"pass  {r.name}")
            else:
                print(
                    f"FAIL  {r.name}  ({r.witness}: "
                    f"lhs={r.lhs_count}, rhs={r.rhs_count})"
                )
        failed = sum(1 for r in reports if not r.passed)
        print(f"{len(reports) - failed} passed, {failed} failed")
    return 0 if ok else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="species",
        description="Count, list, and relabel the structures of a species expression.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, defs=True, order=None, as_json=True):
        if defs:
            p.add_argument("--defs", metavar="FILE", default=None,
                           help="definitions file of name = expression lines")
        if order is not None:
            p.add_argument("--order", type=int, default=order,
                           help="truncation order")
        if as_json:
            p.add_argument("--json", action="store_true",
                           help="machine-readable output")

    p = sub.add_parser("count", help="number of structures on a label set")
    p.add_argument("expr")
    p.add_argument("labels", help="a size n (labels 1..n) or a comma list")
    common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("series", help="counting series of an expression")
    p.add_argument("expr")
    common(p, order=DEFAULT_ORDER)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("enumerate", help="list every structure on a label set")
    p.add_argument("expr")
    p.add_argument("labels", help="a size n (labels 1..n) or a comma list")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="refuse to list more than this many structures")
    common(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("transport",
                       help="relabel a structure along a bijection")
    p.add_argument("expr")
    p.add_argument("bijection", help="comma list of a->b entries")
    p.add_argument("structure", nargs="?", default=None,
                   help="structure as JSON (read from stdin when omitted)")
    common(p)
    p.set_defaults(func=_cmd_transport)

    p = sub.add_parser("solve",
                       help="series of a name from a definitions file")
    p.add_argument("name")
    common(p, order=DEFAULT_ORDER)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="run the built-in identity suite")
    p.add_argument("--case", action="append", default=None, metavar="NAME",
                   help="run only this case (repeatable)")
    p.add_argument("--order", type=int, default=None,
                   help="cap both series order and enumeration size")
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold that into the parse-failure
        # code so 2 stays reserved for count integrality.
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except NonIntegerCount as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (
        ParseError,
        DuplicateName,
        UnboundName,
        NonzeroConstantTerm,
        IllFoundedEquation,
        NotABijection,
        OrderExceeded,
        RecursionGuard,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
