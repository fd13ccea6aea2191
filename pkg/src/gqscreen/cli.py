"""Command line entry point: ``gqscreen <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import data_path, read_tsv, write_tsv
from .errors import ResourceLimitError
from .gq import GqOrder, enumerate_orders, infeasibility_reason, line_count, point_count, srg_params
from .permaction import act, parse_action, parse_group, subdegrees, subdegrees_by_pairs, two_point_stabiliser_orbits
from .screen import OUTPUT_COLUMNS, UNRESOLVED, row_record, rows_from_records, screen_candidate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
BUNDLED_TABLES = {"smalldegree", "rudvalis", "imprimitive"}


class UsageError(Exception):
    pass


def emit(records: list[dict[str, str]], columns: list[str], fmt: str, out=None) -> None:
    """Write flat string records as TSV or JSON; both carry the same data."""
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps([{c: r.get(c, "") for c in columns} for r in records], indent=2) + "\n")
    else:
        out.write(write_tsv(records, columns))


def parse_records(text: str, fmt: str) -> list[dict[str, str]]:
    """Inverse of :func:`emit`."""
    if fmt == "json":
        return json.loads(text)
    import csv
    import io

    return list(csv.DictReader(io.StringIO(text), delimiter="\t"))


# ---------------------------------------------------------------------------
# params

PARAM_COLUMNS = ["s", "t", "feasible", "reason", "points", "lines", "k", "lambda", "mu"]


def params_record(order: GqOrder) -> dict[str, str]:
    reason = infeasibility_reason(order)
    rec = {
        "s": str(order.s),
        "t": str(order.t),
        "feasible": "yes" if reason is None else "no",
        "reason": reason or "",
        "points": str(point_count(order)),
        "lines": str(line_count(order)),
    }
    if reason is None:
        p = srg_params(order)
        rec.update(k=str(p.k), **{"lambda": str(p.lam)}, mu=str(p.mu))
    return rec


def cmd_params(args) -> int:
    if args.enumerate is not None:
        if args.order:
            raise UsageError("give either s t or --enumerate v, not both")
        if args.enumerate < 1:
            raise UsageError("v must be positive")
        records = [params_record(o) for o in enumerate_orders(args.enumerate)]
    else:
        if len(args.order) != 2:
            raise UsageError("params needs two integers s t, or --enumerate v")
        s, t = args.order
        if s < 1 or t < 1:
            raise UsageError("s and t must be positive")
        records = [params_record(GqOrder(s, t))]
    emit(records, PARAM_COLUMNS, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# subdegrees

SUBDEGREE_COLUMNS = ["group", "action", "degree", "subdegrees", "provenance", "two_point", "two_point_orbits"]


def _point(text: str, degree: int) -> int:
    if text.lower() in ("inf", "infinity"):
        return degree - 1
    try:
        p = int(text)
    except ValueError:
        raise UsageError(f"bad point {text!r}") from None
    if not 0 <= p < degree:
        raise UsageError(f"point {p} is outside 0..{degree - 1}")
    return p


def cmd_subdegrees(args) -> int:
    try:
        group = parse_group(args.group)
        action = act(parse_action(args.action), group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    prof = subdegrees_by_pairs(action) if args.route == "pairs" else subdegrees(action)
    rec = {
        "group": args.group,
        "action": args.action,
        "degree": str(prof.degree),
        "subdegrees": ",".join(map(str, prof.subdegrees)),
        "provenance": prof.provenance,
    }
    if args.two_point:
        p, q = (_point(x, action.degree) for x in args.two_point)
        if p == q:
            raise UsageError("the two points must differ")
        rec["two_point"] = f"{p},{q}"
        try:
            orbs = two_point_stabiliser_orbits(action, p, q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rec["two_point_orbits"] = ",".join(map(str, orbs))
    emit([rec], SUBDEGREE_COLUMNS, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# screen

def _table_path(name: str) -> Path:
    if name in BUNDLED_TABLES:
        return data_path(f"screen_{name}.tsv")
    p = Path(name)
    if not p.is_file():
        raise UsageError(f"no such table {name!r} (bundled: {', '.join(sorted(BUNDLED_TABLES))})")
    return p


def cmd_screen(args) -> int:
    path = _table_path(args.table)
    try:
        records = read_tsv(path)
        rows = rows_from_records(records)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{path}: malformed table ({exc})") from None
    screened = [screen_candidate(r) for r in rows]
    for r in screened:
        if r.verdict.status == UNRESOLVED:
            print(f"warning: {r.group} {r.stabiliser} unresolved: {r.verdict.detail}", file=sys.stderr)
    emit([row_record(r) for r in screened], OUTPUT_COLUMNS, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-paper

def cmd_verify(args) -> int:
    from .verify import GROUPS, run

    only = [g for item in (args.only or []) for g in item.split(",") if g]
    bad = sorted(set(only) - set(GROUPS))
    if bad:
        raise UsageError(f"unknown check group(s) {', '.join(bad)}; choose from {', '.join(GROUPS)}")
    bundle = run(only or None)
    timings = not args.no_timings
    text = bundle.to_text(timings)
    sys.stdout.write(text)
    if bundle.discrepancies:
        print("discrepancies (not failures):")
        for r in bundle.discrepancies:
            print(f"  {r.note}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(bundle.to_json(timings), encoding="utf-8")
        (out / "report.txt").write_text(text, encoding="utf-8")
    return EXIT_OK if bundle.ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gqscreen", description="Feasibility screening for generalised quadrangles.")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["tsv", "json"], default="tsv")

    p = sub.add_parser("params", parents=[fmt], help="feasibility of an order, or all orders with a given point count")
    p.add_argument("order", nargs="*", type=int, metavar="N")
    p.add_argument("--enumerate", type=int, metavar="V")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("subdegrees", parents=[fmt], help="subdegrees of a transitive action")
    p.add_argument("--group", required=True, help="An, Sn, PSL2:q or PGL2:q")
    p.add_argument("--action", required=True, help="natural, projline, subsets:k or partitions:axb")
    p.add_argument("--two-point", nargs=2, metavar=("P", "Q"), help="also report orbits of the stabiliser of P and Q")
    p.add_argument("--route", choices=["schreier", "pairs"], default="schreier")
    p.set_defaults(func=cmd_subdegrees)

    p = sub.add_parser("screen", parents=[fmt], help="screen a candidate table")
    p.add_argument("--table", required=True, help="TSV path or bundled name: " + ", ".join(sorted(BUNDLED_TABLES)))
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("verify-paper", help="regenerate every reproduced result and diff against expectations")
    p.add_argument("--only", action="append", help="check group(s), comma separated or repeated")
    p.add_argument("--out", help="directory for report.json and report.txt")
    p.add_argument("--no-timings", action="store_true", help="omit runtimes so the report is byte-stable")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gqscreen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"gqscreen: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
