"""Command-line driver: compute, crosscheck, enumerate, table, bench."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

from .crosscheck import grand_crosscheck, grid, run_case
from .exact import ExactArithmeticError, LaurentPoly, QContext, RationalFn, format_q
from .formulas import (
    P_METHODS,
    Q_ONE_METHODS,
    EvalRequest,
    MethodNotApplicable,
    evaluate,
    osc_count,
    q_one,
    q_staircase,
    staircase_shape,
)
from .tableaux import StrictPartition, enumerate_marked, gf_column_strict, gf_marked

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
Q_METHODS = ("tableaux", "direct", "q_det") + tuple(P_METHODS)


class UsageError(Exception):
    pass


def _strict(text: str) -> StrictPartition:
    try:
        return StrictPartition.parse(text)
    except ValueError as exc:
        raise UsageError(f"invalid lambda {text!r}: {exc}") from exc


def _serialize(value, root_order: int):
    if isinstance(value, RationalFn):
        return value.to_json(root_order)
    if isinstance(value, LaurentPoly):
        return {"num": value.to_json(), "den": {"0": "1"}, "root_order": 1}
    return str(value)


def _emit(rows: list, fmt: str, columns: list, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})


def _fmt(args) -> str:
    return "json" if args.json else "csv" if args.csv else "text"


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_compute(args) -> int:
    lam = _strict(args.lam)
    t0 = time.perf_counter_ns()
    if args.method in Q_ONE_METHODS:
        value = q_one(lam.parts, args.n, args.method)
        shown = str(value)
        exact = str(value)
        what = f"Q_{lam.parts}(1^{args.n})"
    else:
        ctx = QContext(args.root_order)
        value = evaluate(EvalRequest(lam, args.n, args.method, ctx))
        shown = format_q(value, args.root_order)
        exact = _serialize(value, args.root_order)
        what = f"Q_{lam.parts}(1,...,q^{args.n})"
    micros = (time.perf_counter_ns() - t0) // 1000
    record = {"lambda": list(lam.parts), "n": args.n, "method": args.method,
              "value": shown, "exact": exact}
    if args.timing:
        record["micros"] = micros
    fmt = _fmt(args)
    if fmt == "text":
        print(shown)
        if args.verbose:
            print(f"{what} by {args.method}", file=sys.stderr)
    else:
        _emit([record], fmt, ["lambda", "n", "method", "value", "micros"])
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    records = grand_crosscheck(args.max_part, args.max_len, args.max_n, args.workers, args.root_order)
    failures = [r for r in records if not r.passed]
    fmt = _fmt(args)
    if fmt == "text":
        cases = grid(args.max_part, args.max_len, args.max_n)
        for r in failures:
            print(f"MISMATCH lambda={r.lam} n={r.n} method={r.method} {r.error}".rstrip())
        print(f"{len(cases)} cases, {len(records)} evaluations, {len(failures)} mismatches")
    else:
        rows = [r.to_json() for r in records]
        columns = ["lam", "n", "method", "value", "passed", "micros", "error"]
        if not args.timing:
            columns.remove("micros")
            for row in rows:
                row.pop("micros")
        _emit(rows, fmt, columns)
    return EXIT_MISMATCH if failures else EXIT_OK


def cmd_enumerate(args) -> int:
    lam = _strict(args.lam)
    fmt = _fmt(args)
    if args.gf or args.column_strict:
        if args.column_strict:
            gf = gf_column_strict(lam, args.n)
        else:
            gf = gf_marked(lam, args.n)
        if fmt == "text":
            print(format_q(gf))
        else:
            _emit([{"lambda": list(lam.parts), "n": args.n, "gf": format_q(gf),
                    "coefficients": gf.to_json()}], fmt, ["lambda", "n", "gf"])
        return EXIT_OK
    rows = []
    for k, t in enumerate(enumerate_marked(lam, args.n)):
        if args.limit is not None and k >= args.limit:
            break
        rows.append(t)
    if fmt == "text":
        for t in rows:
            print(f"# |T| = {t.statistic}")
            print(t)
        print(f"{len(rows)} tableaux")
    else:
        _emit([{"index": k, "statistic": t.statistic, "cells": t.to_records()}
               for k, t in enumerate(rows)], fmt, ["index", "statistic", "cells"])
    return EXIT_OK


def cmd_table(args) -> int:
    fmt = _fmt(args)
    rows = []
    if args.kind == "osc":
        for m in range(1, args.m_max + 1):
            for n in range(m, args.n_max + 1):
                rows.append({"m": m, "n": n, "shape": list(staircase_shape("odd", m)),
                             "value": str(osc_count(m, n))})
    else:
        ctx = QContext(2)
        for m in range(1, args.m_max + 1):
            for n in range(m - 1, args.n_max + 1):
                v = q_staircase(args.kind, m, n, ctx)
                rows.append({"m": m, "n": n,
                             "shape": [str(p) for p in staircase_shape(args.kind, m)],
                             "value": format_q(v, 2)})
    if fmt == "text":
        for r in rows:
            print(f"m={r['m']} n={r['n']} shape=({','.join(map(str, r['shape']))}): {r['value']}")
    else:
        _emit(rows, fmt, ["m", "n", "shape", "value"])
    return EXIT_OK


BENCH_GRID = dict(max_part=4, max_len=3, max_n=4)


def cmd_bench(args) -> int:
    totals: dict = {}
    counts: dict = {}
    ok = True
    for lam, n in grid(**BENCH_GRID):
        for r in run_case(lam, n):
            totals[r.method] = totals.get(r.method, 0) + r.micros
            counts[r.method] = counts.get(r.method, 0) + 1
            ok = ok and r.passed
    t0 = time.perf_counter_ns()
    for lam, n in grid(**BENCH_GRID):
        for method in Q_ONE_METHODS:
            try:
                q_one(lam, n + 1, method)
            except MethodNotApplicable:
                pass
    totals["q_one(all)"] = (time.perf_counter_ns() - t0) // 1000
    counts["q_one(all)"] = len(grid(**BENCH_GRID))
    rows = [{"method": k, "evaluations": counts[k], "micros": totals[k]} for k in sorted(totals)]
    fmt = _fmt(args)
    if fmt == "text":
        for r in rows:
            print(f"{r['method']:<12} {r['evaluations']:>5} evaluations {r['micros']:>12} us")
    else:
        _emit(rows, fmt, ["method", "evaluations", "micros"])
    return EXIT_OK if ok else EXIT_MISMATCH


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schurq", description=(
        "Exact evaluation of Schur Q-polynomials at 1, q, ..., q^n and at 1^n."))
    sub = p.add_subparsers(dest="command", required=True)

    def out_flags(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")
        g.add_argument("--csv", action="store_true", help="CSV on stdout")

    c = sub.add_parser("compute", help="evaluate one Q-value by a named method")
    c.add_argument("--lambda", dest="lam", required=True, help="strict partition, e.g. 3,1")
    c.add_argument("--n", type=_nonneg, required=True,
                   help="q=1 methods: alphabet size N in Q(1^N); others: top power in 1..q^n")
    c.add_argument("--method", default="qc", choices=list(Q_ONE_METHODS) + list(Q_METHODS))
    c.add_argument("--root-order", type=int, default=2, choices=(1, 2, 4))
    c.add_argument("--verbose", action="store_true")
    c.add_argument("--timing", action="store_true", help="include elapsed microseconds")
    out_flags(c)
    c.set_defaults(func=cmd_compute)

    x = sub.add_parser("crosscheck", help="run every P_n route against the tableau oracle")
    x.add_argument("--max-part", type=_nonneg, default=6)
    x.add_argument("--max-len", type=_nonneg, default=3)
    x.add_argument("--max-n", type=_nonneg, default=5)
    x.add_argument("--workers", type=int, default=1)
    x.add_argument("--root-order", type=int, default=2, choices=(2, 4))
    x.add_argument("--timing", action="store_true", help="include per-method microseconds")
    out_flags(x)
    x.set_defaults(func=cmd_crosscheck)

    e = sub.add_parser("enumerate", help="list marked shifted tableaux or their generating function")
    e.add_argument("--lambda", dest="lam", required=True)
    e.add_argument("--n", type=_nonneg, required=True, help="alphabet size")
    e.add_argument("--gf", action="store_true", help="print the generating function in q")
    e.add_argument("--column-strict", action="store_true",
                   help="generating function of column-strict tableaux with entries <= n")
    e.add_argument("--limit", type=_nonneg, default=None)
    out_flags(e)
    e.set_defaults(func=cmd_enumerate)

    t = sub.add_parser("table", help="closed-form tables")
    t.add_argument("kind", choices=("osc", "plain", "plain_sfs", "odd", "even", "half"))
    t.add_argument("--m-max", type=_nonneg, default=3)
    t.add_argument("--n-max", type=_nonneg, default=6)
    out_flags(t)
    t.set_defaults(func=cmd_table)

    b = sub.add_parser("bench", help="time each method on a fixed grid")
    out_flags(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (UsageError, MethodNotApplicable, ExactArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
