"""The grand crosscheck: every P_n route against the tableau oracle on a grid."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .exact import QContext, format_q
from .formulas import P_METHODS, dft_forms_for, lambda_points
from .kernels import appendix_p
from .tableaux import StrictPartition, gf_marked, strict_partitions

GRID_METHODS = ("multisum", "pfaffian", "determinant", "th", "ot", "nimmo")


@dataclass(frozen=True)
class CheckRecord:
    """One method's value on one grid point, compared against the oracle."""

    lam: tuple
    n: int
    method: str
    value: str
    passed: bool
    micros: int
    error: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        d["lam"] = list(self.lam)
        return d


def grid(max_part: int = 6, max_len: int = 3, max_n: int = 5) -> list:
    """(lambda, n) pairs with lambda_1 <= max_part, 1 <= m <= max_len, m - 1 <= n <= max_n."""
    out = []
    for lam in strict_partitions(max_part, max_len):
        if lam.length == 0:
            continue
        for n in range(lam.length - 1, max_n + 1):
            out.append((lam.parts, n))
    return sorted(out)


def methods_for(lam: tuple, n: int) -> list:
    m = len(lam)
    return list(GRID_METHODS) + [f"dft_{f}" for f in dft_forms_for(n, m)] + ["appendix"]


def run_case(lam: tuple, n: int, root_order: int = 2) -> list:
    """Evaluate every applicable method at x_i = q^lambda_i; compare 2^m P_n with the oracle."""
    ctx = QContext(root_order)
    m = len(lam)
    xs = list(lambda_points(lam, ctx))
    t0 = time.perf_counter_ns()
    oracle = gf_marked(StrictPartition(lam), n + 1).in_context(ctx)
    records = [CheckRecord(lam, n, "tableaux", format_q(oracle, root_order), True,
                           (time.perf_counter_ns() - t0) // 1000)]
    for method in methods_for(lam, n):
        fn = (lambda a, b, c: appendix_p(a, b, c)) if method == "appendix" else P_METHODS[method]
        t0 = time.perf_counter_ns()
        try:
            value = 2**m * fn(xs, n, ctx)
            micros = (time.perf_counter_ns() - t0) // 1000
            records.append(CheckRecord(lam, n, method, format_q(value, root_order),
                                       value == oracle, micros))
        except Exception as exc:  # a failing route is a mismatch, not a crash
            micros = (time.perf_counter_ns() - t0) // 1000
            records.append(CheckRecord(lam, n, method, "", False, micros,
                                       f"{type(exc).__name__}: {exc}"))
    return records


def _run_case_args(args):
    return run_case(*args)


def grand_crosscheck(max_part: int = 6, max_len: int = 3, max_n: int = 5,
                     workers: int = 1, root_order: int = 2) -> list:
    """All records for the grid, sorted by (lambda, n, method) regardless of completion order."""
    cases = [(lam, n, root_order) for lam, n in grid(max_part, max_len, max_n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_case_args, cases, chunksize=1))
    else:
        chunks = [run_case(*c) for c in cases]
    records = [r for chunk in chunks for r in chunk]
    return sorted(records, key=lambda r: (r.lam, r.n, r.method))
