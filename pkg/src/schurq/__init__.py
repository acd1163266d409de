"""Exact evaluation of Schur Q-polynomials at geometric progressions and at 1^n."""

from .exact import QContext, RationalFn, LaurentPoly, format_q
from .tableaux import StrictPartition, gf_marked, count_marked, enumerate_marked
from .formulas import EvalRequest, evaluate, q_one, q_staircase

__all__ = [
    "QContext",
    "RationalFn",
    "LaurentPoly",
    "format_q",
    "StrictPartition",
    "gf_marked",
    "count_marked",
    "enumerate_marked",
    "EvalRequest",
    "evaluate",
    "q_one",
    "q_staircase",
]
