"""Exact determinants and pfaffians, and the classical evaluations built on them.

Matrices are plain lists of rows. Entries may be any exact field element
(int, Fraction, RationalFn, Gaussian); nothing here assumes a specific type.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Callable, Sequence

from .qseries import qpoch

__all__ = [
    "Matrix",
    "SkewMatrix",
    "SingularConfigurationError",
    "det",
    "det_expansion",
    "pfaffian",
    "pfaffian_expansion",
    "spa_sides",
    "spb_sides",
    "check_spa_spb",
    "minor_summation_sides",
    "minor_summation_check",
    "lms_general_sides",
    "schlosser_det",
]


class SingularConfigurationError(ValueError):
    pass


def _zero_like(x):
    return x * 0


@dataclass(frozen=True)
class Matrix:
    rows: tuple

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def det(self):
        return det(self.rows)


@dataclass(frozen=True)
class SkewMatrix:
    """A skew-symmetric matrix; skew-symmetry is checked on construction."""

    rows: tuple

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix must be square")
            if rows[i][i] != 0:
                raise ValueError(f"nonzero diagonal entry at {i}")
            for j in range(i):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_upper(cls, n: int, entry: Callable[[int, int], object], zero=0) -> "SkewMatrix":
        """Build from ``entry(i, j)`` for ``i < j``."""
        rows = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = entry(i, j)
                rows[i][j] = v
                rows[j][i] = -v
        return cls(rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pfaffian(self):
        return pfaffian(self.rows)

    def det(self):
        return det(self.rows)


def det(rows: Sequence[Sequence]):
    """Determinant by Gaussian elimination over the entries' field."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    result = None
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return _zero_like(a[0][0])
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        result = piv if result is None else result * piv
        inv = 1 / piv
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] * inv
                row_r, row_c = a[r], a[c]
                for k in range(c + 1, n):
                    if row_c[k] != 0:
                        row_r[k] = row_r[k] - f * row_c[k]
    return result if sign == 1 else -result


def det_expansion(rows: Sequence[Sequence]):
    """Determinant by Laplace expansion along the first row (small oracle)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * det_expansion(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else _zero_like(rows[0][0])


def pfaffian(rows: Sequence[Sequence]):
    """Pfaffian by skew-symmetric elimination with pivot swaps.

    Eliminating with the pivot a = A[0][1]: Pf(A) = a * Pf(B) where, for
    i, j >= 2, B[i][j] = A[i][j] + (A[i][0] A[1][j] - A[i][1] A[0][j]) / a.
    """
    if isinstance(rows, SkewMatrix):
        rows = rows.rows
    n = len(rows)
    if n % 2:
        raise ValueError("pfaffian of an odd-dimensional matrix is not defined")
    a = [list(r) for r in rows]
    result = 1
    while a:
        k = len(a)
        j = next((j for j in range(1, k) if a[0][j] != 0), None)
        if j is None:
            return _zero_like(a[0][1]) if k > 1 else 0
        if j != 1:
            # swap indices 1 and j in rows and columns; flips the sign
            a[1], a[j] = a[j], a[1]
            for r in a:
                r[1], r[j] = r[j], r[1]
            result = -result
        piv = a[0][1]
        result = piv * result
        if k == 2:
            break
        inv = 1 / piv
        r0, r1 = a[0], a[1]
        b = []
        for i in range(2, k):
            ai0 = a[i][0] * inv
            ai1 = a[i][1] * inv
            row = []
            for jj in range(2, k):
                if jj == i:
                    row.append(_zero_like(piv))
                    continue
                if jj < i:
                    row.append(-b[jj - 2][i - 2])
                    continue
                v = a[i][jj]
                if ai0 != 0 and r1[jj] != 0:
                    v = v + ai0 * r1[jj]
                if ai1 != 0 and r0[jj] != 0:
                    v = v - ai1 * r0[jj]
                row.append(v)
            b.append(row)
        a = b
    return result


def pfaffian_expansion(rows: Sequence[Sequence]):
    """Pfaffian by expansion along the first row (independent oracle)."""
    if isinstance(rows, SkewMatrix):
        rows = rows.rows
    n = len(rows)
    if n % 2:
        raise ValueError("pfaffian of an odd-dimensional matrix is not defined")
    if n == 0:
        return 1
    total = None
    for j in range(1, n):
        if rows[0][j] == 0:
            continue
        keep = [k for k in range(1, n) if k != j]
        minor = [[rows[r][c] for c in keep] for r in keep]
        term = rows[0][j] * pfaffian_expansion(minor)
        if j % 2 == 0:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else _zero_like(rows[0][1])


# --------------------------------------------------------------------------
# Schur's pfaffian evaluations
# --------------------------------------------------------------------------


def _prod(values, one=1):
    out = one
    for v in values:
        out = out * v
    return out


def spa_sides(points: Sequence):
    """Both sides of pfaff((x_j - x_i)/(x_j + x_i)) = prod_{i<j} (x_j - x_i)/(x_j + x_i)."""
    n = len(points)
    for i, j in combinations(range(n), 2):
        if points[i] + points[j] == 0:
            raise SingularConfigurationError(f"x_{i + 1} + x_{j + 1} = 0")
        if points[i] == points[j]:
            raise SingularConfigurationError(f"x_{i + 1} = x_{j + 1}")
    entries = SkewMatrix.from_upper(
        n, lambda i, j: (points[j] - points[i]) / (points[j] + points[i]), points[0] * 0
    )
    lhs = pfaffian(entries.rows)
    rhs = _prod((points[j] - points[i]) / (points[j] + points[i])
                for i, j in combinations(range(n), 2))
    return lhs, rhs


def spb_sides(points: Sequence, t):
    """Both sides of pfaff((x_j - x_i)/(1 - t x_i x_j)) = t^(m(m-1)) prod (x_j - x_i)/(1 - t x_i x_j)."""
    n = len(points)
    m = n // 2
    for i, j in combinations(range(n), 2):
        if 1 - t * points[i] * points[j] == 0:
            raise SingularConfigurationError(f"1 - t x_{i + 1} x_{j + 1} = 0")
        if points[i] == points[j]:
            raise SingularConfigurationError(f"x_{i + 1} = x_{j + 1}")
    entries = SkewMatrix.from_upper(
        n, lambda i, j: (points[j] - points[i]) / (1 - t * points[i] * points[j]), points[0] * 0
    )
    lhs = pfaffian(entries.rows)
    rhs = t ** (m * (m - 1)) * _prod(
        (points[j] - points[i]) / (1 - t * points[i] * points[j])
        for i, j in combinations(range(n), 2)
    )
    return lhs, rhs


def check_spa_spb(points: Sequence, t) -> bool:
    a, b = spa_sides(points)
    c, d = spb_sides(points, t)
    return a == b and c == d


# --------------------------------------------------------------------------
# Minor summation
# --------------------------------------------------------------------------


def minor_summation_sides(A: Sequence[Sequence], B: Sequence[Sequence]):
    """pfaff(A B A^T) and sum_K det(A[:, K]) pfaff(B[K, K]) over increasing K."""
    rows = len(A)
    n = len(B)
    SkewMatrix(B)
    zero = _zero_like(B[0][1]) if n > 1 else 0
    ab = [[sum((A[i][x] * B[x][y] for x in range(n)), zero) for y in range(n)] for i in range(rows)]
    aba = [[sum((ab[i][y] * A[j][y] for y in range(n)), zero) for j in range(rows)]
           for i in range(rows)]
    lhs = pfaffian(aba)
    rhs = zero
    for K in combinations(range(n), rows):
        sub = [[A[i][k] for k in K] for i in range(rows)]
        d = det(sub)
        if d == 0:
            continue
        rhs = rhs + d * pfaffian([[B[a][b] for b in K] for a in K])
    return lhs, rhs


def minor_summation_check(A, B) -> bool:
    lhs, rhs = minor_summation_sides(A, B)
    return lhs == rhs


def lms_general_sides(A: Sequence[Sequence], B: Callable[[int, int, int, int], object]):
    """Both sides of the pfaffian summation lemma with index-dependent kernels.

    ``B(i, j, x, y)`` must satisfy B(i, j, x, y) = -B(j, i, y, x).
    """
    rows = len(A)
    n = len(A[0])
    lhs_entries = [[sum(A[i][x] * A[j][y] * B(i, j, x, y) for x in range(n) for y in range(n))
                    if i != j else 0 for j in range(rows)] for i in range(rows)]
    lhs = pfaffian(lhs_entries)
    rhs = 0
    for ks in product(range(n), repeat=rows):
        w = _prod(A[i][ks[i]] for i in range(rows))
        if w == 0:
            continue
        sub = [[B(i, j, ks[i], ks[j]) if i != j else 0 for j in range(rows)] for i in range(rows)]
        rhs = rhs + w * pfaffian(sub)
    return lhs, rhs


# --------------------------------------------------------------------------
# Schlosser-type determinant evaluations
# --------------------------------------------------------------------------


def schlosser_det(kind: str, m: int, q, A, B, X: Sequence, C=None):
    """Return (lhs, rhs) for the ``sd`` (needs C) or ``sdd`` evaluation."""
    if len(X) != m:
        raise ValueError("need m points X")
    one = q * 0 + 1
    if kind == "sd":
        if C is None:
            raise ValueError("the sd evaluation needs C")
        lhs_rows = []
        for x in X:
            row = []
            for j in range(m):
                den = qpoch(B * x, j, q, one) * qpoch(B * C / x, j, q, one)
                if den == 0:
                    raise SingularConfigurationError("vanishing denominator in sd entries")
                row.append(qpoch(A * x, j, q, one) * qpoch(A * C / x, j, q, one) / den)
            lhs_rows.append(row)
        lhs = det(lhs_rows)
        rhs = q ** comb(m, 3) * (A * C) ** comb(m, 2)
        for i, j in combinations(range(m), 2):
            rhs = rhs * (X[j] - X[i]) * (1 - X[i] * X[j] / C)
        for i in range(1, m + 1):
            x = X[i - 1]
            rhs = rhs * qpoch(B / A, i - 1, q, one) * qpoch(A * B * C * q ** (2 * m - 2 * i), i - 1, q, one)
            rhs = rhs / (x ** (m - 1) * qpoch(B * x, m - 1, q, one) * qpoch(B * C / x, m - 1, q, one))
        return lhs, rhs
    if kind == "sdd":
        lhs = det([[qpoch(A * x, j, q, one) * qpoch(B * x, m - 1 - j, q, one) for j in range(m)]
                   for x in X])
        rhs = q ** comb(m, 3) * A ** comb(m, 2)
        for i, j in combinations(range(m), 2):
            rhs = rhs * (X[i] - X[j])
        for i in range(1, m + 1):
            rhs = rhs * qpoch(q ** (i - m) * B / A, i - 1, q, one)
        return lhs, rhs
    raise ValueError(f"unknown kind {kind!r}")
