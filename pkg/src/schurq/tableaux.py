"""Marked shifted tableaux, column-strict shifted tableaux and Schur functions.

Symbols of the marked alphabet 1' < 1 < 2' < 2 < ... are encoded as integer
codes 1, 2, 3, 4, ...: code ``c`` stands for the value ``(c + 1) // 2`` and is
marked when ``c`` is odd.

Two independent routes to generating functions are provided: a literal
backtracking enumeration, and a strip-by-strip transfer over shifted shapes
(the cells holding symbols <= k' form a vertical strip over those holding
symbols <= k-1, and the cells holding k then form a horizontal strip). The
transfer is what makes the larger shapes of the crosscheck grid tractable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from flint import fmpz_poly

from .exact import LaurentPoly, QContext
from .linalg import det

__all__ = [
    "StrictPartition",
    "Partition",
    "ShiftedDiagram",
    "MarkedTableau",
    "enumerate_marked",
    "gf_marked",
    "gf_marked_enumerated",
    "count_marked",
    "count_marked_enumerated",
    "enumerate_column_strict",
    "gf_column_strict",
    "gf_column_strict_enumerated",
    "hooks",
    "contents",
    "hook_content_products",
    "tableau_sum",
    "column_strict_product",
    "schur_poly",
    "schur_monomials",
    "strict_partitions",
    "partitions_in_box",
]


# --------------------------------------------------------------------------
# Shapes
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class StrictPartition:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a <= b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be strictly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "StrictPartition":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(t) for t in text.split(",")))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def diagram(self) -> "ShiftedDiagram":
        return ShiftedDiagram(self)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class Partition:
    """An ordinary partition; trailing zeros are dropped."""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError("parts must be nonnegative")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def cells(self):
        for i, p in enumerate(self.parts):
            for j in range(p):
                yield i, j


@dataclass(frozen=True)
class ShiftedDiagram:
    shape: StrictPartition
    cells: tuple = field(init=False)

    def __post_init__(self):
        cells = tuple(
            (i, i + j) for i, p in enumerate(self.shape.parts) for j in range(p)
        )
        object.__setattr__(self, "cells", cells)

    def rows(self):
        return [[(i, i + j) for j in range(p)] for i, p in enumerate(self.shape.parts)]


def _as_strict(lam) -> StrictPartition:
    if isinstance(lam, StrictPartition):
        return lam
    return StrictPartition(tuple(lam))


# --------------------------------------------------------------------------
# Marked tableaux
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkedTableau:
    shape: StrictPartition
    codes: tuple  # row-major symbol codes

    @property
    def entries(self) -> dict:
        return dict(zip(ShiftedDiagram(self.shape).cells, self.codes))

    @property
    def weight(self) -> tuple:
        """(a_1, a_2, ...): number of boxes labelled k or k'."""
        if not self.codes:
            return ()
        top = max((c + 1) // 2 for c in self.codes)
        a = [0] * top
        for c in self.codes:
            a[(c + 1) // 2 - 1] += 1
        return tuple(a)

    @property
    def statistic(self) -> int:
        """|T| = sum (k-1) a_k."""
        return sum((c + 1) // 2 - 1 for c in self.codes)

    def to_records(self) -> list:
        return [
            [r, c, (code + 1) // 2, bool(code % 2)]
            for (r, c), code in zip(ShiftedDiagram(self.shape).cells, self.codes)
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    def __str__(self):
        rows = []
        k = 0
        for i, p in enumerate(self.shape.parts):
            labels = []
            for c in self.codes[k:k + p]:
                v = (c + 1) // 2
                labels.append(f"{v}'" if c % 2 else f"{v}")
            rows.append("  " * i + " ".join(labels))
            k += p
        return "\n".join(rows)


def _neighbours(lam: StrictPartition):
    cells = ShiftedDiagram(lam).cells
    index = {cell: k for k, cell in enumerate(cells)}
    left = [index.get((r, c - 1)) for r, c in cells]
    up = [index.get((r - 1, c)) for r, c in cells]
    return cells, left, up


def _lowest_code(codes, li, ui) -> int:
    lo = 1
    if li is not None:
        a = codes[li]
        # equal to the left neighbour only if unmarked (marked once per row)
        lo = max(lo, a if a % 2 == 0 else a + 1)
    if ui is not None:
        b = codes[ui]
        # equal to the upper neighbour only if marked (unmarked once per column)
        lo = max(lo, b if b % 2 == 1 else b + 1)
    return lo


def enumerate_marked(lam, n: int) -> Iterator[MarkedTableau]:
    """All marked shifted tableaux of shape S(lam) over 1' < 1 < ... < n' < n.

    Boxes are filled in row-major order trying codes in increasing order, so
    the stream is in lexicographic order of the row-major code sequence.
    """
    lam = _as_strict(lam)
    cells, left, up = _neighbours(lam)
    top = 2 * n
    codes = [0] * len(cells)

    def fill(k):
        if k == len(cells):
            yield MarkedTableau(lam, tuple(codes))
            return
        for c in range(_lowest_code(codes, left[k], up[k]), top + 1):
            codes[k] = c
            yield from fill(k + 1)

    if len(cells) == 0:
        yield MarkedTableau(lam, ())
        return
    if n <= 0:
        return
    yield from fill(0)


def count_marked_enumerated(lam, n: int) -> int:
    """Number of tableaux in the stream of ``enumerate_marked``, walking the same
    backtracking tree without materialising tableaux; the last box's choices
    are counted directly."""
    lam = _as_strict(lam)
    cells, left, up = _neighbours(lam)
    if not cells:
        return 1
    if n <= 0:
        return 0
    top = 2 * n
    last = len(cells) - 1
    codes = [0] * len(cells)

    def walk(k):
        lo = _lowest_code(codes, left[k], up[k])
        if k == last:
            return max(0, top + 1 - lo)
        total = 0
        for c in range(lo, top + 1):
            codes[k] = c
            total += walk(k + 1)
        return total

    return walk(0)


def gf_marked_enumerated(lam, n: int) -> LaurentPoly:
    """Sum of q^|T| by literal enumeration (oracle for small shapes)."""
    counts: dict[int, int] = {}
    for t in enumerate_marked(lam, n):
        counts[t.statistic] = counts.get(t.statistic, 0) + 1
    return LaurentPoly(counts)


def _shifted_valid(nu: Sequence[int]) -> bool:
    for a, b in zip(nu, nu[1:]):
        if b > 0 and a <= b:
            return False
    return True


def _vertical_strips(mu: tuple, lam: tuple):
    """Shapes nu over mu adding at most one cell per row, inside lam."""
    m = len(lam)
    out = []

    def rec(i, acc):
        if i == m:
            nu = tuple(acc)
            if _shifted_valid(nu):
                out.append((nu, sum(nu) - sum(mu)))
            return
        for d in (0, 1):
            v = mu[i] + d
            if v > lam[i]:
                break
            if i > 0 and v > 0 and acc[i - 1] <= v:
                break
            acc.append(v)
            rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def _horizontal_strips(mu: tuple, lam: tuple):
    """Shapes nu over mu adding at most one cell per column, inside lam.

    New cells of row i (rows start at column i) must sit under cells of row
    i - 1 already present in mu, which forces nu_i <= mu_{i-1} - 1.
    """
    m = len(lam)
    out = []

    def rec(i, acc):
        if i == m:
            nu = tuple(acc)
            out.append((nu, sum(nu) - sum(mu)))
            return
        hi = lam[i] if i == 0 else min(lam[i], mu[i - 1] - 1)
        for v in range(mu[i], max(mu[i], hi) + 1):
            acc.append(v)
            rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def _shift_poly(p: fmpz_poly, k: int) -> fmpz_poly:
    return p * fmpz_poly([0] * k + [1]) if k else p


def _strip_transfer(lam: tuple, n: int, marked: bool) -> fmpz_poly:
    start = tuple(0 for _ in lam)
    states = {start: fmpz_poly([1])}
    for k in range(1, n + 1):
        phases = (_vertical_strips, _horizontal_strips) if marked else (_horizontal_strips,)
        for strips in phases:
            nxt: dict = {}
            for mu, poly in states.items():
                for nu, added in strips(mu, lam):
                    term = _shift_poly(poly, (k - 1) * added)
                    if nu in nxt:
                        nxt[nu] = nxt[nu] + term
                    else:
                        nxt[nu] = term
            states = nxt
    return states.get(lam, fmpz_poly([]))


def _to_laurent(p: fmpz_poly) -> LaurentPoly:
    return LaurentPoly({i: int(c) for i, c in enumerate(p.coeffs()) if c != 0})


def gf_marked(lam, n: int) -> LaurentPoly:
    """Q_lam(1, q, ..., q^(n-1)) = sum_T q^|T| over n-letter marked tableaux.

    ``n`` is the alphabet size; Q_lam(1, ..., q^n) from the P_n side uses n + 1.
    """
    lam = _as_strict(lam)
    if n < 0:
        raise ValueError("alphabet size must be nonnegative")
    return _to_laurent(_strip_transfer(lam.parts, n, True))


def count_marked(lam, n: int) -> int:
    """Number of marked shifted tableaux, i.e. Q_lam(1^n)."""
    return int(sum(gf_marked(lam, n).coefficients.values()))


def tableau_sum(lam, xs: Sequence):
    """Q_lam(x_1, ..., x_n) as the sum of x^weight over marked shifted tableaux."""
    one = xs[0] * 0 + 1 if xs else 1
    total = 0 * one
    for t in enumerate_marked(lam, len(xs)):
        term = one
        for x, a in zip(xs, t.weight):
            term = term * x**a
        total = total + term
    return total


def column_strict_product(lam, ctx: QContext):
    """Product side of the column-strict generating function:
    prod_i 1/(q;q)_{lam_i} * prod_{i<j} (q^lam_j - q^lam_i)/(1 - q^(lam_i + lam_j))."""
    parts = _as_strict(lam).parts
    q = ctx.q
    out = ctx.one
    for a in parts:
        for k in range(1, a + 1):
            out = out / (1 - q**k)
    for i, j in combinations(range(len(parts)), 2):
        a, b = parts[i], parts[j]
        out = out * (q**b - q**a) / (1 - q ** (a + b))
    return out


def enumerate_column_strict(lam, bound: int):
    """Column-strict shifted tableaux (unmarked symbols 1..bound)."""
    lam = _as_strict(lam)
    cells = ShiftedDiagram(lam).cells
    index = {cell: k for k, cell in enumerate(cells)}
    left = [index.get((r, c - 1)) for r, c in cells]
    up = [index.get((r - 1, c)) for r, c in cells]
    vals = [0] * len(cells)

    def fill(k):
        if k == len(cells):
            yield tuple(vals)
            return
        lo = 1
        if left[k] is not None:
            lo = max(lo, vals[left[k]])
        if up[k] is not None:
            lo = max(lo, vals[up[k]] + 1)
        for v in range(lo, bound + 1):
            vals[k] = v
            yield from fill(k + 1)

    yield from fill(0)


def gf_column_strict_enumerated(lam, bound: int) -> LaurentPoly:
    counts: dict[int, int] = {}
    for t in enumerate_column_strict(lam, bound):
        w = sum(v - 1 for v in t)
        counts[w] = counts.get(w, 0) + 1
    return LaurentPoly(counts)


def gf_column_strict(lam, bound: int, degree: int | None = None) -> LaurentPoly:
    """Sum of q^|T| over column-strict shifted tableaux with symbols <= bound.

    With ``degree`` set, the result is truncated to powers q^k, k <= degree;
    taking ``bound = degree + 1`` then gives the unbounded series exactly to
    that order, since a symbol k contributes at least q^(k-1).
    """
    lam = _as_strict(lam)
    p = _to_laurent(_strip_transfer(lam.parts, bound, False))
    if degree is None:
        return p
    return LaurentPoly({e: c for e, c in p.coefficients.items() if e <= degree})


# --------------------------------------------------------------------------
# Hooks, contents and Schur functions
# --------------------------------------------------------------------------


def hooks(mu: Partition) -> list:
    conj = mu.conjugate().parts
    return [mu.parts[i] - j + conj[j] - i - 1 for i, j in mu.cells()]


def contents(mu: Partition) -> list:
    return [j - i for i, j in mu.cells()]


def hook_content_products(mu, n: int, m: int, ctx: QContext):
    """(prod (1+q^h)/(1-q^h), prod (1-q^(c+m-n-1))/(1+q^(c+m-n-1))) over the boxes of mu."""
    if not isinstance(mu, Partition):
        mu = Partition(tuple(mu))
    one = ctx.one
    hp = one
    for h in hooks(mu):
        qh = ctx.qpow(h)
        hp = hp * (1 + qh) / (1 - qh)
    cp = one
    for c in contents(mu):
        qc = ctx.qpow(c + m - n - 1)
        cp = cp * (1 - qc) / (1 + qc)
    return hp, cp


def _ordinary_horizontal_strips(kappa: tuple, mu: tuple):
    """Partitions nu with kappa <= nu <= mu and nu/kappa a horizontal strip."""
    m = len(mu)
    out = []

    def rec(i, acc):
        if i == m:
            out.append(tuple(acc))
            return
        hi = mu[i]
        if i > 0:
            hi = min(hi, kappa[i - 1])
        for v in range(kappa[i], hi + 1):
            acc.append(v)
            rec(i + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def schur_monomials(mu, nvars: int) -> dict:
    """s_mu(x_1..x_nvars) as {exponent tuple: integer coefficient} (combinatorial)."""
    if not isinstance(mu, Partition):
        mu = Partition(tuple(mu))
    parts = mu.parts
    if len(parts) > nvars:
        return {}
    start = tuple(0 for _ in parts)
    states = {start: {(): 1}}
    for _ in range(nvars):
        nxt: dict = {}
        for kappa, polys in states.items():
            for nu in _ordinary_horizontal_strips(kappa, parts):
                d = sum(nu) - sum(kappa)
                bucket = nxt.setdefault(nu, {})
                for mono, c in polys.items():
                    key = mono + (d,)
                    bucket[key] = bucket.get(key, 0) + c
        states = nxt
    return dict(states.get(parts, {})) if parts else {tuple([0] * nvars): 1}


def schur_poly(mu, xs: Sequence, mode: str = "auto"):
    """s_mu(x_1, ..., x_n).

    ``mode='bialternant'`` uses det(x_i^(mu_j + n - j)) / prod_{i<j}(x_i - x_j);
    ``mode='combinatorial'`` sums over semistandard tableaux; ``auto`` uses the
    bialternant when the points are distinct.
    """
    if not isinstance(mu, Partition):
        mu = Partition(tuple(mu))
    n = len(xs)
    if len(mu.parts) > n:
        return xs[0] * 0 if xs else 0
    distinct = all(a != b for a, b in combinations(xs, 2))
    if mode == "bialternant" or (mode == "auto" and distinct):
        if not distinct:
            raise ValueError("bialternant needs distinct points")
        lam = list(mu.parts) + [0] * (n - len(mu.parts))
        num = det([[x ** (lam[j] + n - 1 - j) for j in range(n)] for x in xs])
        vdm = Fraction(1)
        for i, j in combinations(range(n), 2):
            vdm = vdm * (xs[i] - xs[j])
        return num / vdm
    total = 0
    for mono, c in schur_monomials(mu, n).items():
        term = c
        for x, e in zip(xs, mono):
            term = term * x**e
        total = total + term
    return total


# --------------------------------------------------------------------------
# Shape iterators
# --------------------------------------------------------------------------


def strict_partitions(max_part: int, max_len: int):
    """Strict partitions with parts <= max_part and length <= max_len (empty included)."""
    out = [StrictPartition(())]
    for m in range(1, max_len + 1):
        for parts in combinations(range(max_part, 0, -1), m):
            out.append(StrictPartition(parts))
    return out


def partitions_in_box(rows: int, max_part: int):
    """Partitions with at most ``rows`` parts, each <= max_part."""
    out = []

    def rec(i, hi, acc):
        if i == rows:
            out.append(Partition(tuple(acc)))
            return
        for v in range(hi, -1, -1):
            acc.append(v)
            rec(i + 1, v, acc)
            acc.pop()

    rec(0, max_part, [])
    return out
