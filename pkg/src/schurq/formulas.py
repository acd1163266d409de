"""Every route to P_n(x_1, ..., x_m) and Q_lambda(1, q, ..., q^n) in one place.

Conventions: ``xs`` is a list of field elements of the context ``ctx``; the
principal specialisation Q_lambda(1, q, ..., q^n) has n + 1 variables and
equals 2^m P_n(q^lambda_1, ..., q^lambda_m). Functions named ``p_*`` return
P_n, functions named ``q_*`` return Q-values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from typing import Callable, Sequence

from .exact import QContext, rsum, truncate_series
from .linalg import det, pfaffian
from .qseries import (
    _sqrt_witness,
    classical_pk,
    f_poly,
    hyper_classical,
    p1_coefficient,
    p1_direct,
    pochhammer,
    poly_eval,
    qp,
    qpoch,
)
from .tableaux import (
    StrictPartition,
    gf_marked,
    hook_content_products,
    partitions_in_box,
    schur_monomials,
)

__all__ = [
    "PointSet",
    "EvalRequest",
    "MethodNotApplicable",
    "sqrt_witness",
    "lambda_points",
    "q_direct",
    "p_multisum",
    "p_pfaffian",
    "p_two_row",
    "p_two_row_cd",
    "p_rce",
    "p_api",
    "p_determinant",
    "q_det_formula",
    "p_theorem_th",
    "p_theorem_ot",
    "p_theorem_dft",
    "dft_forms_for",
    "p_two_det",
    "q_one",
    "Q_ONE_METHODS",
    "q_staircase",
    "osc_count",
    "staircase_shape",
    "kawanaka",
    "kawanaka_truncation_check",
    "kbf_sides",
    "kbf_check",
    "krattenthaler",
    "osq_values",
    "epi_check",
    "nimmo",
    "nimmo_p",
    "hyperoctahedral_check",
    "P_METHODS",
    "evaluate",
]


class MethodNotApplicable(ValueError):
    """The requested formula does not apply to this input (parity, size, ...)."""


# --------------------------------------------------------------------------
# Inputs
# --------------------------------------------------------------------------


def sqrt_witness(x, ctx: QContext):
    """A square root of an s-monomial ``c * s^(2k)`` with c a rational square."""
    return _sqrt_witness(x, None, ctx)


@dataclass(frozen=True)
class PointSet:
    """Points x_1..x_m with optional square-root witnesses w_i (w_i^2 = x_i)."""

    xs: tuple
    ws: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        if self.ws is not None:
            ws = tuple(self.ws)
            if len(ws) != len(self.xs):
                raise ValueError("one witness per point")
            for x, w in zip(self.xs, ws):
                if w * w != x:
                    raise ValueError("witness does not square to its point")
            object.__setattr__(self, "ws", ws)

    @property
    def m(self) -> int:
        return len(self.xs)

    def witnesses(self, ctx: QContext) -> tuple:
        if self.ws is not None:
            return self.ws
        return tuple(sqrt_witness(x, ctx) for x in self.xs)


def lambda_points(lam, ctx: QContext) -> tuple:
    """(q^lambda_1, ..., q^lambda_m)."""
    return tuple(ctx.qpow(l) for l in lam)


@dataclass(frozen=True)
class EvalRequest:
    """One evaluation of Q_lambda(1, q, ..., q^n) by a named method."""

    lam: StrictPartition
    n: int
    method: str
    ctx: QContext = QContext(2)

    def __post_init__(self):
        if not isinstance(self.lam, StrictPartition):
            object.__setattr__(self, "lam", StrictPartition(tuple(self.lam)))
        if self.lam.length > self.n + 1:
            raise ValueError("need length(lambda) <= n + 1")

    @property
    def parity(self) -> int:
        return (self.n + self.lam.length) % 2


def _prod(values, one):
    out = one
    for v in values:
        out = out * v
    return out


def _vandermonde_pairs(xs, one, f):
    return _prod((f(xs[i], xs[j]) for i, j in combinations(range(len(xs)), 2)), one)


# --------------------------------------------------------------------------
# The direct definition
# --------------------------------------------------------------------------


def q_direct(lam, xs: Sequence, ctx: QContext | None = None):
    """Q_lambda(x_1, ..., x_N) by the alternating sum over injective index maps."""
    lam = tuple(lam)
    N = len(xs)
    m = len(lam)
    if m > N:
        return 0 * xs[0] if xs else 0
    for i, j in combinations(range(N), 2):
        if xs[i] == xs[j] or xs[i] + xs[j] == 0:
            raise ValueError(f"points {i + 1} and {j + 1} coincide or are opposite")
    one = xs[0] * 0 + 1 if xs else 1
    # ratio[a][b] = (x_a + x_b) / (x_a - x_b)
    ratio = [[(xs[a] + xs[b]) / (xs[a] - xs[b]) if a != b else None for b in range(N)]
             for a in range(N)]
    full = [_prod((ratio[a][b] for b in range(N) if b != a), one) for a in range(N)]
    terms = []
    for ks in permutations(range(N), m):
        t = _prod((xs[k] ** l * full[k] for k, l in zip(ks, lam)), one)
        for i, j in combinations(range(m), 2):
            # (x_kj - x_ki)/(x_kj + x_ki) = 1 / ratio[kj][ki] with a sign flip
            t = t * (-1 / ratio[ks[i]][ks[j]])
        terms.append(t)
    return 2**m * rsum(terms)


# --------------------------------------------------------------------------
# The defining multiple sum and the pfaffian
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pd_prefactor(ctx: QContext, n: int, m: int):
    return (qp(ctx, 1, n, -1) / qp(ctx, 1, n)) ** m


@lru_cache(maxsize=None)
def _antisym(ctx: QContext, a: int, b: int):
    """(q^b - q^a) / (q^b + q^a)."""
    qa, qb = ctx.qpow(a), ctx.qpow(b)
    return (qb - qa) / (qb + qa)


def p_multisum(xs: Sequence, n: int, ctx: QContext):
    """P_n(x_1..x_m) by its defining m-fold sum over 0 <= k_i <= n."""
    m = len(xs)
    one = ctx.one
    if m == 0:
        return one
    cols = [[p1_coefficient(ctx, n, k) * x**k for k in range(n + 1)] for x in xs]
    terms = []
    for ks in permutations(range(n + 1), m):
        t = _prod((cols[i][k] for i, k in enumerate(ks)), one)
        for i, j in combinations(range(m), 2):
            t = t * _antisym(ctx, ks[i], ks[j])
        terms.append(t)
    return _pd_prefactor(ctx, n, m) * rsum(terms)


def p_two_row(x, y, n: int, ctx: QContext):
    return p_multisum([x, y], n, ctx)


def p_pfaffian(xs: Sequence, n: int, ctx: QContext, two_row: Callable | None = None):
    """P_n as the pfaffian of two-row values; odd m by adjoining the point 0.

    For odd m, P_n(x) = (-1)^m (q;q)_{n+1}/(-q;q)_{n+1} / (x_1...x_m) * P_{n+1}(x, 0).
    """
    two_row = two_row or p_two_row
    m = len(xs)
    if m == 0:
        return ctx.one
    if m % 2 == 0:
        rows = [[ctx.zero] * m for _ in range(m)]
        for i, j in combinations(range(m), 2):
            v = two_row(xs[i], xs[j], n, ctx)
            rows[i][j], rows[j][i] = v, -v
        return pfaffian(rows)
    if any(x == 0 for x in xs):
        raise MethodNotApplicable("odd-m pfaffian needs nonzero points")
    ext = list(xs) + [ctx.zero]
    val = p_pfaffian(ext, n + 1, ctx, two_row)
    scale = qp(ctx, 1, n + 1) / qp(ctx, 1, n + 1, -1) / _prod(xs, ctx.one)
    return -scale * val if m % 2 else scale * val


def p_two_row_cd(x, y, n: int, ctx: QContext):
    """P_n(x, y) through the two-row Christoffel-Darboux quotient."""
    if n == 0:
        return ctx.zero
    if x * y == 1:
        raise ValueError("xy = 1 is a removable singularity; evaluate symbolically")
    qn = ctx.qpow(n + 1)
    num = y * p1_direct(x, n + 1, ctx) * p1_direct(y, n - 1, ctx) \
        - x * p1_direct(x, n - 1, ctx) * p1_direct(y, n + 1, ctx)
    return (1 - qn) / (1 + qn) * num / (1 - x * y)


def p_rce(x, y, n: int, ctx: QContext, wx=None, wy=None):
    """P_n(x, y) as a sum of products of one-variable P_j, using witnesses sqrt(x), sqrt(y)."""
    if wx is None or wy is None:
        if wx is None and wy is None:
            wx, wy = sqrt_witness(x, ctx), sqrt_witness(y, ctx)
        else:
            raise ValueError("give both witnesses or neither")
    if wx * wx != x or wy * wy != y:
        raise ValueError("witnesses must square to the points")
    wxy = wx * wy
    pre = (wx + wy) / (1 + wxy)
    terms = []
    for j in range(n):
        terms.append(wxy ** (n - 1 - j) * (
            wy * p1_direct(x, j + 1, ctx) * p1_direct(y, j, ctx)
            - wx * p1_direct(x, j, ctx) * p1_direct(y, j + 1, ctx)))
    return pre * rsum(terms) if terms else ctx.zero


def p_api(xs: Sequence, n: int, ctx: QContext, ws: Sequence | None = None):
    """Transformed pfaffian: entries (1 + w_i w_j)/(w_i + w_j) P_n(x_i, x_j), m even."""
    m = len(xs)
    if m % 2:
        raise MethodNotApplicable("the transformed pfaffian needs even m")
    ws = ws if ws is not None else [sqrt_witness(x, ctx) for x in xs]
    rows = [[ctx.zero] * m for _ in range(m)]
    pre = ctx.one
    for i, j in combinations(range(m), 2):
        f = (1 + ws[i] * ws[j]) / (ws[i] + ws[j])
        v = f * p_two_row(xs[i], xs[j], n, ctx)
        rows[i][j], rows[j][i] = v, -v
        pre = pre / f
    return pre * pfaffian(rows)


# --------------------------------------------------------------------------
# Determinant formulas
# --------------------------------------------------------------------------


def _dt_prefactor(ctx: QContext, n: int, m: int):
    out = ctx.one
    for i in range(1, m + 1):
        out = out * qp(ctx, n + 1 - m + i, i - 1) / qp(ctx, n + 1 - m + i, i - 1, -1)
    return out


def _pair_product(xs, one):
    return _vandermonde_pairs(xs, one, lambda a, b: 1 - a * b)


def p_determinant(xs: Sequence, n: int, ctx: QContext):
    """det(x_i^(j-1) P_{n+m+1-2j}(x_i)) with its prefactor, over prod (1 - x_i x_j)."""
    m = len(xs)
    if m == 0:
        return ctx.one
    if m > n + 1:
        raise MethodNotApplicable("needs m <= n + 1")
    pp = _pair_product(xs, ctx.one)
    if pp == 0:
        raise ValueError("1 - x_i x_j vanishes for some pair")
    rows = [[x ** (j - 1) * p1_direct(x, n + m + 1 - 2 * j, ctx) for j in range(1, m + 1)]
            for x in xs]
    return _dt_prefactor(ctx, n, m) * det(rows) / pp


def q_det_formula(lam, n: int, ctx: QContext):
    """Q_lambda(1, ..., q^n) from one-row tableau generating functions in a determinant."""
    lam = tuple(lam)
    m = len(lam)
    if m == 0:
        return ctx.one
    pre = _dt_prefactor(ctx, n, m)
    for i, j in combinations(range(m), 2):
        pre = pre / (1 - ctx.qpow(lam[i] + lam[j]))
    rows = []
    for li in lam:
        rows.append([ctx.qpow((j - 1) * li) * gf_marked((li,), n + m + 2 - 2 * j).in_context(ctx)
                     for j in range(1, m + 1)])
    return pre * det(rows)


# --------------------------------------------------------------------------
# Hypergeometric multiple sums
# --------------------------------------------------------------------------


def _ratio(upper, lower, base, k, one):
    num = one
    for a in upper:
        num = num * qpoch(a, k, base, one)
    den = one
    for b in lower:
        den = den * qpoch(b, k, base, one)
    return num / den


def _multi_sum(columns, delta, m, N, one):
    """sum over k in [0, N]^m of prod_{i<j} delta(k_i, k_j) prod_i columns[i][k_i]."""
    terms = []
    for ks in permutations(range(N + 1), m):
        t = _prod((columns[i][k] for i, k in enumerate(ks)), one)
        for i, j in combinations(range(m), 2):
            t = t * delta(ks[i], ks[j])
        terms.append(t)
    return rsum(terms) if terms else one * 0


def p_theorem_th(xs: Sequence, n: int, ctx: QContext, ws: Sequence | None = None):
    """P_n as the m-fold balanced sum with hyperoctahedral symmetry (needs sqrt(x_i))."""
    m = len(xs)
    one = ctx.one
    if m == 0:
        return one
    ws = list(ws) if ws is not None else [sqrt_witness(x, ctx) for x in xs]
    q = ctx.q
    h = ctx.qpow(Fraction(1, 2))
    lower = [q, q, ctx.qpow(Fraction(3, 2)), ctx.qpow(Fraction(3, 2), -1)]
    cols = []
    for w in ws:
        upper = [ctx.qpow(-n), ctx.qpow(n + 2), h / w, -h * w]
        cols.append([_ratio(upper, lower, q, k, one) * q**k for k in range(n + 1)])

    def delta(a, b):
        return (ctx.qpow(b) - ctx.qpow(a)) / (1 - ctx.qpow(a + b + 1))

    s = _multi_sum(cols, delta, m, n, one)
    pre = ctx.qpow(Fraction(m * (m - 1 - 2 * n), 4)) * ((1 - q ** (n + 1)) / (1 - q)) ** m
    pre = pre * _prod((w**n for w in ws), one)
    for i, j in combinations(range(m), 2):
        pre = pre * (ws[i] + ws[j]) / (1 + ws[i] * ws[j])
    return pre * s


def p_theorem_ot(xs: Sequence, n: int, ctx: QContext):
    """P_n through the Schlosser-type sum over [0, n+m-1]^m (singular at q = 1)."""
    m = len(xs)
    one = ctx.one
    if m == 0:
        return one
    q = ctx.q
    Q = ctx.qpow
    pre = (-1) ** comb(m, 2) * Q((n + 1) * comb(m, 2) + 2 * comb(m, 3))
    pre = pre * (qp(ctx, 1, n, -1) / qp(ctx, 1, m + n - 1)) ** m
    for i in range(1, m + 1):
        pre = pre * qp(ctx, n + 1 - m + i, i - 1) / qp(ctx, 2 - m, i - 1, -1)
    upper = [Q(1 - m - n), Q(2 - m, -1)]
    lower = [q, Q(-n, -1)]
    N = n + m - 1
    cols = [[_ratio(upper, lower, q, k, one) * x**k for k in range(N + 1)] for x in xs]

    def delta(a, b):
        return (Q(b) - Q(a)) * (1 - Q(a + b + 1 - m - n))

    s = _multi_sum(cols, delta, m, N, one)
    return pre * s / _pair_product(xs, one)


DFT_FORMS = ("ea", "eb", "ec", "ed", "oa", "ob", "oc", "od")


def dft_forms_for(n: int, m: int) -> tuple:
    """The four forms applicable for this parity of n + m."""
    return DFT_FORMS[:4] if (n + m) % 2 else DFT_FORMS[4:]


def p_theorem_dft(xs: Sequence, n: int, ctx: QContext, form: str):
    """P_n through one of eight factored multiple sums (four per parity of n + m)."""
    if form not in DFT_FORMS:
        raise ValueError(f"unknown form {form!r}")
    m = len(xs)
    one = ctx.one
    if m == 0:
        return one
    odd = (n + m) % 2 == 1
    if odd != (form[0] == "e"):
        raise MethodNotApplicable(
            f"form {form} needs n + m {'odd' if form[0] == 'e' else 'even'}, got n={n}, m={m}")
    q = ctx.q
    Q = ctx.qpow
    F = Fraction
    q2 = q * q
    c2 = comb(m + 1, 3)
    c1 = comb(m + 1, 2)
    base, two_step = q, False
    if form in ("ea", "eb", "ec", "ed"):
        N = (n + m - 1) // 2
    else:
        N = (n + m - 2) // 2
    pre = one
    if form == "ea":
        pre = (-1) ** comb(m, 2) * Q(-F(c2, 2) - F(n * c1, 2)) / (1 - q) ** m
        for i in range(1, m + 1):
            pre = pre * qp(ctx, n + 1 - m + i, i) / (
                qp(ctx, F(1 - n - m, 2), i - 1) * qp(ctx, F(3 + n - m, 2), i - 1, -1))
        ups = [Q(F(1 - n - m, 2)), Q(F(3 + n - m, 2), -1)]
        lows = [q, q, Q(F(3, 2)), Q(F(3, 2), -1)]
        shift = q
    elif form == "eb":
        pre = Q(-F(n * m, 4)) * (qp(ctx, 1, (n + 1 - m) // 2, -1) / qp(ctx, 1, N)) ** m
        for i in range(1, m + 1):
            e = (n + m + 1 - 2 * i) // 2
            pre = pre * qp(ctx, n + 1 - m + i, i - 1) * qp(ctx, F(3, 2), e) / qp(ctx, F(1, 2), e, -1)
        ups = [Q(F(1 - n - m, 2)), Q(F(3 + n - m, 2), -1)]
        lows = [q, Q(F(1, 2)), Q(F(3, 2)), Q(1, -1)]
        shift = Q(F(1, 2))
    elif form == "ec":
        pre = Q(-F(n * m, 2)) / ((1 - q) ** m * qp(ctx, 3 + n - m, m - 1, 1, 2) ** m)
        for i in range(1, m + 1):
            pre = pre * qp(ctx, n + 1 - m + i, m)
        ups = [Q(1 - n - m), Q(3 + n - m)]
        lows = [q, q2, q2, Q(3)]
        shift = q
        base, two_step = q2, True
    elif form == "ed":
        pre = Q(-n * m) / ((1 - q) ** (2 * m) * qp(ctx, 3 + n - m, m - 1, 1, 2) ** m)
        for i in range(1, m + 1):
            pre = pre * qp(ctx, n + 1 - m + i, i) ** 2
        ups = [Q(1 - n - m), Q(3 + n - m)]
        lows = [q2, q2, Q(3), Q(3)]
        shift = q2
        base, two_step = q2, True
    elif form == "oa":
        pre = (-1) ** comb(m, 2) * Q(-F(c2, 2) - F((n - 1) * c1, 2)) / (1 - q) ** (2 * m)
        for i in range(1, m + 1):
            pre = pre * qp(ctx, n + 1 - m + i, i) / (
                qp(ctx, F(2 - n - m, 2), i - 1) * qp(ctx, F(4 + n - m, 2), i - 1, -1))
        ups = [Q(F(2 - n - m, 2)), Q(F(4 + n - m, 2), -1)]
        lows = [q, q2, Q(F(3, 2)), Q(F(3, 2), -1)]
        shift = q
    elif form == "ob":
        pre = Q(-F((n - 1) * m, 4)) * qp(ctx, 1, (n + 2 - m) // 2, -1) ** m / (
            (1 - q) ** m * qp(ctx, 1, N) ** m)
        for i in range(1, m + 1):
            e = (n + m - 2 * i) // 2
            pre = pre * qp(ctx, n + 1 - m + i, i - 1) * qp(ctx, F(3, 2), e) / qp(ctx, F(3, 2), e, -1)
        ups = [Q(F(2 - n - m, 2)), Q(F(4 + n - m, 2), -1)]
        lows = [q, Q(F(3, 2)), Q(F(3, 2)), Q(1, -1)]
        shift = Q(F(1, 2))
    elif form == "oc":
        pre = Q(-F((n - 1) * m, 2)) / ((1 - q) ** (2 * m) * qp(ctx, 4 + n - m, m - 2, 1, 2) ** m)
        for i in range(1, m + 1):
            pre = pre * qp(ctx, n + 1 - m + i, i - 1) ** 2
        ups = [Q(2 - n - m), Q(4 + n - m)]
        lows = [q2, q2, Q(3), Q(3)]
        shift = q
        base, two_step = q2, True
    else:  # od
        pre = Q(-(n - 1) * m) / ((1 - q) ** (2 * m) * (1 - q2) ** m
                                 * qp(ctx, 4 + n - m, m - 2, 1, 2) ** m)
        for i in range(1, m + 1):
            pre = pre * qp(ctx, n + 1 - m + i, m)
        ups = [Q(2 - n - m), Q(4 + n - m)]
        lows = [q2, Q(3), Q(3), Q(4)]
        shift = q2
        base, two_step = q2, True
    cols = []
    for x in xs:
        upper = ups + [shift * x, shift / x]
        cols.append([_ratio(upper, lows, base, k, one) * base**k for k in range(N + 1)])
        if odd:
            pre = pre * x**N
        else:
            pre = pre * (1 - x) * x**N
    step = 2 if two_step else 1

    def delta(a, b):
        return Q(step * b) - Q(step * a)

    s = _multi_sum(cols, delta, m, N, one)
    return pre * s / _pair_product(xs, one)


def p_two_det(xs: Sequence, ys: Sequence, n: int, ctx: QContext, form: str = "det"):
    """P_n(x_1..x_m, y_1..y_m) from a determinant of two-row values or its expansion."""
    m = len(xs)
    if len(ys) != m:
        raise ValueError("need as many y as x")
    one = ctx.one
    pre = one
    for x in xs:
        for y in ys:
            pre = pre * (y - x)
    pre = pre / (_pair_product(xs, one) * _pair_product(ys, one))
    if form == "det":
        rows = [[p_two_row(x, y, n, ctx) / (y - x) for y in ys] for x in xs]
        return pre * det(rows)
    if form != "sum":
        raise ValueError(f"unknown form {form!r}")
    ks_all = [k for k in range(n) if (k - (n - 1)) % 2 == 0]
    terms = []
    for ks in combinations(sorted(ks_all, reverse=True), m):
        w = one
        for k in ks:
            w = w * (1 + ctx.qpow(k + 1)) / (1 - ctx.qpow(k + 1))
        dx = det([[x ** ((n - 1 - k) // 2) * p1_direct(x, k, ctx) for x in xs] for k in ks])
        dy = det([[y ** ((n - 1 - k) // 2) * p1_direct(y, k, ctx) for y in ys] for k in ks])
        terms.append(w * dx * dy)
    return pre * rsum(terms) if terms else ctx.zero


# --------------------------------------------------------------------------
# The permutation-sum route
# --------------------------------------------------------------------------


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def nimmo(lam, xs: Sequence, max_vars: int = 8):
    """Q_lambda(x_1..x_N) by a signed sum over S_N with l = floor((N - m)/2) pair factors."""
    lam = tuple(lam)
    N = len(xs)
    m = len(lam)
    if N > max_vars:
        raise ValueError(f"size guard: N = {N} exceeds {max_vars}")
    if m > N:
        return 0 * xs[0] if xs else 0
    l = (N - m) // 2
    one = xs[0] * 0 + 1
    pre = Fraction(2 ** m, 2 ** l * factorial(l)) if m >= l else Fraction(1, 2 ** (l - m) * factorial(l))
    for i, j in combinations(range(N), 2):
        pre = pre * (xs[i] + xs[j]) / (xs[i] - xs[j])
    terms = []
    for p in permutations(range(N)):
        t = one * _perm_sign(p)
        for i in range(m):
            t = t * xs[p[i]] ** lam[i]
        for i in range(l):
            a, b = xs[p[m + 2 * i]], xs[p[m + 2 * i + 1]]
            t = t * (a - b) / (a + b)
        terms.append(t)
    return pre * rsum(terms)


def nimmo_p(xs: Sequence, n: int, ctx: QContext, max_vars: int = 8):
    """P_n(x_1..x_m) by the signed sum over S_{n+1} (size guard n + 1 <= max_vars)."""
    m = len(xs)
    if n + 1 > max_vars:
        raise ValueError(f"size guard: n + 1 = {n + 1} exceeds {max_vars}")
    if m > n + 1:
        raise MethodNotApplicable("needs m <= n + 1")
    l = (n + 1 - m) // 2
    one = ctx.one
    pre = Fraction(1, 2**l * factorial(l)) * one
    for j in range(1, n + 1):
        pre = pre * qp(ctx, 1, j, -1) / qp(ctx, 1, j)
    powers = [[x**e for e in range(n + 1)] for x in xs]
    pair = {}
    for d in range(-n, n + 1):
        qd = ctx.qpow(d)
        pair[d] = (1 - qd) / (1 + qd)
    grouped: dict = {}
    for p in permutations(range(n + 1)):
        # sigma(i) - 1 is p[i]; pair factors depend on differences only
        key = tuple(p[m + 2 * i + 1] - p[m + 2 * i] for i in range(l))
        mono = (_perm_sign(p), tuple(p[:m]))
        grouped.setdefault(key, {})
        grouped[key][mono[1]] = grouped[key].get(mono[1], 0) + mono[0]
    terms = []
    for key, monos in grouped.items():
        w = _prod((pair[d] for d in key), one)
        inner = []
        for exps, c in monos.items():
            if c:
                inner.append(c * _prod((powers[i][e] for i, e in enumerate(exps)), one))
        if inner:
            terms.append(w * rsum(inner))
    return pre * rsum(terms) if terms else ctx.zero


# --------------------------------------------------------------------------
# q = 1 evaluations
# --------------------------------------------------------------------------


def _q1_qc(lam, N: int) -> Fraction:
    n = N - 1
    m = len(lam)
    cols = []
    for l in lam:
        a = Fraction(1 - l, 2)
        cols.append([pochhammer(-n, k) * pochhammer(n + 2, k) * pochhammer(a, k)
                     / (factorial(k) ** 2 * pochhammer(Fraction(3, 2), k)) for k in range(n + 1)])
    total = Fraction(0)
    for ks in permutations(range(n + 1), m):
        t = Fraction(1)
        for i, k in enumerate(ks):
            t *= cols[i][k]
        if t == 0:
            continue
        for i, j in combinations(range(m), 2):
            t *= Fraction(ks[i] - ks[j], ks[i] + ks[j] + 1)
        total += t
    return (2 * n + 2) ** m * total


def _q1_fdc(lam, n: int) -> Fraction:
    m = len(lam)
    pre = Fraction(2 ** (m * (2 * n + 1 - m) // 2))
    for i in range(1, m + 1):
        pre /= factorial(n - m + i - 1)
    for i, j in combinations(range(m), 2):
        pre /= lam[i] + lam[j]
    rows = [[poly_eval(f_poly(n + m - 2 * j), Fraction(li)) for j in range(1, m + 1)] for li in lam]
    return pre * det(rows)


def _gen_schur_rect(k: int, ys: Sequence, poly: Callable[[int], tuple]):
    """det(p_{k+j-1}(y_i)) / prod_{i<j} (y_j - y_i)."""
    m = len(ys)
    rows = [[poly_eval(poly(k + j), y) for j in range(m)] for y in ys]
    den = Fraction(1)
    for i, j in combinations(range(m), 2):
        den *= ys[j] - ys[i]
    return det(rows) / den if m else Fraction(1)


def _q1_kernel(lam, n: int) -> Fraction:
    m = len(lam)
    k, eps = divmod(n - m, 2)
    pre = Fraction(2 ** (m * (2 * n + 1 - m) // 2) * (-1) ** (k * m))
    for i in range(1, m + 1):
        pre /= factorial(n - i)
    for l in lam:
        pre *= l**eps
    for i, j in combinations(range(m), 2):
        pre *= lam[i] - lam[j]
    ys = [Fraction(-l * l) for l in lam]
    return pre * _gen_schur_rect(k, ys, lambda d: classical_pk(d, eps))


def _q1_row3f2(lam, N: int) -> Fraction:
    (l,) = lam
    n = N - 1
    return (2 * n + 2) * hyper_classical([-n, n + 2, Fraction(1 - l, 2)], [1, Fraction(3, 2)], 1, n)


def _q1_row2f1(lam, N: int) -> Fraction:
    (l,) = lam
    n = N - 1
    return (2 * n + 2) * hyper_classical([-n, 1 - l], [2], 2, n)


Q_ONE_METHODS = ("qc", "fdc", "kernel", "row3f2", "row2f1")


def q_one(lam, n: int, method: str = "qc") -> int:
    """Q_lambda(1^n), the number of marked shifted tableaux over an n-letter alphabet."""
    lam = tuple(StrictPartition(tuple(lam)).parts)
    m = len(lam)
    if method not in Q_ONE_METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method in ("row3f2", "row2f1") and m != 1:
        raise MethodNotApplicable(f"{method} needs a one-row shape")
    if m == 0:
        return 1
    if n < m:
        return 0
    value = {
        "qc": _q1_qc,
        "fdc": _q1_fdc,
        "kernel": _q1_kernel,
        "row3f2": _q1_row3f2,
        "row2f1": _q1_row2f1,
    }[method](lam, n)
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"{method} gave a non-integer count {value}")
    return int(value)


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------


def q_staircase(kind: str, m: int, n: int, ctx: QContext):
    """Closed product for Q_lambda(1, ..., q^n) at staircase-type shapes.

    ``plain``: (m, ..., 1) from the product over hooks of the principal
    specialisation; ``plain_sfs``: 2^m s_(m..1)(1, ..., q^n) from the
    Vandermonde quotient; ``odd``: (2m-1, ..., 1); ``even``: (2m, ..., 2);
    ``half``: 2^m P_n(q^(1/2), q^(3/2), ..., q^(m-1/2)).
    """
    q = ctx.q
    Q = ctx.qpow
    one = ctx.one
    out = one * 2**m
    if kind == "plain":
        out = out * Q(comb(m + 1, 3))
        for i in range(1, m + 1):
            out = out * qp(ctx, n + 1 - m + i, i) / qp(ctx, 1, i, 1, 2)
        return out
    if kind == "plain_sfs":
        N = n + 1
        lam = list(range(m, 0, -1)) + [0] * (N - m)
        if m > N:
            return ctx.zero
        for i, j in combinations(range(1, N + 1), 2):
            out = out * (Q(lam[j - 1] + N - j) - Q(lam[i - 1] + N - i)) / (Q(N - j) - Q(N - i))
        return out
    if kind == "odd":
        out = out * Q(Fraction(comb(2 * m, 3), 4))
        for i in range(1, m + 1):
            out = out * qp(ctx, n + 1 - m + i, m) / (qp(ctx, 1, i - 1, 1, 2) * qp(ctx, 1, i, 1, 2))
        return out
    if kind == "even":
        out = out * Q(2 * comb(m + 1, 3))
        for i in range(1, m + 1):
            out = out * (qp(ctx, n + 1 - m + i, i) / qp(ctx, 1, i, 1, 2)) ** 2
        return out
    if kind == "half":
        F = Fraction
        out = out * (-1) ** comb(m, 2) * Q(F(comb(2 * m, 3), 8))
        if (n + m) % 2:
            for i in range(1, m + 1):
                e = (n + m + 1 - 2 * i) // 2
                out = out * qp(ctx, 1, i - 1) * qp(ctx, n + 1 - m + i, i - 1) \
                    * qp(ctx, F(3, 2), e) * qp(ctx, 1, e, -1)
                out = out / (qp(ctx, 1, i - 1, -1) * qp(ctx, F(1, 2), i - 1)
                             * qp(ctx, F(3, 2), i - 1) * qp(ctx, 1, e) * qp(ctx, F(1, 2), e, -1))
            return out
        out = out * qp(ctx, F(1, 2), m) / (1 - q) ** m
        for i in range(1, m + 1):
            e = (n + m - 2 * i) // 2
            out = out * qp(ctx, 1, i - 1) * qp(ctx, n + 1 - m + i, i - 1) \
                * qp(ctx, F(3, 2), e) * qp(ctx, 1, e + 1, -1)
            out = out / (qp(ctx, 1, i - 1, -1) * qp(ctx, F(3, 2), i - 1) ** 2
                         * qp(ctx, F(3, 2), e, -1) * qp(ctx, 1, e))
        return out
    raise ValueError(f"unknown staircase kind {kind!r}")


def staircase_shape(kind: str, m: int):
    if kind in ("plain", "plain_sfs"):
        return tuple(range(m, 0, -1))
    if kind == "odd":
        return tuple(range(2 * m - 1, 0, -2))
    if kind == "even":
        return tuple(range(2 * m, 0, -2))
    if kind == "half":
        return tuple(Fraction(2 * i - 1, 2) for i in range(m, 0, -1))
    raise ValueError(kind)


def osc_count(m: int, n: int) -> int:
    """Marked tableaux of the odd staircase (2m-1, ..., 1) over n letters."""
    if n < m:
        return 0
    out = Fraction(2 ** (m * m))
    for i in range(1, m + 1):
        out *= Fraction(factorial(n + i - 1) * factorial(i - 1),
                        factorial(n + i - m - 1) * factorial(i + m - 1))
    return int(out)


def kawanaka(lam, ctx: QContext | None = None):
    """The product for Q_lambda(1, q, q^2, ...) as a rational function of q."""
    ctx = ctx or QContext(1)
    lam = tuple(lam)
    out = ctx.one
    for l in lam:
        out = out * qp(ctx, 0, l, -1) / qp(ctx, 1, l)
    for i, j in combinations(range(len(lam)), 2):
        out = out * (ctx.qpow(lam[j]) - ctx.qpow(lam[i])) / (1 - ctx.qpow(lam[i] + lam[j]))
    return out


def kawanaka_truncation_check(lam, n: int) -> bool:
    """gf_marked(lam, n) and the infinite product agree on q^k for k < n."""
    if n == 0:
        return True
    series = truncate_series(kawanaka(lam, QContext(1)), n - 1)
    gf = gf_marked(lam, n)
    return all(series.coefficient(k) == gf.coefficient(k) for k in range(n))


def _mono_mul(a: dict, b: dict, N: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > N:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def kbf_sides(m: int, N: int, ctx: QContext | None = None):
    """Both sides of the hook-weighted Schur sum identity as series in x_1..x_m to degree N.

    The left side sums over partitions with |mu| <= N; the right side expands
    (-x q; q)_inf / (x; q)_inf = sum_k (-q;q)_k/(q;q)_k x^k and
    1/(1 - x_i x_j) = sum_k (x_i x_j)^k.
    Returns two dicts {exponent tuple: coefficient in Q(q)}.
    """
    ctx = ctx or QContext(1)
    one = ctx.one
    lhs: dict = {}
    for mu in partitions_in_box(m, N):
        if mu.size > N:
            continue
        hp, _ = hook_content_products(mu, 0, 0, ctx)
        for e, c in schur_monomials(mu, m).items():
            lhs[e] = lhs.get(e, ctx.zero) + hp * c
    rhs = {tuple([0] * m): one}
    for i in range(m):
        factor = {}
        for k in range(N + 1):
            e = [0] * m
            e[i] = k
            factor[tuple(e)] = qp(ctx, 1, k, -1) / qp(ctx, 1, k)
        rhs = _mono_mul(rhs, factor, N)
    for i, j in combinations(range(m), 2):
        factor = {}
        for k in range(N // 2 + 1):
            e = [0] * m
            e[i] = e[j] = k
            factor[tuple(e)] = one
        rhs = _mono_mul(rhs, factor, N)
    lhs = {e: c for e, c in lhs.items() if c != 0}
    return lhs, rhs


def kbf_check(m: int, N: int) -> bool:
    lhs, rhs = kbf_sides(m, N)
    return lhs == rhs


def krattenthaler(x, y, n: int, m: int, ctx: QContext):
    """Both sides of the multiple q-Chu-Vandermonde summation."""
    q = ctx.q
    one = ctx.one
    terms = []
    for ks in combinations(range(n, -1, -1), m):
        t = one
        for i, j in combinations(range(m), 2):
            t = t * (ctx.qpow(ks[j]) - ctx.qpow(ks[i])) ** 2
        for k in ks:
            t = t * qpoch(x, k, q, one) * qpoch(y, n - k, q, one) / (
                qp(ctx, 1, k) * qp(ctx, 1, n - k)) * y**k
        terms.append(t)
    lhs = rsum(terms) if terms else ctx.zero
    rhs = ctx.qpow(2 * comb(m, 3)) * y ** comb(m, 2)
    for i in range(1, m + 1):
        rhs = rhs * qpoch(x, i - 1, q, one) * qpoch(y, i - 1, q, one) * qp(ctx, 1, i - 1)
        rhs = rhs * qpoch(x * y * q ** (i + m - 2), n + 1 - m, q, one) / qp(ctx, 1, n + i - m)
    return lhs, rhs


def osq_values(m: int, n: int, ctx: QContext) -> list:
    """Four expressions for P_n(q, q^3, ..., q^(2m-1)) that must coincide."""
    xs = [ctx.qpow(2 * i - 1) for i in range(1, m + 1)]
    direct = p_multisum(xs, n, ctx)
    lhs, _ = krattenthaler(-ctx.q, -ctx.q, n, m, ctx)
    sign = (-1) ** comb(m, 2) * ctx.qpow(Fraction(comb(2 * m, 3), 4))
    mid = sign * ctx.one
    last = sign * ctx.one
    for i in range(1, m + 1):
        mid = mid * qp(ctx, 1, i - 1, -1) ** 2 * qp(ctx, 1, i - 1) * qp(ctx, i + m, n + 1 - m) \
            / qp(ctx, 1, n + i - m)
        last = last * qp(ctx, n + 1 - m + i, m) / (qp(ctx, 1, i - 1, 1, 2) * qp(ctx, 1, i, 1, 2))
    return [direct, lhs, mid, last]


def epi_check(a, m: int, ctx: QContext) -> bool:
    q = ctx.q
    one = ctx.one
    lhs = _prod((qpoch(a * q**i, m, q, one) for i in range(1, m + 1)), one)
    rhs = _prod((qpoch(a * q**i, i, q, one) * qpoch(a * q**i, i - 1, q, one)
                 for i in range(1, m + 1)), one)
    return lhs == rhs


def hyperoctahedral_check(xs: Sequence, n: int, ctx: QContext, method: Callable | None = None) -> bool:
    """Inversion symmetry in x_1, in its polynomial form."""
    method = method or p_multisum
    x1 = xs[0]
    if x1 == 0:
        raise ValueError("x_1 must be nonzero")
    rest = list(xs[1:])
    lhs = _prod((1 - x1 * x for x in rest), ctx.one) * method(list(xs), n, ctx)
    rhs = (-x1) ** n * _prod((x - x1 for x in rest), ctx.one) * method([1 / x1] + rest, n, ctx)
    return lhs == rhs


# --------------------------------------------------------------------------
# Method registry
# --------------------------------------------------------------------------


def _appendix(xs, n, ctx):
    from .kernels import appendix_p

    return appendix_p(xs, n, ctx)


def _dft(form):
    return lambda xs, n, ctx: p_theorem_dft(xs, n, ctx, form)


P_METHODS: dict[str, Callable] = {
    "multisum": p_multisum,
    "pfaffian": p_pfaffian,
    "determinant": p_determinant,
    "th": p_theorem_th,
    "ot": p_theorem_ot,
    **{f"dft_{f}": _dft(f) for f in DFT_FORMS},
    "nimmo": nimmo_p,
    "appendix": _appendix,
}


def evaluate(req: EvalRequest):
    """Q_lambda(1, ..., q^n) = 2^m P_n(q^lambda) by the requested method."""
    xs = list(lambda_points(req.lam.parts, req.ctx))
    if req.method == "tableaux":
        return gf_marked(req.lam, req.n + 1).in_context(req.ctx)
    if req.method == "q_det":
        return q_det_formula(req.lam.parts, req.n, req.ctx)
    if req.method == "direct":
        pts = [req.ctx.qpow(k) for k in range(req.n + 1)]
        return q_direct(req.lam.parts, pts, req.ctx)
    if req.method not in P_METHODS:
        raise ValueError(f"unknown method {req.method!r}")
    return 2**req.lam.length * P_METHODS[req.method](xs, req.n, req.ctx)
