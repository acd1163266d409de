"""q-Pochhammer symbols, terminating hypergeometric sums and one-variable P_n.

All functions take a :class:`QContext` and return elements of its field:
RationalFn in Q(s) when the context is symbolic, Fraction when it carries a
numeric value for s. The variable ``x`` of P_n is any element of that field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from flint import fmpq_poly

from .exact import QContext, RationalFn, eval_at, rsum
from .gaussian import I, Gaussian

__all__ = [
    "qpoch",
    "qp",
    "qpoch_ratio",
    "basic_hyper",
    "p1_direct",
    "p1_coefficient",
    "p1_phi43",
    "p1_chia",
    "askey_wilson",
    "connection_identity",
    "c_monic",
    "cn_norm",
    "f_poly",
    "classical_pk",
    "classical_norm",
    "hyper_classical",
    "abel_orthogonality",
    "pochhammer",
    "poly_eval",
]


# --------------------------------------------------------------------------
# Pochhammer symbols
# --------------------------------------------------------------------------


def qpoch(a, k: int, base, one=1):
    """(a; base)_k = prod_{j<k} (1 - a base^j); negative k uses 1/(a base^k; base)_{-k}."""
    if k < 0:
        return one / qpoch(a * base**k, -k, base, one)
    out = one
    term = a
    for _ in range(k):
        out = out * (1 - term)
        term = term * base
    return out


@lru_cache(maxsize=None)
def qp(ctx: QContext, e, k: int, sign: int = 1, base=1):
    """(sign * q^e; q^base)_k, cached. ``e`` and ``base`` may be Fractions."""
    return qpoch(ctx.qpow(e, sign), k, ctx.qpow(base), ctx.one)


def qpoch_ratio(ctx: QContext, upper, lower, k: int, base=1):
    """prod (a_i; q^base)_k / prod (b_i; q^base)_k for (sign, exponent) pairs."""
    num = ctx.one
    for sign, e in upper:
        num = num * qp(ctx, Fraction(e), k, sign, Fraction(base))
    den = ctx.one
    for sign, e in lower:
        den = den * qp(ctx, Fraction(e), k, sign, Fraction(base))
    return num / den


def pochhammer(a, k: int):
    """Rising factorial (a)_k."""
    out = Fraction(1) if isinstance(a, (int, Fraction)) else 1
    for j in range(k):
        out = out * (a + j)
    return out


# --------------------------------------------------------------------------
# Terminating series
# --------------------------------------------------------------------------


def basic_hyper(upper: Sequence, lower: Sequence, base, z, nmax: int, one=1):
    """Terminating sum_{k<=nmax} prod (a;base)_k / ((base;base)_k prod (b;base)_k) z^k.

    Parameters are field elements (or Gaussians). ``nmax`` is the termination
    index supplied by the caller (the series is cut there; a q^{-n} upper
    parameter makes the later terms vanish anyway).
    """
    terms = []
    term = one
    for k in range(nmax + 1):
        terms.append(term)
        if k == nmax:
            break
        bk = base**k
        num = one
        for a in upper:
            num = num * (1 - a * bk)
        if num == 0:
            break
        den = 1 - base * bk
        for b in lower:
            den = den * (1 - b * bk)
        term = term * num * z / den
    if any(isinstance(t, Gaussian) for t in terms):
        return sum(terms[1:], terms[0])
    return rsum(terms)


def hyper_classical(upper: Sequence, lower: Sequence, z, nmax: int):
    """Terminating classical sum_{k<=nmax} prod (a)_k / (k! prod (b)_k) z^k."""
    total = 0
    term = Fraction(1)
    for k in range(nmax + 1):
        total = total + term
        num = 1
        for a in upper:
            num = num * (a + k)
        if num == 0:
            break
        den = k + 1
        for b in lower:
            den = den * (b + k)
        term = term * num * z / den
    return total


# --------------------------------------------------------------------------
# One-variable P_n
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def p1_coefficient(ctx: QContext, n: int, k: int):
    """(-q, q^{-n}; q)_k / (q, -q^{-n}; q)_k, the summand weight of P_n."""
    return qpoch_ratio(ctx, [(-1, 1), (1, -n)], [(1, 1), (-1, -n)], k)


@lru_cache(maxsize=None)
def _p1_prefactor(ctx: QContext, n: int):
    return qp(ctx, 1, n, -1) / qp(ctx, 1, n)


@lru_cache(maxsize=None)
def _p1_poly_coeffs(ctx: QContext, n: int):
    pre = _p1_prefactor(ctx, n)
    return tuple(pre * p1_coefficient(ctx, n, k) for k in range(n + 1))


def p1_direct(x, n: int, ctx: QContext):
    """P_n(x) from its terminating 2phi1 series in x."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return poly_eval(_p1_poly_coeffs(ctx, n), x, ctx.one)


def poly_eval(coeffs, x, one=1):
    """Horner evaluation of sum coeffs[k] x^k."""
    out = one * 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _sqrt_witness(x, sqrt_x, ctx: QContext):
    if sqrt_x is None:
        if isinstance(x, RationalFn) and x.is_monomial() and x.valuation % 2 == 0:
            c = x.num.coefficient(x.valuation)
            r = _rational_sqrt(c)
            if r is not None:
                return RationalFn.s_power(x.valuation // 2, r)
        raise ValueError(
            "square root of x is not representable; pass an explicit witness "
            "(x = w**2) and verify pointwise"
        )
    if sqrt_x * sqrt_x != x:
        raise ValueError("witness does not square to x")
    return sqrt_x


def _rational_sqrt(c: Fraction):
    from math import isqrt

    if c < 0:
        return None
    a, b = isqrt(c.numerator), isqrt(c.denominator)
    if a * a == c.numerator and b * b == c.denominator:
        return Fraction(a, b)
    return None


def p1_phi43(x, n: int, ctx: QContext, form: str = "eq43", sqrt_x=None):
    """P_n(x) through a balanced 4phi3 in sqrt(x) (forms ``eq43`` and ``cidb``).

    Needs q^(1/2), so the root order must be at least 2. ``sqrt_x`` is a
    witness with ``sqrt_x**2 == x``; it is derived automatically for even
    s-monomials.
    """
    w = _sqrt_witness(x, sqrt_x, ctx)
    h = ctx.qpow(Fraction(1, 2))
    q = ctx.q
    one = ctx.one
    pre = (1 - q ** (n + 1)) / (1 - q) * (w / h) ** n
    if form == "eq43":
        upper = [ctx.qpow(-n), ctx.qpow(n + 2), h / w, -h * w]
        lower = [ctx.qpow(Fraction(3, 2)), ctx.qpow(Fraction(3, 2), -1)]
        # base q: the (q;q)_k denominator is built in, the second q in the
        # lower list is the extra lower parameter q.
        lower = [q] + lower
        return pre * basic_hyper(upper, lower, q, q, n, one)
    if form == "cidb":
        # base p = q^(1/2); lower (i q^(3/4), -i q^(3/4); p)_k = (-q^(3/2); q)_k.
        p = h
        upper = [ctx.qpow(Fraction(-n, 2)), ctx.qpow(Fraction(n + 2, 2), -1), h / w, -h * w]
        terms = []
        ratio = one
        for k in range(n + 1):
            terms.append(ratio)
            pk = p**k
            num = one
            for a in upper:
                num = num * (1 - a * pk)
            den = (1 - p * pk) * (1 - q * pk) * (1 + ctx.qpow(Fraction(3, 2)) * q**k)
            ratio = ratio * num * p / den
        return pre * rsum(terms)
    raise ValueError(f"unknown form {form!r}")


def p1_chia(x, n: int, ctx: QContext, form: int):
    """P_n(x) through one of eight 4phi3 expansions symmetric under x -> 1/x.

    Forms 1-4 apply to even n, forms 5-8 to odd n.
    """
    if form not in range(1, 9):
        raise ValueError("form must be in 1..8")
    even = form <= 4
    if (n % 2 == 0) != even:
        raise ValueError(f"form {form} requires {'even' if even else 'odd'} n, got n={n}")
    N = n // 2
    q = ctx.q
    one = ctx.one
    Q = ctx.qpow
    h = Q(Fraction(1, 2))
    xi = one / x
    if form == 1:
        pre = (1 - q ** (2 * N + 1)) / (1 - q) * q ** (-N) * x**N
        s = basic_hyper([Q(-N), Q(N + 1, -1), q * x, q * xi],
                        [q, Q(Fraction(3, 2)), Q(Fraction(3, 2), -1)], q, q, N, one)
    elif form == 2:
        pre = (qp(ctx, Fraction(3, 2), N) * qp(ctx, 1, N, -1)
               / (qp(ctx, 1, N) * qp(ctx, Fraction(1, 2), N, -1))) * h ** (-N) * x**N
        s = basic_hyper([Q(-N), Q(N + 1, -1), h * x, h * xi],
                        [h, Q(Fraction(3, 2)), Q(1, -1)], q, q, N, one)
    elif form == 3:
        q2 = q * q
        pre = (1 - q ** (2 * N + 1)) / (1 - q) * q ** (-N) * x**N
        s = basic_hyper([Q(-2 * N), Q(2 * N + 2), q * x, q * xi],
                        [q, q2, Q(3)], q2, q2, N, one)
    elif form == 4:
        q2 = q * q
        pre = ((1 - q ** (2 * N + 1)) / (1 - q)) ** 2 * q ** (-2 * N) * x**N
        s = basic_hyper([Q(-2 * N), Q(2 * N + 2), q2 * x, q2 * xi],
                        [q2, Q(3), Q(3)], q2, q2, N, one)
    elif form == 5:
        pre = (1 - q ** (2 * N + 2)) * (1 - x) / (1 - q) ** 2 * q ** (-N) * x**N
        s = basic_hyper([Q(-N), Q(N + 2, -1), q * x, q * xi],
                        [q * q, Q(Fraction(3, 2)), Q(Fraction(3, 2), -1)], q, q, N, one)
    elif form == 6:
        pre = (qp(ctx, Fraction(3, 2), N) * qp(ctx, 1, N + 1, -1) * (1 - x)
               / ((1 - q) * qp(ctx, 1, N) * qp(ctx, Fraction(3, 2), N, -1))) * h ** (-N) * x**N
        s = basic_hyper([Q(-N), Q(N + 2, -1), h * x, h * xi],
                        [Q(Fraction(3, 2)), Q(Fraction(3, 2)), Q(1, -1)], q, q, N, one)
    elif form == 7:
        q2 = q * q
        pre = (1 - q ** (2 * N + 2)) * (1 - x) / (1 - q) ** 2 * q ** (-N) * x**N
        s = basic_hyper([Q(-2 * N), Q(2 * N + 4), q * x, q * xi],
                        [q2, Q(3), Q(3)], q2, q2, N, one)
    else:
        q2 = q * q
        pre = ((1 - q ** (2 * N + 2)) ** 2 * (1 - x)
               / ((1 - q) ** 2 * (1 - q2))) * q ** (-2 * N) * x**N
        s = basic_hyper([Q(-2 * N), Q(2 * N + 4), q2 * x, q2 * xi],
                        [Q(3), Q(3), Q(4)], q2, q2, N, one)
    return pre * s


# --------------------------------------------------------------------------
# Askey-Wilson polynomials and connection identities
# --------------------------------------------------------------------------


def askey_wilson(n: int, z, a, b, c, d, base, one=1):
    """p_n((z + 1/z)/2; a, b, c, d | base) via its terminating 4phi3.

    Parameters may be Gaussians. The value is returned as a Gaussian when any
    input is one, otherwise as a field element.
    """
    zi = one / z
    upper = [base ** (-n), a * b * c * d * base ** (n - 1), a * z, a * zi]
    lower = [a * b, a * c, a * d]
    pre = qpoch(a * b, n, base, one) * qpoch(a * c, n, base, one) * qpoch(a * d, n, base, one)
    pre = pre / a**n
    return pre * basic_hyper(upper, lower, base, base, n, one)


def _as_real(v):
    if isinstance(v, Gaussian):
        return v.real()
    return v


def connection_identity(n: int, z, ctx: QContext, form: str):
    """Both sides of an identity between P_n and an Askey-Wilson polynomial.

    ``form`` is one of ``cid``, ``cidb`` (P_n(-z^2) against complex-parameter
    polynomials; ``cidb`` needs root order 4) or ``chia``..``chid`` (P_{2N},
    P_{2N+1} at x = z with the same index n passed as the P-index).
    Returns ``(lhs, rhs)`` as field elements.
    """
    q = ctx.q
    one = ctx.one
    Q = ctx.qpow
    if form == "cid":
        h = Q(Fraction(1, 2))
        lhs = p1_direct(-z * z, n, ctx)
        pre = qp(ctx, 1, n, -1) / (qp(ctx, 1, n) * qp(ctx, n + 2, n))
        aw = askey_wilson(n, Gaussian.lift(z), I * h, -I * h, I * q, -I * q, q, Gaussian(one))
        return lhs, _as_real(aw * (pre * z**n))
    if form == "cidb":
        h = Q(Fraction(1, 2))
        quarter = Q(Fraction(1, 4))
        lhs = p1_direct(-z * z, n, ctx)
        pre = qp(ctx, 1, n, -1, Fraction(1, 2)) / (qp(ctx, 1, n) * qp(ctx, Fraction(3, 2), n, -1))
        aw = askey_wilson(n, Gaussian.lift(z), I * h, -I * h, Gaussian(quarter), Gaussian(-quarter),
                          h, Gaussian(one))
        return lhs, _as_real(aw * (pre * z**n))
    if form not in ("chia", "chib", "chic", "chid"):
        raise ValueError(f"unknown connection form {form!r}")
    x = z
    even = form in ("chia", "chib")
    if (n % 2 == 0) != even:
        raise ValueError(f"form {form} requires {'even' if even else 'odd'} n")
    N = n // 2
    lhs = p1_direct(x, n, ctx)
    h = Q(Fraction(1, 2))
    q2 = q * q
    if form == "chia":
        pre = qp(ctx, 1, N, -1) / qp(ctx, 1, 2 * N)
        aw = askey_wilson(N, x, one, q, h, -h, q, one)
        return lhs, pre * x**N * aw
    if form == "chib":
        pre = qp(ctx, 2, N, 1, 2) / qp(ctx, 1, 2 * N) ** 2
        aw = askey_wilson(N, x, one, q, q, q2, q2, one)
        return lhs, pre * x**N * aw
    if form == "chic":
        pre = qp(ctx, 1, N + 1, -1) / qp(ctx, 1, 2 * N + 1)
        aw = askey_wilson(N, x, q, q, h, -h, q, one)
        return lhs, pre * x**N * (1 - x) * aw
    pre = qp(ctx, 2, N + 1, 1, 2) / qp(ctx, 1, 2 * N + 1) ** 2
    aw = askey_wilson(N, x, q, q, q2, q2, q2, one)
    return lhs, pre * x**N * (1 - x) * aw


# --------------------------------------------------------------------------
# Monic q-ultraspherical polynomials c_k and their norms
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def c_monic(k: int, ctx: QContext) -> tuple:
    """Coefficients (ascending) of the monic c_k in the variable xi.

    Uses c_k(z + 1/z) = sum_j (-1)^j a_j z^(2j-k), with a_j the summand weight
    of P_k, and rewrites the symmetric Laurent polynomial in powers of
    xi = z + 1/z by repeatedly removing the top power.
    """
    laurent = {2 * j - k: p1_coefficient(ctx, k, j) * (-1) ** j for j in range(k + 1)}
    coeffs = [ctx.zero] * (k + 1)
    for d in range(k, -1, -1):
        c = laurent.get(d, ctx.zero)
        if c == 0:
            continue
        coeffs[d] = c
        # subtract c * (z + 1/z)^d = c * sum_i binom(d, i) z^(d - 2i)
        b = 1
        for i in range(d + 1):
            e = d - 2 * i
            laurent[e] = laurent.get(e, ctx.zero) - c * b
            b = b * (d - i) // (i + 1)
    return tuple(coeffs)


def cn_norm(k: int, ctx: QContext):
    """Squared norm of c_k for the normalization fixed by the ultraspherical measure."""
    return qp(ctx, 1, k) * qp(ctx, 1, k + 1) / (qp(ctx, 1, k, -1) * qp(ctx, 1, k + 1, -1))


# --------------------------------------------------------------------------
# The q = 1 families
# --------------------------------------------------------------------------


def _poly_to_fractions(p: fmpq_poly) -> tuple:
    return tuple(Fraction(int(c.p), int(c.q)) for c in p.coeffs())


@lru_cache(maxsize=None)
def f_poly(k: int) -> tuple:
    """Coefficients of f_k(x) = (k+1)!/2^k 2F1(-k, 1-x; 2; 2), ascending in x."""
    total = fmpq_poly([0])
    rising = fmpq_poly([1])  # (1 - x)_j
    for j in range(k + 1):
        c = pochhammer(-k, j) * Fraction(2) ** j / (pochhammer(2, j) * factorial(j))
        total += rising * _fmpq(c)
        rising = rising * fmpq_poly([1 + j, -1])
    total = total * _fmpq(Fraction(factorial(k + 1), 2**k))
    return _poly_to_fractions(total)


def _fmpq(c: Fraction):
    from flint import fmpq

    return fmpq(c.numerator, c.denominator)


_CDH = {0: (Fraction(0), Fraction(1, 2), Fraction(1)), 1: (Fraction(1, 2), Fraction(1), Fraction(1))}


@lru_cache(maxsize=None)
def classical_pk(k: int, eps: int) -> tuple:
    """Coefficients of the monic p_k^{(eps)}(x) = (-1)^k S_k(x; a, b, c).

    S_k is the continuous dual Hahn polynomial as an explicit terminating 3F2:
    S_k = (a+b)_k (a+c)_k sum_j (-k)_j prod_{t<j}((a+t)^2 + x) / ((a+b)_j (a+c)_j j!).
    """
    a, b, c = _CDH[eps]
    total = fmpq_poly([0])
    prod = fmpq_poly([1])
    for j in range(k + 1):
        w = pochhammer(-k, j) / (pochhammer(a + b, j) * pochhammer(a + c, j) * factorial(j))
        total += prod * _fmpq(w)
        prod = prod * fmpq_poly([_fmpq((a + j) ** 2), 1])
    total = total * _fmpq((-1) ** k * pochhammer(a + b, k) * pochhammer(a + c, k))
    return _poly_to_fractions(total)


def classical_norm(k: int, eps: int) -> Fraction:
    """Squared norm of p_k^{(eps)}."""
    if eps == 0:
        return Fraction(factorial(2 * k) * factorial(2 * k + 1), 2 ** (4 * k + 1))
    return Fraction(factorial(2 * k + 1) * factorial(2 * k + 2), 2 ** (4 * k + 3))


def abel_orthogonality(m: int, n: int) -> Fraction:
    """Abel limit t -> 1 of sum_{k>=1} (-1)^(k+1) t^k k f_m(k) f_n(k).

    Each power k^j is realised by (t d/dt)^j applied to t/(1+t), an exact
    rational function of t whose only pole is t = -1.
    """
    fm = fmpq_poly([_fmpq(c) for c in f_poly(m)])
    fn = fmpq_poly([_fmpq(c) for c in f_poly(n)])
    weight = fm * fn * fmpq_poly([0, 1])
    t = RationalFn.s_power(1)
    g = t / (1 + t)
    total = Fraction(0)
    for j, c in enumerate(weight.coeffs()):
        if c != 0:
            total += Fraction(int(c.p), int(c.q)) * eval_at(g, 1)
        g = t * g.derivative()
    return total
