"""Christoffel-Darboux kernels, rectangular generalised Schur functions and
moment-functional routes to P_n.

Measures are represented only by their moments; every integral is a finite
exact computation on an expanded polynomial integrand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Callable, Sequence

from .exact import LaurentPoly, QContext, rsum
from .formulas import MethodNotApplicable, p_multisum
from .gaussian import Gaussian
from .linalg import det, pfaffian
from .qseries import (
    _rational_sqrt,
    c_monic,
    classical_norm,
    classical_pk,
    cn_norm,
    poly_eval,
    qp,
)

__all__ = [
    "OrthoSystem",
    "MomentFunctional",
    "KernelValue",
    "WitnessError",
    "kernel_K",
    "kernel_Ktilde",
    "ktk_check",
    "multikernel",
    "multikernel_tilde",
    "gen_schur",
    "sfl_check",
    "theorem_pkt_check",
    "pkt_sides",
    "two_row_kernel",
    "mu_moments",
    "mu_functional",
    "lambda_apply",
    "appendix_p",
    "kif_sides",
    "kif_check",
    "xi_witness",
    "admissible_sqrt_points",
    "admissible_tilde_points",
    "pkt_points",
]


class WitnessError(ValueError):
    """A required square root or xi-witness is not available over the field."""


# --------------------------------------------------------------------------
# Orthogonal systems
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OrthoSystem:
    """Monic orthogonal polynomials given by coefficient tables and norms."""

    name: str
    coeffs: Callable[[int], tuple]
    norm_fn: Callable[[int], object]
    one: object = Fraction(1)
    symmetric: bool = False  # vanishing odd moments

    @staticmethod
    def ultraspherical(ctx: QContext) -> "OrthoSystem":
        return OrthoSystem(
            name=f"c_k[r={ctx.root_order},s={ctx.s_value}]",
            coeffs=lambda k: c_monic(k, ctx),
            norm_fn=lambda k: cn_norm(k, ctx),
            one=ctx.one,
            symmetric=True,
        )

    @staticmethod
    def classical(eps: int) -> "OrthoSystem":
        if eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        return OrthoSystem(
            name=f"p^({eps})",
            coeffs=lambda k: classical_pk(k, eps),
            norm_fn=lambda k: classical_norm(k, eps),
        )

    def norm(self, k: int):
        v = self.norm_fn(k)
        if v == 0:
            raise ArithmeticError(f"norm of p_{k} vanishes")
        return v

    def __call__(self, k: int, x):
        if k < 0:
            raise ValueError("negative degree")
        return poly_eval(self.coeffs(k), x, self.one)


@dataclass(frozen=True)
class KernelValue:
    """A kernel value with the data that defined it."""

    value: object
    n: int
    m: int
    points: tuple = field(default_factory=tuple)
    form: str = ""


def _prod(values, one):
    out = one
    for v in values:
        out = out * v
    return out


def _diff_product(vals, one, square=False):
    out = one
    for i, j in combinations(range(len(vals)), 2):
        out = out * ((vals[j] ** 2 - vals[i] ** 2) if square else (vals[j] - vals[i]))
    return out


# --------------------------------------------------------------------------
# One- and two-point kernels
# --------------------------------------------------------------------------


def kernel_K(n: int, x, y, sys: OrthoSystem, form: str = "sum"):
    """K^n(x, y): sum of p_k(x)p_k(y)/||p_k||^2 over k < n, or its quotient form."""
    if form == "sum":
        return rsum([sys(k, x) * sys(k, y) / sys.norm(k) for k in range(n)]) if n else 0 * sys.one
    if form == "quotient":
        if x == y:
            raise ValueError("quotient form needs x != y")
        if n == 0:
            return 0 * sys.one
        return (sys(n, x) * sys(n - 1, y) - sys(n - 1, x) * sys(n, y)) / (sys.norm(n - 1) * (x - y))
    raise ValueError(f"unknown form {form!r}")


def kernel_Ktilde(n: int, x, y, sys: OrthoSystem, form: str = "sum"):
    """The parity-restricted kernel: k = n - 1 mod 2.

    ``quotient`` uses (p_{n+1}(x)p_{n-1}(y) - p_{n-1}(x)p_{n+1}(y)) / (||p_{n-1}||^2 (x^2 - y^2)).
    """
    if form == "sum":
        ks = [k for k in range(n) if (n - 1 - k) % 2 == 0]
        return rsum([sys(k, x) * sys(k, y) / sys.norm(k) for k in ks]) if ks else 0 * sys.one
    if form == "quotient":
        if not sys.symmetric:
            raise MethodNotApplicable("quotient form needs vanishing odd moments")
        if x * x == y * y:
            raise ValueError("quotient form needs x^2 != y^2")
        if n == 0:
            return 0 * sys.one
        return (sys(n + 1, x) * sys(n - 1, y) - sys(n - 1, x) * sys(n + 1, y)) / (
            sys.norm(n - 1) * (x * x - y * y))
    if form == "alternating":
        return rsum([(-1) ** (n + j + 1) * kernel_K(j + 1, x, y, sys) for j in range(n)]) \
            if n else 0 * sys.one
    raise ValueError(f"unknown form {form!r}")


def ktk_check(n: int, x, y, sys: OrthoSystem) -> bool:
    forms = [kernel_Ktilde(n, x, y, sys, f) for f in ("sum", "quotient", "alternating")]
    return all(f == forms[0] for f in forms)


# --------------------------------------------------------------------------
# Witnesses and admissible points
# --------------------------------------------------------------------------


def _sqrt_of(x):
    if isinstance(x, (int, Fraction)):
        r = _rational_sqrt(Fraction(x))
        if r is not None:
            return r
        r = _rational_sqrt(-Fraction(x))
        if r is not None:
            return Gaussian(0, r)
    raise WitnessError(f"no square root of {x} over Q(i); choose x = a^2 (e.g. a = 2/t - t/2)")


def xi_witness(c):
    """A rational root of xi + 1/xi = c, i.e. xi^2 - c xi + 1 = 0."""
    if isinstance(c, (int, Fraction)):
        r = _rational_sqrt(Fraction(c) ** 2 - 4)
        if r is not None:
            return (Fraction(c) + r) / 2
    raise WitnessError(
        f"xi + 1/xi = {c} has no rational solution; choose points from the admissible tables")


def admissible_sqrt_points(ts: Sequence) -> list:
    """(x, sqrt(x), xi) with x = a^2, a = 2/t - t/2, xi + 1/xi = x + 2 (xi = t^2/4)."""
    out = []
    for t in ts:
        t = Fraction(t)
        a = 2 / t - t / 2
        out.append((a * a, a, t * t / 4))
    return out


def admissible_tilde_points(ts: Sequence) -> list:
    """(x, w, xi) with x = t/2 + 2/t, w = i x (w^2 = -x^2), xi = -t^2/4 (xi + 1/xi = 2 - x^2)."""
    out = []
    for t in ts:
        t = Fraction(t)
        x = t / 2 + 2 / t
        out.append((x, Gaussian(0, x), -t * t / 4))
    return out


def pkt_points(zs: Sequence) -> list:
    """(x, sqrt(-x), xi) with x = -z^2, sqrt(-x) = z, xi = z + 1/z."""
    return [(-Fraction(z) ** 2, Fraction(z), Fraction(z) + 1 / Fraction(z)) for z in zs]


# --------------------------------------------------------------------------
# Multivariable kernels
# --------------------------------------------------------------------------


def gen_schur(n: int, m: int, points: Sequence, sys: OrthoSystem, tilde: bool = False):
    """det(p_{n+j-1}(x_i)) / prod (x_j - x_i), or with p_{n+2j-2} over prod (x_j^2 - x_i^2)."""
    if len(points) != m:
        raise ValueError("need m points")
    if m == 0:
        return sys.one
    step = 2 if tilde else 1
    rows = [[sys(n + step * j, x) for j in range(m)] for x in points]
    den = _diff_product(points, sys.one, square=tilde)
    if den == 0:
        raise ValueError("points must be distinct" + (" up to sign" if tilde else ""))
    return det(rows) / den


def _skew(vals, entry, zero):
    N = len(vals)
    rows = [[zero] * N for _ in range(N)]
    for i, j in combinations(range(N), 2):
        v = entry(i, j)
        rows[i][j], rows[j][i] = v, -v
    return rows


def _real(v):
    if isinstance(v, Gaussian):
        return v.real()
    return v


def multikernel(n: int, m: int, points: Sequence, sys: OrthoSystem, form: str = "kd",
                witnesses: Sequence | None = None):
    """K_m^n(x_1..x_{2m}) by one of its determinant or pfaffian forms.

    ``pfaff_sqrt`` takes witnesses w_i^2 = x_i, ``pfaff_xi`` takes xi_i + 1/xi_i = x_i + 2;
    missing witnesses are solved over Q(i) or Q when possible. ``mk`` and
    ``mk_sum`` read the points as (x_1..x_m, y_1..y_m).
    """
    pts = list(points)
    if len(pts) != 2 * m:
        raise ValueError("need 2m points")
    one = sys.one
    if form == "kd":
        pre = _prod((sys.norm(n - i) for i in range(1, m + 1)), one)
        return gen_schur(n - m, 2 * m, pts, sys) / pre
    if form in ("pfaff_sqrt", "pfaff_xi"):
        if witnesses is None:
            witnesses = [_sqrt_of(x) for x in pts] if form == "pfaff_sqrt" \
                else [xi_witness(x + 2) for x in pts]
        ws = list(witnesses)
        for x, w in zip(pts, ws):
            ok = (w * w == x) if form == "pfaff_sqrt" else (w + 1 / w == x + 2)
            if not ok:
                raise WitnessError("witness does not satisfy its defining equation")
        K = [[None] * (2 * m) for _ in range(2 * m)]
        for i, j in combinations(range(2 * m), 2):
            K[i][j] = kernel_K(n, pts[i], pts[j], sys)
        rows = _skew(ws, lambda i, j: (ws[j] - ws[i]) * K[i][j], 0 * one)
        val = pfaffian(rows) / _diff_product(ws, one)
        if form == "pfaff_xi":
            val = val * _prod((w ** (m - 1) for w in ws), one)
        return _real(val)
    if form in ("mk", "mk_sum"):
        xs, ys = pts[:m], pts[m:]
        den = _diff_product(xs, one) * _diff_product(ys, one)
        if form == "mk":
            return det([[kernel_K(n, x, y, sys) for y in ys] for x in xs]) / den
        terms = []
        for ks in combinations(range(n - 1, -1, -1), m):
            w = _prod((1 / sys.norm(k) for k in ks), one)
            terms.append(w * det([[sys(k, x) for x in xs] for k in ks])
                         * det([[sys(k, y) for y in ys] for k in ks]))
        return (rsum(terms) if terms else 0 * one) / den
    raise ValueError(f"unknown form {form!r}")


def multikernel_tilde(n: int, m: int, points: Sequence, sys: OrthoSystem, form: str = "det",
                      witnesses: Sequence | None = None):
    """The parity-restricted multivariable kernel by its determinant or a pfaffian.

    ``kpa`` takes w_i with w_i^2 = -x_i^2 (default i x_i); ``kpb`` takes xi_i with
    xi_i + 1/xi_i = 2 - x_i^2.
    """
    if not sys.symmetric:
        raise MethodNotApplicable("needs a system with vanishing odd moments")
    pts = list(points)
    if len(pts) != 2 * m:
        raise ValueError("need 2m points")
    one = sys.one
    if form == "det":
        if n + 1 - 2 * m < 0:
            raise MethodNotApplicable("needs n >= 2m - 1")
        pre = _prod((sys.norm(n + 1 - 2 * i) for i in range(1, m + 1)), one)
        return gen_schur(n + 1 - 2 * m, 2 * m, pts, sys, tilde=True) / pre
    if form in ("kpa", "kpb"):
        if witnesses is None:
            witnesses = [Gaussian(0, 1) * x for x in pts] if form == "kpa" \
                else [xi_witness(2 - x * x) for x in pts]
        ws = list(witnesses)
        for x, w in zip(pts, ws):
            ok = (w * w == -x * x) if form == "kpa" else (w + 1 / w == 2 - x * x)
            if not ok:
                raise WitnessError("witness does not satisfy its defining equation")
        K = {}
        for i, j in combinations(range(2 * m), 2):
            K[i, j] = kernel_Ktilde(n, pts[i], pts[j], sys)
        rows = _skew(ws, lambda i, j: (ws[j] - ws[i]) * K[i, j], 0 * one)
        val = pfaffian(rows) / _diff_product(ws, one)
        if form == "kpb":
            val = val * _prod((w ** (m - 1) for w in ws), one)
        return _real(val)
    raise ValueError(f"unknown form {form!r}")


def sfl_check(n: int, m: int, points: Sequence, sys: OrthoSystem, nodes: Sequence | None = None) -> bool:
    """The t^n coefficient of the tilde function at (x, t) equals its value at x.

    The (m+1)-point function is a polynomial of degree n in t; its leading
    coefficient is recovered exactly by Lagrange interpolation at n + 1 nodes.
    """
    pts = list(points)
    if len(pts) != m:
        raise ValueError("need m points")
    if nodes is None:
        nodes = []
        k = 1
        while len(nodes) < n + 1:
            t = Fraction(k + 2 * m + 3, 1) * sys.one
            if all(t * t != x * x for x in pts):
                nodes.append(t)
            k += 1
    nodes = list(nodes)[: n + 1]
    vals = [gen_schur(n, m + 1, pts + [t], sys, tilde=True) for t in nodes]
    lead = 0 * sys.one
    for a, ta in enumerate(nodes):
        den = _prod((ta - tb for b, tb in enumerate(nodes) if b != a), sys.one)
        lead = lead + vals[a] / den
    return lead == gen_schur(n, m, pts, sys, tilde=True)


# --------------------------------------------------------------------------
# P_n through kernels
# --------------------------------------------------------------------------


def two_row_kernel(z, u, n: int, ctx: QContext):
    """P_n(x, y) with x = -z^2, y = -u^2 from the parity kernel at xi = z + 1/z, eta = u + 1/u."""
    sys = OrthoSystem.ultraspherical(ctx)
    x, y = -z * z, -u * u
    return z ** (n - 1) * u ** (n - 1) * (y - x) * kernel_Ktilde(n, z + 1 / z, u + 1 / u, sys)


def pkt_sides(zs: Sequence, n: int, ctx: QContext, form: str = "schur") -> tuple:
    """(P_n(x), kernel expression) at x_i = -z_i^2.

    ``schur`` uses the rectangular tilde function of the xi_i, ``kernel`` (even m)
    uses the parity-restricted multivariable kernel.
    """
    sys = OrthoSystem.ultraspherical(ctx)
    one = ctx.one
    zs = [z * one for z in zs]
    xs = [-z * z for z in zs]
    xis = [z + 1 / z for z in zs]
    m = len(zs)
    lhs = p_multisum(xs, n, ctx)
    vdm = _diff_product(xs, one)
    if form == "schur":
        if m > n + 1:
            raise MethodNotApplicable("needs m <= n + 1")
        pre = one
        for i in range(1, m + 1):
            pre = pre * qp(ctx, 1, n + 1 - i, -1) / qp(ctx, 1, n + 1 - i)
        pre = pre * _prod((z ** (n + 1 - m) for z in zs), one)
        return lhs, pre * vdm * gen_schur(n + 1 - m, m, xis, sys, tilde=True)
    if form == "kernel":
        if m % 2:
            raise MethodNotApplicable("kernel form needs an even number of points")
        pre = _prod((z ** (n + 1 - m) for z in zs), one)
        return lhs, pre * vdm * multikernel_tilde(n, m // 2, xis, sys, "det")
    raise ValueError(f"unknown form {form!r}")


def theorem_pkt_check(zs: Sequence, n: int, ctx: QContext, form: str = "schur") -> bool:
    lhs, rhs = pkt_sides(zs, n, ctx, form)
    return lhs == rhs


# --------------------------------------------------------------------------
# Moment functionals
# --------------------------------------------------------------------------


def _a(ctx: QContext, k: int):
    qk = ctx.qpow(k)
    return qk / (1 + qk)


def _fourier(ctx: QContext, k: int):
    """Integral of e^{2ik theta} w(theta) over a full period."""
    sign = -2 if k % 2 else 2
    return sign * (_a(ctx, k - 1) - _a(ctx, k + 1))


_MOMENTS: dict = {}


def mu_moments(k: int, ctx: QContext):
    """Integral of x^k against the orthogonality measure of c_k (x = 2 cos theta)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k % 2:
        return ctx.zero
    key = (k, ctx)
    if key not in _MOMENTS:
        _MOMENTS[key] = rsum([comb(k, j) * _fourier(ctx, k // 2 - j) for j in range(k + 1)]) / 2
    return _MOMENTS[key]


@dataclass(frozen=True)
class MomentFunctional:
    """A linear functional on polynomials fixed by its moments."""

    moment: Callable[[int], object]
    one: object
    odd_vanish: bool = False

    def apply(self, coeffs: Sequence):
        """Apply to sum coeffs[k] x^k."""
        terms = [c * self.moment(k) for k, c in enumerate(coeffs)
                 if c != 0 and not (self.odd_vanish and k % 2)]
        return rsum(terms) if terms else 0 * self.one

    def apply_multi(self, poly: dict):
        """Apply in every variable of {exponent tuple: coeff}."""
        terms = []
        for e, c in poly.items():
            if self.odd_vanish and any(k % 2 for k in e):
                continue
            terms.append(c * _prod((self.moment(k) for k in e), self.one))
        return rsum(terms) if terms else 0 * self.one


def mu_functional(ctx: QContext) -> MomentFunctional:
    return MomentFunctional(lambda k: mu_moments(k, ctx), ctx.one, odd_vanish=True)


def lambda_apply(f, ctx: QContext):
    """The functional t^k -> (1 - q^k)/(1 + q^k) on a Laurent polynomial.

    ``f`` is a dict {k: coeff} or a LaurentPoly.
    """
    coeffs = f.coefficients if isinstance(f, LaurentPoly) else f
    terms = []
    for k, c in coeffs.items():
        if k == 0 or c == 0:
            continue
        qk = ctx.qpow(k)
        terms.append(c * (1 - qk) / (1 + qk))
    return rsum(terms) if terms else ctx.zero


# --------------------------------------------------------------------------
# Multivariate polynomial helpers ({exponent tuple: coeff})
# --------------------------------------------------------------------------


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out[e] + ca * cb if e in out else ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _linear(nvars: int, const, var_coeffs: dict, one) -> dict:
    """const + sum_v coeff_v * y_v^(power); var_coeffs maps (v, power) -> coeff."""
    out = {}
    z = tuple([0] * nvars)
    if const != 0:
        out[z] = const * one
    for (v, p), c in var_coeffs.items():
        e = [0] * nvars
        e[v] = p
        e = tuple(e)
        out[e] = out.get(e, 0 * one) + c * one
    return {e: c for e, c in out.items() if c != 0}


# --------------------------------------------------------------------------
# The appendix routes
# --------------------------------------------------------------------------


APPENDIX_MAX_L = 3


def appendix_p(xs: Sequence, n: int, ctx: QContext, route: str = "lambda"):
    """P_n(x_1..x_m) from the Vandermonde in x and (t_k^{-1}, t_k) pairs.

    ``lambda``: expand the Vandermonde as a Laurent polynomial in t_1..t_l and
    apply the t-functional monomial by monomial. ``moments``: factor the
    Vandermonde into x-parts and a polynomial in tau_k = t_k + 1/t_k, then
    integrate tau_k = 2 - y_k^2 against the measure of c_k by its moments.
    """
    m = len(xs)
    if m > n + 1:
        raise MethodNotApplicable("needs m <= n + 1")
    l, extra = divmod(n + 1 - m, 2)  # extra = 1 appends the point 1
    if l > APPENDIX_MAX_L:
        raise ValueError(f"cost guard: l = {l} exceeds {APPENDIX_MAX_L}")
    one = ctx.one
    pre = one / (2**l * factorial(l))
    for j in range(1, n + 1):
        pre = pre * qp(ctx, 1, j, -1) / qp(ctx, 1, j)
    if route == "lambda":
        return pre * _appendix_lambda(xs, l, extra, ctx)
    if route == "moments":
        return pre * _appendix_moments(xs, l, extra, ctx)
    raise ValueError(f"unknown route {route!r}")


def _appendix_lambda(xs, l, extra, ctx):
    one = ctx.one
    zero_e = tuple([0] * l)
    # each entry: Laurent monomial dict in the t variables
    entries = [{zero_e: x} for x in xs]
    for k in range(l):
        for p in (-1, 1):
            e = [0] * l
            e[k] = p
            entries.append({tuple(e): one})
    if extra:
        entries.append({zero_e: one})
    delta = {zero_e: one}
    for i, j in combinations(range(len(entries)), 2):
        diff = dict(entries[j])
        for e, c in entries[i].items():
            diff[e] = diff[e] - c if e in diff else -c
        delta = _pmul(delta, {e: c for e, c in diff.items() if c != 0})
    # apply the functional in each t variable
    lam_cache = {}

    def lam(k):
        if k not in lam_cache:
            qk = ctx.qpow(k)
            lam_cache[k] = (1 - qk) / (1 + qk)
        return lam_cache[k]

    terms = []
    for e, c in delta.items():
        if any(k == 0 for k in e):
            continue
        terms.append(c * _prod((lam(k) for k in e), one))
    return rsum(terms) if terms else ctx.zero


def _appendix_moments(xs, l, extra, ctx):
    one = ctx.one
    xpart = _diff_product(xs, one) * _prod((x**l for x in xs), one)
    if extra:
        xpart = xpart * _prod((1 - x for x in xs), one)
    # polynomial in y_1..y_l with tau_k = 2 - y_k^2
    poly = {tuple([0] * l): one}
    for k in range(l):
        for x in xs:
            xi = x + 1 / x
            poly = _pmul(poly, _linear(l, xi - 2, {(k, 2): 1}, one))  # xi - tau_k
        if extra:
            poly = _pmul(poly, _linear(l, 0, {(k, 2): 1}, one))  # 2 - tau_k
    for i, j in combinations(range(l), 2):
        d = _linear(l, 0, {(i, 2): 1, (j, 2): -1}, one)  # tau_j - tau_i
        poly = _pmul(poly, _pmul(d, d))
    # Delta(x, 1/t_1, t_1, ...) = prod x^l (t_k - 1/t_k) Delta(x) Delta(tau)^2 prod (xi - tau);
    # the t-functional of (t - 1/t) f(tau) is twice the mu-integral of f(2 - y^2)
    integral = mu_functional(ctx).apply_multi(poly)
    return 2**l * xpart * integral


def kif_sides(l: int, m: int, xs: Sequence, ctx: QContext, odd: bool) -> tuple:
    """(determinant form, moment integral) for the tilde function of shape (2l + odd)^m."""
    if l > 2 or m > 3:
        raise ValueError("cost guard: needs l <= 2 and m <= 3")
    if len(xs) != m:
        raise ValueError("need m points")
    sys = OrthoSystem.ultraspherical(ctx)
    one = ctx.one
    lhs = gen_schur(2 * l + (1 if odd else 0), m, list(xs), sys, tilde=True)
    poly = {tuple([0] * l): one}
    for k in range(l):
        for x in xs:
            poly = _pmul(poly, _linear(l, x * x, {(k, 2): -1}, one))
        if odd:
            poly = _pmul(poly, _linear(l, 0, {(k, 2): 1}, one))
    for i, j in combinations(range(l), 2):
        d = _linear(l, 0, {(j, 2): 1, (i, 2): -1}, one)
        poly = _pmul(poly, _pmul(d, d))
    pre = one / factorial(l)
    for i in range(1, l + 1):
        pre = pre / cn_norm(2 * i - (1 if odd else 2), ctx)
    if odd:
        pre = pre * _prod(xs, one)
    return lhs, pre * mu_functional(ctx).apply_multi(poly)


def kif_check(l: int, m: int, xs: Sequence, ctx: QContext, odd: bool) -> bool:
    lhs, rhs = kif_sides(l, m, xs, ctx, odd)
    return lhs == rhs
