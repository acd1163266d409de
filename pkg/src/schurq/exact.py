"""Exact univariate arithmetic over Q in a formal variable ``s``.

Two value types live here:

* :class:`LaurentPoly` -- finite Laurent polynomials with rational coefficients.
* :class:`RationalFn` -- elements of Q(s), kept in a canonical reduced form.

The q-symbolic layer sits on top: a :class:`QContext` fixes ``q = s**r`` for a
root order ``r`` so that ``q**(1/2)`` and ``q**(1/4)`` are plain powers of ``s``.
A context may also carry a rational value ``s0`` for ``s``; every formula in the
package then runs unchanged over Q instead of Q(s).

Polynomial gcds and products are delegated to FLINT (``python-flint``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

from flint import fmpq, fmpq_poly

Scalar = Union[int, Fraction]

__all__ = [
    "ExactArithmeticError",
    "PoleError",
    "RootOrderError",
    "LaurentPoly",
    "RationalFn",
    "QContext",
    "rf_arith",
    "eval_at",
    "limit_q_to_one",
    "truncate_series",
    "rsum",
    "format_q",
    "to_fraction",
]


class ExactArithmeticError(ArithmeticError):
    pass


class PoleError(ExactArithmeticError, ZeroDivisionError):
    """Evaluation hit a genuine pole of a reduced rational function."""


class RootOrderError(ExactArithmeticError, ValueError):
    """A fractional power of q is not an integer power of s in this context."""


def _fq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, Rational):
        return fmpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"not a rational scalar: {x!r}")


def _fr(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def to_fraction(x) -> Fraction:
    """Coerce an int, Fraction or constant RationalFn to a Fraction."""
    if isinstance(x, RationalFn):
        return x.constant_value()
    if isinstance(x, fmpq):
        return _fr(x)
    return Fraction(x)


_ZERO_POLY = fmpq_poly([])
_ONE_POLY = fmpq_poly([1])


def _valuation(p: fmpq_poly) -> int:
    i = 0
    while p[i] == 0:
        i += 1
    return i


# --------------------------------------------------------------------------
# Laurent polynomials
# --------------------------------------------------------------------------


class LaurentPoly:
    """A Laurent polynomial ``sum c_e s**e`` with rational coefficients.

    Stored as ``s**shift * poly`` where ``poly(0) != 0`` (or poly is zero and
    shift is 0), so equal values have equal representations.
    """

    __slots__ = ("_poly", "_shift")

    def __init__(self, coefficients: Mapping[int, Scalar] | None = None):
        coefficients = {int(e): Fraction(c) for e, c in (coefficients or {}).items() if c}
        if not coefficients:
            self._poly, self._shift = _ZERO_POLY, 0
            return
        lo = min(coefficients)
        hi = max(coefficients)
        dense = [_fq(coefficients.get(e, 0)) for e in range(lo, hi + 1)]
        self._poly, self._shift = fmpq_poly(dense), lo

    @classmethod
    def _wrap(cls, poly: fmpq_poly, shift: int) -> "LaurentPoly":
        obj = cls.__new__(cls)
        if poly.is_zero():
            obj._poly, obj._shift = _ZERO_POLY, 0
            return obj
        v = _valuation(poly)
        if v:
            poly = poly.right_shift(v)
        obj._poly, obj._shift = poly, shift + v
        return obj

    @classmethod
    def monomial(cls, exponent: int, coefficient: Scalar = 1) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {
            self._shift + i: _fr(c) for i, c in enumerate(self._poly.coeffs()) if c != 0
        }

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    @property
    def low_degree(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree")
        return self._shift

    @property
    def degree(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree")
        return self._shift + self._poly.degree()

    def coefficient(self, e: int) -> Fraction:
        i = e - self._shift
        if i < 0 or self.is_zero() or i > self._poly.degree():
            return Fraction(0)
        return _fr(self._poly[i])

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._shift, other._shift)
        a = self._poly.left_shift(self._shift - lo)
        b = other._poly.left_shift(other._shift - lo)
        return LaurentPoly._wrap(a + b, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap(-self._poly, self._shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentPoly._wrap(self._poly * other._poly, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial")
        return LaurentPoly._wrap(self._poly**k, self._shift * k)

    def __eq__(self, other):
        if isinstance(other, RationalFn):
            return other == self
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self):
        return hash(("LaurentPoly", self._shift, str(self._poly)))

    def __call__(self, s0: Scalar) -> Fraction:
        return eval_at(self.to_rational(), s0)

    def to_rational(self) -> "RationalFn":
        return RationalFn._raw(self._poly, _ONE_POLY, self._shift)

    def in_context(self, ctx: "QContext"):
        """Read this as a polynomial in q and embed it in ``ctx`` (q = s**r)."""
        r = ctx.root_order
        if ctx.s_value is not None:
            return sum((c * ctx.spow(e * r) for e, c in self.coefficients.items()), Fraction(0))
        return LaurentPoly({e * r: c for e, c in self.coefficients.items()}).to_rational()

    def to_json(self) -> dict:
        return {str(e): str(c) for e, c in sorted(self.coefficients.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): Fraction(c) for e, c in data.items()})

    def __repr__(self):
        return f"LaurentPoly({self.coefficients!r})"

    def __str__(self):
        return format_q(self, 1, var="s")


# --------------------------------------------------------------------------
# Rational functions
# --------------------------------------------------------------------------


class RationalFn:
    """An element of Q(s).

    Canonical form: ``s**val * num / den`` with ``num``, ``den`` coprime
    polynomials, ``num(0) != 0`` and ``den(0) == 1``. Zero is ``0/1`` with
    ``val == 0``. Instances are immutable.
    """

    __slots__ = ("_num", "_den", "_val")

    def __init__(self, value: Scalar = 0):
        value = _fq(value)
        if value == 0:
            self._num, self._den, self._val = _ZERO_POLY, _ONE_POLY, 0
        else:
            self._num, self._den, self._val = fmpq_poly([value]), _ONE_POLY, 0

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly, val: int) -> "RationalFn":
        """Assemble without reduction; caller guarantees canonical form
        except possibly ``num`` valuation and the ``den(0) == 1`` scaling."""
        obj = cls.__new__(cls)
        if num.is_zero():
            obj._num, obj._den, obj._val = _ZERO_POLY, _ONE_POLY, 0
            return obj
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            val += v
        c = den[0]
        if c != 1:
            inv = 1 / c
            num = num * inv
            den = den * inv
        obj._num, obj._den, obj._val = num, den, val
        return obj

    @classmethod
    def from_polys(
        cls, num: fmpq_poly, den: fmpq_poly = _ONE_POLY, shift: int = 0
    ) -> "RationalFn":
        """Build ``s**shift * num / den`` from arbitrary FLINT polynomials."""
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(0)
        vn = _valuation(num)
        vd = _valuation(den)
        if vn:
            num = num.right_shift(vn)
        if vd:
            den = den.right_shift(vd)
        g = num.gcd(den)
        if not g.is_one():
            num = num // g
            den = den // g
        return cls._raw(num, den, shift + vn - vd)

    @classmethod
    def s_power(cls, k: int, coefficient: Scalar = 1) -> "RationalFn":
        return cls._raw(fmpq_poly([_fq(coefficient)]), _ONE_POLY, k)

    @classmethod
    def from_laurent(cls, num: LaurentPoly, den: LaurentPoly | None = None) -> "RationalFn":
        if den is None:
            return num.to_rational()
        return cls.from_polys(num._poly, den._poly, num._shift - den._shift)

    # -- inspection -------------------------------------------------------

    @property
    def num(self) -> LaurentPoly:
        return LaurentPoly._wrap(self._num, self._val)

    @property
    def den(self) -> LaurentPoly:
        return LaurentPoly._wrap(self._den, 0)

    @property
    def valuation(self) -> int:
        """Order of vanishing at s = 0 (negative for a pole)."""
        return self._val

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_polynomial(self) -> bool:
        return self._den.is_one()

    def is_constant(self) -> bool:
        return self.is_zero() or (
            self._val == 0 and self._den.is_one() and self._num.degree() == 0
        )

    def is_monomial(self) -> bool:
        return self._den.is_one() and self._num.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return _fr(self._num[0]) if not self.is_zero() else Fraction(0)

    def to_laurent(self) -> LaurentPoly:
        if not self.is_polynomial():
            raise ValueError(f"not a Laurent polynomial: {self}")
        return self.num

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, (int, Fraction, fmpq)):
            return RationalFn(other)
        if isinstance(other, LaurentPoly):
            return other.to_rational()
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self._val, other._val)
        n1 = self._num.left_shift(self._val - v) if self._val > v else self._num
        n2 = other._num.left_shift(other._val - v) if other._val > v else other._num
        d1, d2 = self._den, other._den
        if d1 == d2:
            num = n1 + n2
            if num.is_zero():
                return RationalFn(0)
            h = num.gcd(d1)
            if h.is_one():
                return RationalFn._raw(num, d1, v)
            return RationalFn._raw(num // h, d1 // h, v)
        g = d1.gcd(d2)
        if g.is_one():
            return RationalFn._raw(n1 * d2 + n2 * d1, d1 * d2, v)
        d1g = d1 // g
        d2g = d2 // g
        num = n1 * d2g + n2 * d1g
        if num.is_zero():
            return RationalFn(0)
        h = num.gcd(g)
        if not h.is_one():
            num = num // h
            d2 = d2 // h
        return RationalFn._raw(num, d1g * d2, v)

    __radd__ = __add__

    def __neg__(self):
        obj = RationalFn.__new__(RationalFn)
        obj._num, obj._den, obj._val = -self._num, self._den, self._val
        return obj

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFn(0)
            obj = RationalFn.__new__(RationalFn)
            obj._num, obj._den, obj._val = self._num * _fq(other), self._den, self._val
            return obj
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFn(0)
        n1, d1, n2, d2 = self._num, self._den, other._num, other._den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        return RationalFn._raw(n1 * n2, d1 * d2, self._val + other._val)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if self.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn._raw(self._den, self._num, -self._val)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RationalFn(1)
        if self.is_monomial():
            return RationalFn._raw(self._num**k, _ONE_POLY, self._val * k)
        return RationalFn._raw(self._num**k, self._den**k, self._val * k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self._val == other._val and self._num == other._num and self._den == other._den
        )

    def __hash__(self):
        return hash(("RationalFn", self._val, str(self._num), str(self._den)))

    def __bool__(self):
        return not self.is_zero()

    # -- analysis ---------------------------------------------------------

    def eval_at(self, s0: Scalar) -> Fraction:
        return eval_at(self, s0)

    def derivative(self) -> "RationalFn":
        """d/ds."""
        if self.is_zero():
            return self
        n, d, v = self._num, self._den, self._val
        s = fmpq_poly([0, 1])
        top = n * d * v + s * (n.derivative() * d - n * d.derivative())
        return RationalFn.from_polys(top, d * d, v - 1)

    def degree_bound(self) -> int:
        """max(deg num, deg den) counted in s-exponents of the Laurent form."""
        if self.is_zero():
            return 0
        return max(abs(self._val), abs(self._val + self._num.degree())) + self._den.degree()

    # -- serialization ----------------------------------------------------

    def to_json(self, root_order: int = 1) -> dict:
        return {
            "num": self.num.to_json(),
            "den": self.den.to_json(),
            "root_order": root_order,
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> "RationalFn":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_laurent(
            LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"])
        )

    def __repr__(self):
        return f"RationalFn({self})"

    def __str__(self):
        return format_q(self, 1, var="s")


# --------------------------------------------------------------------------
# Free functions mirroring the operation list
# --------------------------------------------------------------------------


def rf_arith(a: RationalFn, b: RationalFn, op: str) -> RationalFn:
    """Apply ``op`` in ``{'+', '-', '*', '/'}`` (unicode minus/times/divide accepted)."""
    if op in ("+",):
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return RationalFn._coerce(a) / b
    raise ValueError(f"unknown operation {op!r}")


def eval_at(f, s0: Scalar) -> Fraction:
    """Exact value of ``f`` at the rational point ``s = s0``."""
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    if isinstance(f, LaurentPoly):
        f = f.to_rational()
    s0 = Fraction(s0)
    if f.is_zero():
        return Fraction(0)
    if s0 == 0:
        if f._val < 0:
            raise PoleError(f"pole at s = 0 of {f}")
        if f._val > 0:
            return Fraction(0)
        return _fr(f._num[0])
    x = _fq(s0)
    d = f._den(x)
    if d == 0:
        raise PoleError(f"pole at s = {s0} of {f}")
    return _fr(f._num(x) / d) * s0 ** f._val


def limit_q_to_one(f, ctx: "QContext | None" = None) -> Fraction:
    """Value of the reduced function at q = 1 (equivalently s = 1)."""
    try:
        return eval_at(f, 1)
    except PoleError as exc:
        raise PoleError(
            "formula is singular at q = 1 (genuine pole after cancellation)"
        ) from exc


def truncate_series(f, N: int) -> LaurentPoly:
    """Power-series expansion of ``f`` at s = 0, modulo ``s**(N+1)``."""
    if isinstance(f, LaurentPoly):
        f = f.to_rational()
    f = RationalFn._coerce(f)
    if f.is_zero():
        return LaurentPoly()
    if f._val < 0:
        raise ExactArithmeticError("denominator vanishes at s = 0; no power series")
    n_terms = N + 1 - f._val
    if n_terms <= 0:
        return LaurentPoly()
    num = [_fr(c) for c in f._num.coeffs()]
    den = [_fr(c) for c in f._den.coeffs()]  # den[0] == 1
    out: list[Fraction] = []
    for k in range(n_terms):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc)
    return LaurentPoly({f._val + k: c for k, c in enumerate(out)})


def rsum(terms: Iterable) -> object:
    """Sum many field elements.

    Rational functions sharing a denominator are first added numerator-wise,
    then the groups are combined pairwise; this keeps gcd work small.
    """
    groups: dict[str, list] = {}
    dens: dict[str, fmpq_poly] = {}
    others = []
    for t in terms:
        if isinstance(t, RationalFn):
            if t.is_zero():
                continue
            key = str(t._den)
            groups.setdefault(key, []).append(t)
            dens[key] = t._den
        else:
            others.append(t)
    partial = []
    for key, items in groups.items():
        if len(items) == 1:
            partial.append(items[0])
            continue
        v = min(t._val for t in items)
        num = _ZERO_POLY
        for t in items:
            num = num + (t._num.left_shift(t._val - v) if t._val > v else t._num)
        partial.append(RationalFn.from_polys(num, dens[key], v))
    while len(partial) > 1:
        nxt = [partial[i] + partial[i + 1] for i in range(0, len(partial) - 1, 2)]
        if len(partial) % 2:
            nxt.append(partial[-1])
        partial = nxt
    total = partial[0] if partial else 0
    for t in others:
        total = total + t
    return total


# --------------------------------------------------------------------------
# q-context
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QContext:
    """Where q lives: ``q = s**root_order``.

    With ``s_value`` unset, values are RationalFn in Q(s). With ``s_value`` a
    nonzero rational, the same formulas are evaluated over Q at ``s = s_value``.
    """

    root_order: int = 4
    s_value: Fraction | None = None

    def __post_init__(self):
        if self.root_order not in (1, 2, 4):
            raise RootOrderError(f"root order must be 1, 2 or 4, got {self.root_order}")
        if self.s_value is not None:
            object.__setattr__(self, "s_value", Fraction(self.s_value))
            if self.s_value == 0:
                raise ValueError("s_value must be nonzero")

    @property
    def symbolic(self) -> bool:
        return self.s_value is None

    def s_exponent(self, e) -> int:
        """The s-exponent of ``q**e``; raises if not integral."""
        k = Fraction(e) * self.root_order
        if k.denominator != 1:
            raise RootOrderError(
                f"q^({e}) is not representable with root order {self.root_order}"
            )
        return int(k)

    def spow(self, k: int, coefficient: Scalar = 1):
        if self.s_value is None:
            return RationalFn.s_power(k, coefficient)
        return Fraction(coefficient) * self.s_value**k

    def qpow(self, e, coefficient: Scalar = 1):
        """``coefficient * q**e`` for rational ``e``."""
        return self.spow(self.s_exponent(e), coefficient)

    @property
    def q(self):
        return self.qpow(1)

    @property
    def one(self):
        return RationalFn(1) if self.s_value is None else Fraction(1)

    @property
    def zero(self):
        return RationalFn(0) if self.s_value is None else Fraction(0)

    def lift(self, x):
        """Embed an int/Fraction into this context's field."""
        if self.s_value is None:
            return RationalFn._coerce(x)
        if isinstance(x, RationalFn):
            return eval_at(x, self.s_value)
        return Fraction(x)

    def at(self, s0) -> "QContext":
        return QContext(self.root_order, Fraction(s0))


# --------------------------------------------------------------------------
# Display
# --------------------------------------------------------------------------


def _format_exp(e: int, root_order: int) -> str:
    f = Fraction(e, root_order)
    if f.denominator == 1:
        return str(f.numerator)
    return f"({f.numerator}/{f.denominator})"


def _format_laurent(p: LaurentPoly, root_order: int, var: str) -> str:
    items = sorted(p.coefficients.items())
    if not items:
        return "0"
    parts = []
    for idx, (e, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            ex = _format_exp(e, root_order)
            mono = var if ex == "1" else f"{var}^{ex}"
            body = mono if a == 1 else f"{a}*{mono}"
        if idx == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def format_q(value, root_order: int = 1, var: str = "q") -> str:
    """Render in ascending powers of ``var``; exponents are s-exponents / root_order."""
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, LaurentPoly):
        return _format_laurent(value, root_order, var)
    if value.is_polynomial():
        return _format_laurent(value.num, root_order, var)
    num = _format_laurent(value.num, root_order, var)
    den = _format_laurent(value.den, root_order, var)
    return f"({num})/({den})"
