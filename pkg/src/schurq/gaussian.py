"""Gaussian numbers ``a + b*i`` over an exact field (Fraction or RationalFn).

Used where a formula has genuinely complex parameters, such as Askey-Wilson
polynomials with parameters ``±i q^(1/2)``, or square roots of negative values.
Results that are real come back with a zero imaginary part.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import RationalFn


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, RationalFn))


class Gaussian:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re
        self.im = im

    @staticmethod
    def lift(x) -> "Gaussian":
        return x if isinstance(x, Gaussian) else Gaussian(x, 0)

    def is_real(self) -> bool:
        return self.im == 0

    def real(self):
        if self.im != 0:
            raise ValueError(f"not real: imaginary part {self.im}")
        return self.re

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if _is_scalar(other):
            return Gaussian(self.re + other, self.im)
        if isinstance(other, Gaussian):
            return Gaussian(self.re + other.re, self.im + other.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return Gaussian(self.re * other, self.im * other)
        if isinstance(other, Gaussian):
            return Gaussian(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Gaussian":
        n = self.norm()
        if isinstance(n, int):
            n = Fraction(n)
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian")
        return Gaussian(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if _is_scalar(other):
            other = Fraction(other) if isinstance(other, int) else other
            return Gaussian(self.re / other, self.im / other)
        if isinstance(other, Gaussian):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return Gaussian.lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Gaussian(1, 0), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if _is_scalar(other):
            return self.im == 0 and self.re == other
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"


I = Gaussian(0, 1)
