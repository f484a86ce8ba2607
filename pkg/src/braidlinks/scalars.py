"""Exact complex-rational scalars and the exact/float coefficient model.

Coefficients throughout the package are either `QC` (a complex number with
Fraction real and imaginary parts, fully exact) or a plain Python `complex`.
A container is "exact" when every stored coefficient is a QC; arithmetic
between an exact and a float value promotes to float.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class QC:
    """Complex number with exact rational real/imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    def __add__(self, other):
        if isinstance(other, QC):
            return QC(self.re + other.re, self.im + other.im)
        return complex(self) + other

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QC):
            return QC(self.re - other.re, self.im - other.im)
        return complex(self) - other

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QC):
            return QC(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return QC(self.re * other, self.im * other)
        return complex(self) * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QC):
            d = other.re * other.re + other.im * other.im
            if d == 0:
                raise ZeroDivisionError("division by zero QC")
            return QC((self.re * other.re + self.im * other.im) / d,
                      (self.im * other.re - self.re * other.im) / d)
        if isinstance(other, (int, Fraction)):
            return QC(self.re / other, self.im / other)
        return complex(self) / other

    def __neg__(self):
        return QC(-self.re, -self.im)

    def conjugate(self):
        return QC(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        if isinstance(other, QC):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"QC({self.re!r}, {self.im!r})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


Coeff = Union[QC, complex]

QC_ZERO = QC(0)
QC_ONE = QC(1)
QC_I = QC(0, 1)


def is_exact(c: Coeff) -> bool:
    return isinstance(c, QC)


def as_complex(c: Coeff) -> complex:
    return complex(c) if isinstance(c, QC) else complex(c)


def conj(c: Coeff) -> Coeff:
    return c.conjugate() if isinstance(c, QC) else complex(c).conjugate()


def times_i(c: Coeff) -> Coeff:
    if isinstance(c, QC):
        return QC(-c.im, c.re)
    return 1j * c


def is_zero(c: Coeff, tol: float = 0.0) -> bool:
    if isinstance(c, QC):
        return c.is_zero()
    return abs(c) <= tol


def add(a: Coeff, b: Coeff) -> Coeff:
    if isinstance(a, QC) and isinstance(b, QC):
        return a + b
    return as_complex(a) + as_complex(b)


def mul(a: Coeff, b: Coeff) -> Coeff:
    if isinstance(a, QC) and isinstance(b, QC):
        return a * b
    return as_complex(a) * as_complex(b)


def coeff_from(re, im=0) -> Coeff:
    """Build a coefficient; exact when both parts are int/Fraction."""
    if isinstance(re, (int, Fraction)) and isinstance(im, (int, Fraction)):
        return QC(re, im)
    return complex(re, im)


def parse_rational(s) -> Fraction:
    """Parse "p/q" strings (JSON exact encoding) or plain numbers."""
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, int):
        return Fraction(s)
    raise ValueError(f"not an exact rational encoding: {s!r}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def coeff_to_json(c: Coeff):
    """Encode a coefficient: rationals as "p/q" strings, floats as numbers."""
    if isinstance(c, QC):
        return {"re": format_rational(c.re), "im": format_rational(c.im)}
    return {"re": c.real, "im": c.imag}


def coeff_from_json(obj) -> Coeff:
    re, im = obj["re"], obj["im"]
    if isinstance(re, str) or isinstance(im, str):
        return QC(parse_rational(re), parse_rational(im))
    return complex(re, im)
