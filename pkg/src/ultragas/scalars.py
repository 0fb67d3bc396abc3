"""Scalar backends shared by the evaluation paths.

Three kinds of scalars flow through the partition-function formulas:

* exact rationals (fractions.Fraction), used when q is rational and every
  pairwise exponent is an integer;
* BiRational values: ratios of integer-coefficient polynomials in q and y,
  where y stands for q**beta, kept gcd-reduced with a sign-normalized
  denominator (equality is decided by cross-multiplication);
* complex floats, machine doubles by default or mpmath complex numbers when
  a precision above 53 bits is requested.

Polynomial arithmetic and gcd reduction are delegated to sympy's sparse
polynomial rings over ZZ; everything wrapped here is the normalization and
arithmetic contract, not the gcd itself.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath
from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

__all__ = ["BiRational", "FloatContext", "KahanSum", "falling_factorial"]

_RING, Q_VAR, Y_VAR = ring("q y", ZZ)
_ONE = _RING.one
_ZERO = _RING.zero


def _to_poly(value):
    if isinstance(value, int):
        return _RING.ground_new(value)
    if value.__class__ is _ONE.__class__:
        return value
    raise TypeError(f"cannot lift {value!r} into Z[q, y]")


class BiRational:
    """A reduced ratio of integer polynomials in (q, y)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, _reduced=False):
        num = _to_poly(num)
        den = _to_poly(den)
        if not den:
            raise ZeroDivisionError("BiRational with zero denominator")
        if not _reduced:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num, den):
        if not num:
            return _ZERO, _ONE
        g = num.gcd(den)
        num, den = num.exquo(g), den.exquo(g)
        if den.LC < 0:
            num, den = -num, -den
        return num, den

    @classmethod
    def monomial(cls, dq: int, dy: int = 0, coeff: int = 1) -> "BiRational":
        """coeff * q**dq * y**dy; negative exponents land in the denominator."""
        num = _RING.ground_new(coeff)
        den = _ONE
        num *= Q_VAR ** max(dq, 0) * Y_VAR ** max(dy, 0)
        den *= Q_VAR ** max(-dq, 0) * Y_VAR ** max(-dy, 0)
        return cls(num, den)

    @classmethod
    def q(cls) -> "BiRational":
        return cls(Q_VAR, _ONE, _reduced=True)

    @classmethod
    def y(cls) -> "BiRational":
        return cls(Y_VAR, _ONE, _reduced=True)

    def _coerce(self, other):
        if isinstance(other, BiRational):
            return other
        if isinstance(other, int):
            return BiRational(_RING.ground_new(other), _ONE, _reduced=True)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        g = self.den.gcd(o.den)
        da, db = self.den.exquo(g), o.den.exquo(g)
        return BiRational(self.num * db + o.num * da, da * o.den)

    __radd__ = __add__

    def __neg__(self):
        return BiRational(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return BiRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by zero BiRational")
        return BiRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (BiRational(_ONE, _ONE, _reduced=True) / self) ** (-n)
        return BiRational(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((tuple(self.num.terms()), tuple(self.den.terms())))

    def __bool__(self):
        return bool(self.num)

    def is_one(self) -> bool:
        return self.num == self.den

    def evaluate(self, q_value, y_value):
        """Substitute numeric (q, y); exact for Fraction inputs."""

        def ev(poly):
            total = q_value * 0
            for (dq, dy), coeff in poly.terms():
                total = total + int(coeff) * q_value**dq * y_value**dy
            return total

        den = ev(self.den)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the substitution point")
        return ev(self.num) / den

    @staticmethod
    def _terms_json(poly):
        terms = sorted(poly.terms(), key=lambda t: t[0], reverse=True)
        return [[int(c), int(dq), int(dy)] for (dq, dy), c in terms]

    def to_json(self) -> dict:
        return {"num": self._terms_json(self.num), "den": self._terms_json(self.den)}

    def __repr__(self):
        return f"({self.num})/({self.den})"


def falling_factorial(z, n: int):
    """z (z-1) ... (z-n+1); the empty product for n = 0.

    Works for any scalar kind supporting * and - with ints.
    """
    if n < 0:
        raise ValueError(f"falling factorial needs n >= 0, got {n}")
    result = 1
    for m in range(n):
        result = (z - m) * result
    return result


class KahanSum:
    """Compensated accumulator; deterministic for a fixed addend order."""

    def __init__(self, zero=0.0):
        self.total = zero
        self._comp = zero

    def add(self, value):
        y = value - self._comp
        t = self.total + y
        self._comp = (t - self.total) - y
        self.total = t
        return self


class FloatContext:
    """Complex arithmetic at a chosen precision.

    precision == 53 uses machine doubles through cmath; higher precisions
    switch to mpmath complex numbers.  Entering the context applies the
    mpmath working precision; the default context is a no-op.
    """

    def __init__(self, precision: int = 53):
        if precision < 53:
            raise ValueError(f"precision must be >= 53 bits, got {precision}")
        self.precision = precision
        self._work = None

    @property
    def is_double(self) -> bool:
        return self.precision == 53

    def __enter__(self):
        if not self.is_double:
            self._work = mpmath.workprec(self.precision)
            self._work.__enter__()
        return self

    def __exit__(self, *exc):
        if self._work is not None:
            self._work.__exit__(*exc)
            self._work = None
        return False

    def to_complex(self, value):
        if isinstance(value, Fraction):
            if self.is_double:
                return complex(value.numerator / value.denominator)
            return mpmath.mpc(mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator))
        if self.is_double:
            return complex(value)
        if isinstance(value, complex):
            return mpmath.mpc(value.real, value.imag)
        return mpmath.mpc(value)

    def zero(self):
        return self.to_complex(0)

    def exp(self, z):
        return cmath.exp(z) if self.is_double else mpmath.exp(z)

    def log(self, z):
        return cmath.log(z) if self.is_double else mpmath.log(z)

    def expm1(self, z):
        if not self.is_double:
            return mpmath.expm1(z)
        if abs(z) < 1e-4:
            # series keeps full relative accuracy where exp(z) - 1 cancels
            return z * (1 + z / 2 * (1 + z / 3 * (1 + z / 4 * (1 + z / 5))))
        return cmath.exp(z) - 1

    def log1p_real(self, x: float):
        return math.log1p(x) if self.is_double else mpmath.log(1 + mpmath.mpf(x))

    def abs(self, z) -> float:
        return abs(z)
