"""Numbers of the form c0 + c1*e + c2*e^2 with rational c_i."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

import mpmath


@dataclass(frozen=True)
class EValue:
    coeffs: tuple[Fraction, Fraction, Fraction]

    @classmethod
    def rational(cls, q) -> "EValue":
        return cls((Fraction(q), Fraction(0), Fraction(0)))

    @classmethod
    def e2_plus_3(cls, factor=1) -> "EValue":
        f = Fraction(factor)
        return cls((3 * f, Fraction(0), f))

    def __add__(self, other) -> "EValue":
        if not isinstance(other, EValue):
            other = EValue.rational(other)
        return EValue(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __mul__(self, q) -> "EValue":
        q = Fraction(q)
        return EValue(tuple(a * q for a in self.coeffs))

    __rmul__ = __mul__

    @property
    def is_rational(self) -> bool:
        return self.coeffs[1] == 0 and self.coeffs[2] == 0

    def mp(self, dps: int = 40):
        with mpmath.workdps(dps):
            e = mpmath.e
            c0, c1, c2 = (mpmath.mpf(c.numerator) / c.denominator for c in self.coeffs)
            return c0 + c1 * e + c2 * e * e

    def __float__(self) -> float:
        return float(self.mp())

    def floor(self) -> int:
        if self.is_rational:
            return floor(self.coeffs[0])
        return int(mpmath.floor(self.mp()))

    def ceil(self) -> int:
        if self.is_rational:
            return ceil(self.coeffs[0])
        return int(mpmath.ceil(self.mp()))

    def __lt__(self, other) -> bool:
        return self.mp() < (other.mp() if isinstance(other, EValue) else mpmath.mpf(Fraction(other).numerator) / Fraction(other).denominator)

    def __le__(self, other) -> bool:
        return self == other or self < other

    def render(self) -> str:
        """Value at 15 significant digits."""
        if self.is_rational and self.coeffs[0].denominator == 1:
            return str(self.coeffs[0].numerator)
        return mpmath.nstr(self.mp(), 15)

    def symbolic(self) -> str:
        c0, c1, c2 = self.coeffs
        if self.is_rational:
            return str(c0)
        if c1 == 0 and c0 == 3 * c2:
            return f"{c2}*(e^2+3)"
        parts = [f"{c}{s}" for c, s in ((c0, ""), (c1, "*e"), (c2, "*e^2")) if c]
        return " + ".join(parts)
