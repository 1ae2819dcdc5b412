"""Exact rational powers and roots."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .matrix import to_fraction


def integer_nth_root(x: int, n: int) -> int | None:
    """The exact nonnegative integer n-th root of ``x >= 0`` or None."""
    if x < 0 or n < 1:
        return None
    if x in (0, 1) or n == 1:
        return x
    if n == 2:
        r = isqrt(x)
        return r if r * r == x else None
    r = int(round(x ** (1.0 / n))) if x.bit_length() < 1000 else 1 << (x.bit_length() // n)
    # Newton polish
    while True:
        nxt = ((n - 1) * r + x // max(r, 1) ** (n - 1)) // n
        if abs(nxt - r) <= 1:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**n == x:
            return cand
    return None


def rational_root(x, n: int) -> Fraction | None:
    """Exact positive n-th root of a positive rational, or None if irrational."""
    x = to_fraction(x)
    if x <= 0:
        return None
    p = integer_nth_root(x.numerator, n)
    q = integer_nth_root(x.denominator, n)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def rational_power(base, exponent) -> Fraction | None:
    """``base ** exponent`` for positive rational base and rational exponent,
    when the result is rational; None otherwise."""
    base = to_fraction(base)
    e = to_fraction(exponent)
    if base <= 0:
        raise ValueError("base must be positive")
    r = rational_root(base, e.denominator)
    if r is None:
        return None
    return r ** e.numerator
