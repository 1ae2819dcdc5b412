"""Dense univariate polynomials over Q and Sturm-based real root isolation."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .matrix import to_fraction


class UnivariatePoly:
    """Polynomial with rational coefficients, ``coeffs[i]`` multiplies ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def linear(cls, const, slope) -> "UnivariatePoly":
        return cls([const, slope])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "UnivariatePoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UnivariatePoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly(-x for x in self.coeffs)

    def __sub__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return self + (-other)

    def __mul__(self, other) -> "UnivariatePoly":
        if not isinstance(other, UnivariatePoly):
            s = to_fraction(other)
            return UnivariatePoly(x * s for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UnivariatePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UnivariatePoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = UnivariatePoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, UnivariatePoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UnivariatePoly({[str(c) for c in self.coeffs]})"

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "UnivariatePoly") -> tuple["UnivariatePoly", "UnivariatePoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return UnivariatePoly(), self
        q = [Fraction(0)] * (dq + 1)
        lc = other.leading
        for i in range(dq, -1, -1):
            f = r[i + other.degree] / lc
            q[i] = f
            if f:
                for j, c in enumerate(other.coeffs):
                    r[i + j] -= f * c
        return UnivariatePoly(q), UnivariatePoly(r[: other.degree])

    def monic(self) -> "UnivariatePoly":
        return self * (1 / self.leading) if self.coeffs else self

    def integer_coeffs(self) -> list[int]:
        den = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        return [int(c * den) for c in self.coeffs]


def _primitive(c: list[int]) -> list[int]:
    """Divide out the positive content; the sign is kept."""
    while c and c[-1] == 0:
        c.pop()
    g = gcd(*c) if c else 0
    return [x // g for x in c] if g > 1 else c


def _ints(p: UnivariatePoly) -> list[int]:
    return _primitive(p.integer_coeffs())


def _prem(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Pseudo-division by ``b`` with a positive multiplier, so that
    ``|lc(b)|^e a = q b + r`` with signs intact.  Returns (q, r)."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    sl = 1 if lc > 0 else -1
    al = abs(lc)
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1 - db, -1, -1):
        top = r[i + db]
        r = [x * al for x in r]
        q = [x * al for x in q]
        if top:
            f = sl * top
            q[i] += f
            for j, c in enumerate(b):
                r[i + j] -= f * c
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _primitive(list(a)), _primitive(list(b))
    while b:
        a, b = b, _primitive(_prem(a, b)[1])
    return a


def poly_gcd(a: UnivariatePoly, b: UnivariatePoly) -> UnivariatePoly:
    if b.is_zero():
        return a.monic()
    if a.is_zero():
        return b.monic()
    return UnivariatePoly(_int_gcd(_ints(a), _ints(b))).monic()


def squarefree_part(p: UnivariatePoly) -> UnivariatePoly:
    if p.degree <= 0:
        return p.monic()
    ip = _ints(p)
    g = _int_gcd(ip, _ints(p.derivative()))
    if len(g) == 1:
        return p.monic()
    return UnivariatePoly(_primitive(_prem(ip, g)[0])).monic()


def sturm_sequence(p: UnivariatePoly) -> list[UnivariatePoly]:
    """Sturm chain up to positive scalings, built from integer pseudo-remainders."""
    seq = [_ints(p), _ints(p.derivative())]
    while seq[-1]:
        seq.append(_primitive([-x for x in _prem(seq[-2], seq[-1])[1]]))
    return [UnivariatePoly(c) for c in seq[:-1]]


def sign_variations(values: Iterable) -> int:
    """Number of strict sign changes in a sequence, zeros ignored."""
    last = 0
    count = 0
    for v in values:
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def _sturm_count(seq: list[UnivariatePoly], a: Fraction, b: Fraction) -> int:
    # distinct roots in (a, b] for a square-free seq[0]
    return sign_variations(q(a) for q in seq) - sign_variations(q(b) for q in seq)


def cauchy_bound(p: UnivariatePoly) -> Fraction:
    lc = abs(p.leading)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(
    p: UnivariatePoly, interval: tuple | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational isolating intervals for the distinct real roots of ``p``
    in the closed interval ``[lo, hi]`` (whole line when ``interval`` is None).

    An exact rational root met during bisection is returned as ``(r, r)``;
    other intervals are open-ended ``(lo, hi)`` with exactly one root inside
    and ``p`` nonzero at both ends.
    """
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    if p.degree == 0:
        return []
    q = squarefree_part(p)
    if interval is None:
        B = cauchy_bound(q)
        lo, hi = -B, B
    else:
        lo, hi = (to_fraction(x) for x in interval)
        if lo > hi:
            raise ValueError("empty interval")
    seq = sturm_sequence(q)
    out: list[tuple[Fraction, Fraction]] = []
    if q(lo) == 0:
        out.append((lo, lo))
    stack = [(lo, hi)]
    found = []
    while stack:
        a, b = stack.pop()
        n = _sturm_count(seq, a, b)
        if n == 0:
            continue
        if q(b) == 0:
            found.append((b, b))
            n -= 1
            if n == 0:
                continue
            # shrink away from the exact root at b
            b2 = b - (b - a) / 1024
            while _sturm_count(seq, b2, b) > 1 or q(b2) == 0:
                b2 = b - (b - b2) / 2
            stack.append((a, b2))
            continue
        if n == 1 and q(a) != 0:
            found.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    out.extend(found)
    out.sort()
    return out


def refine_root(p: UnivariatePoly, interval: tuple[Fraction, Fraction], width) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a square-free ``p`` until narrower than ``width``."""
    a, b = interval
    if a == b:
        return a, b
    width = to_fraction(width)
    fa = p(a)
    while b - a > width:
        m = (a + b) / 2
        fm = p(m)
        if fm == 0:
            return m, m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return a, b


def rational_root_in(p: UnivariatePoly, interval: tuple[Fraction, Fraction]) -> Fraction | None:
    """The root of ``p`` in an isolating interval if it is rational, else None.

    A rational root ``r/s`` of an integer polynomial has ``s`` dividing the
    leading coefficient ``L``, so ``L * root`` is an integer.
    """
    a, b = interval
    if a == b:
        return a
    q = squarefree_part(p)
    ints = UnivariatePoly(q.integer_coeffs())
    L = abs(ints.leading)
    a, b = refine_root(q, (a, b), Fraction(1, 4 * L))
    if a == b:
        return a
    for num in range(int((a * L).__floor__()), int((b * L).__ceil__()) + 1):
        r = Fraction(num, L)
        if a <= r <= b and q(r) == 0:
            return r
    return None
