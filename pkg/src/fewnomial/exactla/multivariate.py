"""Sparse multivariate polynomials over Q as {exponent tuple: coefficient} dicts."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

Poly = dict[tuple[int, ...], Fraction]


def constant(c, nvars: int) -> Poly:
    c = Fraction(c)
    return {(0,) * nvars: c} if c else {}


def linear_form(coeffs: Sequence, nvars: int | None = None) -> Poly:
    nvars = len(coeffs) if nvars is None else nvars
    out: Poly = {}
    for j, c in enumerate(coeffs):
        if c:
            e = [0] * nvars
            e[j] = 1
            out[tuple(e)] = Fraction(c)
    return out


def add(p: Mapping, q: Mapping) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, Fraction(0)) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def scale(p: Mapping, s) -> Poly:
    s = Fraction(s)
    return {e: c * s for e, c in p.items()} if s else {}


def mul(p: Mapping, q: Mapping) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, Fraction(0)) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def evaluate(p: Mapping, point: Sequence) -> Fraction:
    total = Fraction(0)
    for e, c in p.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term *= Fraction(x) ** k
        total += term
    return total


def total_degree(p: Mapping) -> int:
    return max((sum(e) for e in p), default=-1)
