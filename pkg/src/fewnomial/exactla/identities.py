"""Determinant-sum identity used as a self-test oracle."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..errors import PreconditionError
from .matrix import RationalMatrix, determinant, rank, to_fraction


class ShapeMismatch(PreconditionError):
    pass


class NotInKernel(PreconditionError):
    pass


class OnesNotInRowSpan(PreconditionError):
    pass


def cauchy_binet_sum(A: RationalMatrix, C: RationalMatrix, v: Sequence) -> Fraction:
    """sum over a-subsets s of columns of det(A^s) det(C^s) prod_{u in s} v_u."""
    a, b = A.shape
    v = [to_fraction(x) for x in v]
    total = Fraction(0)
    for sigma in combinations(range(b), a):
        w = Fraction(1)
        for u in sigma:
            w *= v[u]
        if w == 0:
            continue
        da = determinant(A.select_columns(sigma))
        if da == 0:
            continue
        total += da * determinant(C.select_columns(sigma)) * w
    return total


def cauchy_binet_identity_check(A: RationalMatrix, C: RationalMatrix, v: Sequence) -> bool:
    """Check that the weighted sum of paired maximal minors vanishes.

    Preconditions (each raises its own exception type): ``A`` and ``C`` share
    a shape ``a x b`` with ``a <= b``; ``C v = 0``; the all-ones row lies in
    the row span of ``A``.
    """
    if A.shape != C.shape:
        raise ShapeMismatch(f"A is {A.shape}, C is {C.shape}")
    a, b = A.shape
    if a > b:
        raise ShapeMismatch(f"need rows <= cols, got {a}x{b}")
    if len(v) != b:
        raise ShapeMismatch(f"v has length {len(v)}, expected {b}")
    if any(x != 0 for x in C @ v):
        raise NotInKernel("C v is not zero")
    ones = RationalMatrix([[1] * b])
    if rank(A.stack(ones)) != rank(A):
        raise OnesNotInRowSpan("row of ones is not in the row span of A")
    return cauchy_binet_sum(A, C, v) == 0
