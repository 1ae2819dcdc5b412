"""Signed polynomials: a configuration with nonzero coefficients and optional heights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .config import PointConfig, build_config
from .errors import PreconditionError
from .exactla import to_fraction


@dataclass(frozen=True)
class SignedPolynomial:
    cfg: PointConfig
    coeffs: tuple[Fraction, ...]
    heights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if len(self.coeffs) != len(self.cfg):
            raise PreconditionError(f"{len(self.coeffs)} coefficients for {len(self.cfg)} points")
        if any(c == 0 for c in self.coeffs):
            raise PreconditionError("coefficients must be nonzero")
        if self.heights is not None and len(self.heights) != len(self.cfg):
            raise PreconditionError(f"{len(self.heights)} heights for {len(self.cfg)} points")

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if c > 0 else -1 for c in self.coeffs)

    def with_heights(self, heights: Sequence | None) -> "SignedPolynomial":
        h = None if heights is None else tuple(to_fraction(x) for x in heights)
        return SignedPolynomial(self.cfg, self.coeffs, h)

    def restrict(self, indices: Sequence[int]) -> "SignedPolynomial":
        h = None if self.heights is None else tuple(self.heights[i] for i in indices)
        return SignedPolynomial(self.cfg.sub(indices), tuple(self.coeffs[i] for i in indices), h)

    def evaluate_float(self, x: Sequence[float], t: float = 1.0) -> float:
        h = self.heights or (0,) * len(self.cfg)
        total = 0.0
        for c, a, hh in zip(self.coeffs, self.cfg.exponents, h):
            term = float(c) * t ** float(hh)
            for xi, ai in zip(x, a):
                term *= xi ** float(ai)
            total += term
        return total


def signed_polynomial(exponents, coeffs, heights=None) -> SignedPolynomial:
    cfg = build_config(exponents)
    c = tuple(to_fraction(x) for x in coeffs)
    h = None if heights is None else tuple(to_fraction(x) for x in heights)
    return SignedPolynomial(cfg, c, h)
