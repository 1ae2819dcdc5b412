"""Seeded random instances shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from fewnomial.config import build_config, gale_dual
from fewnomial.exactla import RationalMatrix, dot, strict_cone_feasible

SHARP_EXPONENTS = [(0, 0), (4, 0), (1, 2), (3, 2), (2, 3)]
SHARP_COEFFS = [1, 1, -1, -1, Fraction(19, 25)]
FNR_EXPONENTS = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]


def random_points(rng: random.Random, n: int, count: int, lo: int = 0, hi: int = 4) -> list[tuple[int, ...]]:
    pts: set[tuple[int, ...]] = set()
    while len(pts) < count:
        pts.add(tuple(rng.randint(lo, hi) for _ in range(n)))
    return sorted(pts)


def random_config(rng: random.Random, max_points: int = 12, max_n: int = 3):
    n = rng.randint(1, max_n)
    hi = 4 if n > 1 else 12
    count = rng.randint(2, min(max_points, (hi + 1) ** n))
    return build_config(random_points(rng, n, count, 0, hi))


def random_config_with_codim(rng: random.Random, k: int, n: int = 2, hi: int = 4):
    while True:
        cfg = build_config(random_points(rng, n, n + 1 + k, 0, hi))
        if cfg.k == k and cfg.d == n:
            return cfg


def random_signs(rng: random.Random, N: int) -> list[int]:
    return [rng.choice((-1, 1)) for _ in range(N)]


def cone_samples(D, rng: random.Random, count: int) -> list[tuple[Fraction, ...]]:
    """Rational points of the open cone {<D_i, y> > 0}, near an exact witness."""
    y0 = strict_cone_feasible(RationalMatrix(D))
    if y0 is None:
        return []
    out = []
    scale = max(abs(x) for x in y0) or 1
    tries = 0
    while len(out) < count and tries < 500:
        tries += 1
        eps = Fraction(rng.randint(1, 40), 400)
        z = tuple(x + scale * eps * rng.randint(-3, 3) for x in y0)
        if all(dot(d, z) > 0 for d in D) and z not in out:
            out.append(z)
    return out


def dual_rows_of(cfg, coeffs):
    B = gale_dual(cfg).B
    return [tuple(x / Fraction(c) for x in B.row(i)) for i, c in enumerate(coeffs)]
