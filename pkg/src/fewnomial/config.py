"""Point configurations, Gale duals and the matroid layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import PreconditionError
from .exactla import (
    RationalMatrix,
    determinant,
    kernel_basis,
    positive_dependence,
    rank,
    rref,
    to_fraction,
)


def _as_vector(p) -> tuple[Fraction, ...]:
    if isinstance(p, (int, Fraction, str)):
        return (to_fraction(p),)
    return tuple(to_fraction(x) for x in p)


@dataclass(frozen=True)
class PointConfig:
    """An ordered list of distinct rational exponent vectors in R^n."""

    exponents: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.exponents[0])

    def __len__(self) -> int:
        return len(self.exponents)

    @cached_property
    def matrix(self) -> RationalMatrix:
        """The exponent matrix with a row of ones on top, shape (n+1) x |A|."""
        rows = [[1] * len(self)] + [[p[i] for p in self.exponents] for i in range(self.n)]
        return RationalMatrix(rows)

    @cached_property
    def hat_matrix(self) -> RationalMatrix:
        return RationalMatrix([[p[i] for p in self.exponents] for i in range(self.n)], ncols=len(self))

    @cached_property
    def d(self) -> int:
        return rank(self.matrix) - 1

    @property
    def dim(self) -> int:
        return self.d

    @property
    def k(self) -> int:
        return len(self) - self.d - 1

    @property
    def codim(self) -> int:
        return self.k

    def sub(self, indices: Iterable[int]) -> "PointConfig":
        return PointConfig(tuple(self.exponents[i] for i in indices))

    @cached_property
    def span_coordinates(self) -> tuple[int, ...]:
        """Coordinates whose projection is injective on the affine span."""
        base = self.exponents[0]
        diffs = RationalMatrix([[x - y for x, y in zip(p, base)] for p in self.exponents], ncols=self.n)
        _, pivots = rref(diffs)
        return tuple(pivots)

    def reduced(self) -> "PointConfig":
        """The same configuration written in d coordinates of its affine span.

        The projection keeps a set of pivot coordinates, which is an affine
        isomorphism from the span onto R^d, so the exponent matrix changes by
        an invertible left factor and the Gale dual is unchanged.
        """
        cols = self.span_coordinates
        if len(cols) == self.n:
            return self
        return PointConfig(tuple(tuple(p[c] for c in cols) for p in self.exponents))

    def __repr__(self) -> str:
        pts = ", ".join("(" + ",".join(str(x) for x in p) + ")" for p in self.exponents)
        return f"PointConfig([{pts}], d={self.d}, k={self.k})"


def build_config(exponents: Sequence) -> PointConfig:
    pts = [_as_vector(p) for p in exponents]
    if not pts:
        raise PreconditionError("a configuration needs at least one point")
    if len({len(p) for p in pts}) != 1:
        raise PreconditionError("exponent vectors have different lengths")
    if len(pts[0]) == 0:
        raise PreconditionError("exponent vectors must have at least one coordinate")
    seen: dict[tuple, int] = {}
    for i, p in enumerate(pts):
        if p in seen:
            raise PreconditionError(f"duplicate points at indices {seen[p]} and {i}: {[str(x) for x in p]}")
        seen[p] = i
    return PointConfig(tuple(pts))


@dataclass(frozen=True)
class GaleDual:
    B: RationalMatrix

    @property
    def k(self) -> int:
        return self.B.ncols

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.B.row(i)

    @property
    def rows(self):
        return self.B.rows


def gale_dual(cfg: PointConfig) -> GaleDual:
    """Canonical kernel basis of the exponent matrix, one row per point."""
    return GaleDual(kernel_basis(cfg.matrix))


def _colinear(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u)))


@dataclass(frozen=True)
class MatroidReport:
    circuits: tuple[tuple[int, ...], ...]
    is_pyramid: bool
    basis_indices: tuple[int, ...]
    sim_classes: tuple[tuple[int, ...], ...] | None
    min_circuit_dim: int | None


def circuits(cfg: PointConfig, max_size: int | None = None) -> list[tuple[int, ...]]:
    """Minimal affinely dependent subsets, by size then lexicographically.

    A subset S is a circuit iff its exponent matrix has rank |S|-1 and the
    kernel vector has full support.  Circuits have at most d+2 points.
    """
    A = cfg.matrix
    N = len(cfg)
    top = cfg.d + 2 if max_size is None else min(max_size, cfg.d + 2)
    out = []
    for size in range(2, top + 1):
        for S in combinations(range(N), size):
            sub = A.select_columns(S)
            if rank(sub) != size - 1:
                continue
            ker = kernel_basis(sub)
            if all(x != 0 for x in ker.col(0)):
                out.append(S)
    return out


def matroid_report(cfg: PointConfig) -> MatroidReport:
    circ = circuits(cfg)
    B = gale_dual(cfg).B
    nonzero = tuple(i for i in range(len(cfg)) if any(x != 0 for x in B.row(i)))
    pyramid = len(nonzero) < len(cfg)
    classes = None
    if cfg.k == 2 and nonzero:
        groups: list[list[int]] = []
        for i in nonzero:
            for g in groups:
                if _colinear(B.row(g[0]), B.row(i)):
                    g.append(i)
                    break
            else:
                groups.append([i])
        classes = tuple(tuple(g) for g in groups)
    mcd = min((len(c) - 2 for c in circ), default=None)
    return MatroidReport(tuple(circ), pyramid, nonzero, classes, mcd)


def is_pyramid(cfg: PointConfig) -> bool:
    """True when some point's removal drops the dimension (some Gale row is zero).

    A simplex counts as a pyramid.
    """
    B = gale_dual(cfg).B
    return any(all(x == 0 for x in B.row(i)) for i in range(len(cfg)))


def is_coface(cfg: PointConfig, J: Iterable[int]) -> bool:
    """Exact LP test that the origin lies in the open positive cone of the Gale rows in J."""
    B = gale_dual(cfg).B
    J = sorted(set(J))
    if not J:
        return False
    return positive_dependence([B.row(i) for i in J]) is not None


def _positive_circuits(B: RationalMatrix) -> list[frozenset[int]]:
    # supports of minimal linear dependencies among the rows of B whose
    # coefficients all share one sign
    N, k = B.shape
    found = []
    for size in range(1, k + 2):
        for S in combinations(range(N), size):
            sub = RationalMatrix([B.row(i) for i in S], ncols=k).T
            if rank(sub) != size - 1:
                continue
            ker = kernel_basis(sub).col(0)
            if all(x > 0 for x in ker) or all(x < 0 for x in ker):
                found.append(frozenset(S))
    return found


def cofaces(cfg: PointConfig) -> list[tuple[int, ...]]:
    """All nonempty J with 0 in the open positive cone spanned by {B_a : a in J}.

    Every nonnegative dependency of the Gale rows is a conformal sum of
    elementary (minimal support) dependencies, each of which is then
    single-signed.  The coface supports are therefore exactly the unions of
    supports of single-signed elementary dependencies.  A configuration of
    codimension zero has no cofaces.
    """
    if cfg.k == 0:
        return []
    B = gale_dual(cfg).B
    base = _positive_circuits(B)
    closed = set(base)
    frontier = list(base)
    while frontier:
        nxt = []
        for s in frontier:
            for b in base:
                u = s | b
                if u not in closed:
                    closed.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted((tuple(sorted(s)) for s in closed), key=lambda s: (len(s), s))


def sign_compatible(cfg: PointConfig, coeffs: Sequence) -> bool:
    if cfg.k != 1:
        raise PreconditionError(f"sign compatibility needs codimension 1, got {cfg.k}")
    c = [to_fraction(x) for x in coeffs]
    if len(c) != len(cfg):
        raise PreconditionError("one coefficient per point is required")
    if any(x == 0 for x in c):
        raise PreconditionError("coefficients must be nonzero")
    lam = gale_dual(cfg).B.col(0)
    prods = [a * b for a, b in zip(c, lam)]
    return all(p > 0 for p in prods) or all(p < 0 for p in prods)


def apply_affine_transform(cfg: PointConfig, T: RationalMatrix) -> PointConfig:
    """Apply the affine map encoded as an (n+1)x(n+1) matrix acting on (1, a)."""
    n = cfg.n
    if T.shape != (n + 1, n + 1):
        raise PreconditionError(f"transform must be {(n + 1, n + 1)}, got {T.shape}")
    if T.row(0) != tuple(Fraction(int(j == 0)) for j in range(n + 1)):
        raise PreconditionError("first row of an affine transform must be (1, 0, ..., 0)")
    if determinant(T) == 0:
        raise PreconditionError("singular transform")
    out = []
    for p in cfg.exponents:
        img = T @ ((Fraction(1),) + p)
        out.append(img[1:])
    return build_config(out)


def pyramid_over(cfg: PointConfig, S: Sequence[int]) -> bool:
    """A is a pyramid over S iff every Gale row outside S vanishes."""
    B = gale_dual(cfg).B
    keep = set(S)
    return all(all(x == 0 for x in B.row(i)) for i in range(len(cfg)) if i not in keep)
