"""Face lattice of conv(A), defectiveness, non-defective face counts and
generators for Lawrence configurations and Horn-Kapranov samples."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

from .config import PointConfig, build_config, circuits, gale_dual, is_pyramid
from .errors import PreconditionError
from .exactla import RationalMatrix, determinant, dot, kernel_basis, rank, to_fraction
from .exactla import multivariate as mv
from .exactla.numbers import rational_power

FACE_SCALE_BOUND = 16


@dataclass(frozen=True)
class FaceRecord:
    indices: tuple[int, ...]
    dim: int
    codim: int
    support_functional: tuple[Fraction, ...]  # (constant, w_1..w_n)
    is_simplex: bool
    is_pyramid: bool
    is_circuit: bool
    is_defective: bool

    def evaluate(self, point: Sequence) -> Fraction:
        c0, *w = self.support_functional
        return c0 + dot(w, point)


def _hyperplane_through(points: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...] | None:
    # affine functional (c0, w) vanishing on d affinely independent points of R^d
    M = RationalMatrix([(Fraction(1),) + tuple(p) for p in points])
    ker = kernel_basis(M)
    if ker.ncols != 1:
        return None
    return ker.col(0)


def _facets(red: PointConfig) -> list[tuple[frozenset[int], tuple[Fraction, ...]]]:
    d = red.d
    pts = red.exponents
    N = len(pts)
    seen: dict[frozenset[int], tuple[Fraction, ...]] = {}
    for S in combinations(range(N), d):
        if any(set(S) <= f for f in seen):
            continue
        ell = _hyperplane_through([pts[i] for i in S])
        if ell is None:
            continue
        vals = [ell[0] + dot(ell[1:], p) for p in pts]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            ell = tuple(-x for x in ell)
            vals = [-v for v in vals]
        else:
            continue
        zero = frozenset(i for i, v in enumerate(vals) if v == 0)
        if len(zero) < N:
            seen.setdefault(zero, ell)
    return list(seen.items())


def _lift_functional(cfg: PointConfig, ell: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    # functional on the span coordinates -> functional on R^n
    w = [Fraction(0)] * cfg.n
    for j, c in zip(cfg.span_coordinates, ell[1:]):
        w[j] = c
    return (ell[0],) + tuple(w)


def enumerate_faces(cfg: PointConfig, scale_bound: int = FACE_SCALE_BOUND, flags: bool = True) -> list[FaceRecord]:
    """All nonempty faces of conv(A), including conv(A) itself.

    Facets come from hyperplanes spanned by d affinely independent points
    (within the affine span) that leave every point on one side.  The
    remaining faces are the nonempty intersections of facets.  The support
    functional of a proper face is the sum of those of its facets.
    """
    if len(cfg) > scale_bound:
        raise PreconditionError(f"face enumeration is limited to {scale_bound} points, got {len(cfg)}")
    N = len(cfg)
    full = tuple(range(N))
    zero_functional = (Fraction(0),) * (cfg.n + 1)
    faces: dict[frozenset[int], tuple[Fraction, ...]] = {}
    if cfg.d >= 1:
        red = cfg.reduced()
        facets = _facets(red)
        for f, ell in facets:
            faces[f] = _lift_functional(cfg, ell)
        frontier = list(faces)
        facet_sets = [f for f, _ in facets]
        while frontier:
            nxt = []
            for f in frontier:
                for g in facet_sets:
                    h = f & g
                    if h and h not in faces:
                        faces[h] = zero_functional
                        nxt.append(h)
            frontier = nxt
        for f in list(faces):
            total = zero_functional
            for g, ell in facets:
                if f <= g:
                    total = tuple(a + b for a, b in zip(total, _lift_functional(cfg, ell)))
            faces[f] = total
    faces[frozenset(full)] = zero_functional
    out = [_face_record(cfg, tuple(sorted(f)), ell, flags) for f, ell in faces.items()]
    out.sort(key=lambda r: (r.dim, r.indices))
    return out


def _face_record(cfg: PointConfig, idx: tuple[int, ...], ell, flags: bool) -> FaceRecord:
    sub = cfg.sub(idx)
    simplex = sub.k == 0
    if flags:
        pyr = is_pyramid(sub)
        circ = sub.k == 1 and not pyr
        defective = is_defective(sub)
    else:
        pyr = circ = defective = False
    return FaceRecord(idx, sub.d, sub.k, ell, simplex, pyr, circ, defective)


def verify_face(cfg: PointConfig, face: FaceRecord) -> bool:
    inside = set(face.indices)
    for i, p in enumerate(cfg.exponents):
        v = face.evaluate(p)
        if (i in inside and v != 0) or (i not in inside and v <= 0):
            return False
    return face.dim == rank(cfg.sub(face.indices).matrix) - 1


# -- cuspidal form ------------------------------------------------------------


@dataclass(frozen=True)
class CuspidalForm:
    nvars: int
    terms: dict

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, y: Sequence) -> Fraction:
        return mv.evaluate(self.terms, y)


def _squared_minors(red: PointConfig) -> list[tuple[tuple[int, ...], Fraction]]:
    H = red.hat_matrix
    out = []
    for sigma in combinations(range(len(red)), red.d):
        det = determinant(H.select_columns(sigma)) if sigma else Fraction(1)
        if det:
            out.append((sigma, det * det))
    return out


def cuspidal_form(cfg: PointConfig) -> CuspidalForm:
    """Expanded sum over d-subsets s of det(Ahat^s)^2 prod_{l in s} <B_l, y>.

    The configuration is first written in coordinates of its affine span.
    Codimension zero gives the zero form in no variables.
    """
    red = cfg.reduced()
    k = red.k
    if k == 0:
        return CuspidalForm(0, {})
    B = gale_dual(red).B
    forms = [mv.linear_form(B.row(i), k) for i in range(len(red))]
    total: dict = {}
    for sigma, w in _squared_minors(red):
        term = mv.constant(w, k)
        for l in sigma:
            term = mv.mul(term, forms[l])
            if not term:
                break
        total = mv.add(total, term)
    return CuspidalForm(k, total)


def cuspidal_value(cfg: PointConfig, y: Sequence) -> Fraction:
    """Evaluate the cuspidal form at y straight from the minors, without expanding."""
    red = cfg.reduced()
    B = gale_dual(red).B
    lin = [dot(B.row(i), y) for i in range(len(red))]
    total = Fraction(0)
    for sigma, w in _squared_minors(red):
        for l in sigma:
            w *= lin[l]
        total += w
    return total


def is_defective(cfg: PointConfig, method: str = "grid") -> bool:
    """Whether the cuspidal form vanishes identically.

    ``grid`` evaluates on {0..d}^k, which detects any nonzero polynomial of
    degree at most d; ``expand`` inspects the expanded form.  Codimension
    zero is reported as defective (its form is zero).
    """
    red = cfg.reduced()
    if red.k == 0:
        return True
    if method == "expand":
        return cuspidal_form(red).is_zero()
    if method != "grid":
        raise ValueError(f"unknown method {method!r}")
    for y in product(range(red.d + 1), repeat=red.k):
        if cuspidal_value(red, y) != 0:
            return False
    return True


# -- counting -----------------------------------------------------------------


@dataclass(frozen=True)
class NonDefectiveCount:
    counts: dict  # codim -> count
    bounds: dict  # codim -> Fraction
    respected: dict  # codim -> bool
    total: int
    total_bound: Fraction
    total_respected: bool


def nd_face_bound(n: int, k: int, ell: int) -> Fraction:
    return Fraction(comb(n + k + 1, k - ell), k - ell + 1)


def nd_total_bound(n: int, k: int) -> Fraction:
    return sum((Fraction(comb(n + k + 1, j), j + 1) for j in range(k)), Fraction(0))


def count_nondefective_faces(cfg: PointConfig, faces: list[FaceRecord] | None = None) -> NonDefectiveCount:
    faces = enumerate_faces(cfg) if faces is None else faces
    n, k = cfg.d, cfg.k
    counts = {ell: 0 for ell in range(1, k + 1)}
    for f in faces:
        if not f.is_defective:
            counts[f.codim] = counts.get(f.codim, 0) + 1
    bounds = {ell: nd_face_bound(n, k, ell) for ell in counts}
    respected = {ell: counts[ell] <= bounds[ell] for ell in counts}
    total = sum(counts.values())
    tb = nd_total_bound(n, k)
    return NonDefectiveCount(counts, bounds, respected, total, tb, total <= tb)


# -- generators ---------------------------------------------------------------


@dataclass(frozen=True)
class LawrenceResult:
    config: PointConfig
    base: PointConfig
    circuit_faces: tuple[tuple[int, ...], ...]


def _general_position(pts: list[tuple[int, ...]], m: int) -> bool:
    if len(set(pts)) < len(pts):
        return False
    for S in combinations(range(len(pts)), min(m + 1, len(pts))):
        M = RationalMatrix([[1] * len(S)] + [[pts[i][j] for i in S] for j in range(m)])
        if rank(M) < len(S):
            return False
    return True


def lawrence_config(m: int, k: int, seed: int, coord_range: int = 20, attempts: int = 50) -> LawrenceResult:
    """Lawrence configuration over m+k+1 seeded random integer points of R^m.

    Every m+1 base points are required to be affinely independent, so the
    circuits of the base are exactly its (m+2)-subsets.  Points of the result
    are the columns of [[A, 0], [I, I]] with the last identity coordinate
    dropped (it is determined by the others).
    """
    if m < 1 or k < 1:
        raise PreconditionError("need m >= 1 and k >= 1")
    rng = random.Random(seed)
    N = m + k + 1
    for _ in range(attempts):
        pts = [tuple(rng.randint(-coord_range, coord_range) for _ in range(m)) for _ in range(N)]
        if _general_position(pts, m):
            break
    else:
        raise PreconditionError(f"no base in general position after {attempts} draws (seed {seed})")
    base = build_config(pts)
    out = []
    for i, v in enumerate(pts):
        e = [1 if j == i else 0 for j in range(N)]
        out.append((1,) + v + tuple(e[:-1]))
    for i in range(N):
        e = [1 if j == i else 0 for j in range(N)]
        out.append((0,) + (0,) * m + tuple(e[:-1]))
    cfg = build_config(out)
    faces = tuple(tuple(sorted(list(I) + [N + i for i in I])) for I in circuits(base))
    return LawrenceResult(cfg, base, faces)


def horn_kapranov_sample(cfg: PointConfig, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
    """Coefficients (x^{-a} <B_a, y>)_a of a polynomial singular at x.

    The configuration must already live in its affine span.  Powers of x
    must be rational.
    """
    if cfg.d != cfg.n:
        raise PreconditionError("reduce the configuration to its affine span first")
    x = [to_fraction(v) for v in x]
    if len(x) != cfg.n or any(v <= 0 for v in x):
        raise PreconditionError("x must be a positive vector with one entry per variable")
    B = gale_dual(cfg).B
    if len(y) != B.ncols:
        raise PreconditionError(f"y must have {B.ncols} entries")
    out = []
    for i, a in enumerate(cfg.exponents):
        lin = dot(B.row(i), y)
        if lin == 0:
            raise PreconditionError(f"y lies on the hyperplane <B_{i}, y> = 0")
        mono = Fraction(1)
        for xi, ai in zip(x, a):
            p = rational_power(xi, -ai)
            if p is None:
                raise PreconditionError(f"{xi}^{-ai} is irrational")
            mono *= p
        out.append(mono * lin)
    return tuple(out)
