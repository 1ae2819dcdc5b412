"""Viro critical systems through Gale duality.

For a face F with support A_F, coefficients c and heights h, the critical
system asks for positive (x, t) with f_t^F = x_i d/dx_i f_t^F = 0.  Its
positive solutions correspond to points y of the cone {<D_i, y> > 0}
(D_i = B_i / c_i) solving prod <D_i, y>^{lambda_i} = 1 for lambda spanning
ker A_F^h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import comb, prod
from typing import Sequence

import mpmath

from .config import PointConfig, cofaces, gale_dual, is_pyramid
from .errors import InvariantViolation, PreconditionError
from .evalue import EValue
from .exactla import (
    RationalMatrix,
    UnivariatePoly,
    determinant,
    dot,
    isolate_real_roots,
    kernel_basis,
    primitive_integer,
    rank,
    rational_root_in,
    refine_root,
    sign_variations,
    squarefree_part,
    strict_cone_feasible,
    sturm_sequence,
    to_fraction,
)
from .exactla.numbers import rational_power
from .faces import FaceRecord, cuspidal_value, enumerate_faces
from .polynomial import SignedPolynomial

PYRAMID_EXCLUDED = "pyramid-excluded"
SIGN_EXCLUDED = "sign-excluded"
NO_POSITIVE_SOLUTION = "no-positive-solution"
CRITICAL_VALUES = "critical-values"
BOUND_ONLY = "bound-only"

T_WIDTH = Fraction(1, 10**12)
WITNESS_DPS = 50
RESIDUAL_TOL = 1e-10
EXACT_HEIGHT_SPAN = 64


# -- helpers ------------------------------------------------------------------


def _heights(poly: SignedPolynomial) -> tuple[Fraction, ...]:
    if poly.heights is None:
        raise PreconditionError("heights are required")
    return poly.heights


def lifted_matrix(cfg: PointConfig, h: Sequence) -> RationalMatrix:
    return RationalMatrix(list(cfg.matrix.rows) + [[to_fraction(x) for x in h]])


def h_compatible(cfg: PointConfig, h: Sequence, faces: list[FaceRecord] | None = None) -> tuple[bool, tuple[int, ...] | None]:
    """rank(A_F^h) = rank(A_F) + 1 on every non-pyramidal face; returns the first offender."""
    h = [to_fraction(x) for x in h]
    faces = enumerate_faces(cfg) if faces is None else faces
    for f in faces:
        if f.is_pyramid:
            continue
        sub = cfg.sub(f.indices)
        hf = [h[i] for i in f.indices]
        if rank(lifted_matrix(sub, hf)) != rank(sub.matrix) + 1:
            return False, f.indices
    return True, None


def coefficient_matrix(poly: SignedPolynomial) -> RationalMatrix:
    return poly.cfg.matrix.scale_columns(poly.coeffs)


def dual_rows(poly: SignedPolynomial) -> RationalMatrix:
    """Rows D_i = B_i / c_i; C . D = 0 is checked."""
    B = gale_dual(poly.cfg).B
    D = B.scale_rows([1 / c for c in poly.coeffs])
    C = coefficient_matrix(poly)
    if not (C @ D).is_zero():
        raise InvariantViolation("C . D is not zero")
    return D


def _det2(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class HalfSpaceResult:
    feasible: bool
    witness: tuple[Fraction, ...] | None
    monochromatic_coface: tuple[int, ...] | None  # local indices into the face


def half_space_filter(poly: SignedPolynomial, face: FaceRecord | Sequence[int]) -> HalfSpaceResult:
    """Exact feasibility of the cone {y : <D_i, y> > 0} for the face system."""
    idx = face.indices if isinstance(face, FaceRecord) else tuple(face)
    sub = poly.restrict(idx)
    if sub.cfg.k == 0:
        return HalfSpaceResult(False, None, None)
    D = dual_rows(sub)
    mono = None
    for J in cofaces(sub.cfg):
        s = {sub.signs[i] for i in J}
        if len(s) == 1:
            mono = J
            break
    y = strict_cone_feasible(D)
    if mono is not None and y is not None:
        raise InvariantViolation(f"cone nonempty despite single-signed coface {mono}")
    return HalfSpaceResult(y is not None, y, mono)


# -- results ------------------------------------------------------------------


@dataclass
class CriticalValue:
    exact: Fraction | None
    lo: Fraction
    hi: Fraction
    witness: tuple  # x in R^n (Fractions when exact, mpf otherwise)
    residual: float
    simple: bool = True
    gale_point: tuple | None = None

    @property
    def approx(self) -> float:
        return float(self.exact) if self.exact is not None else float((self.lo + self.hi) / 2)

    def render(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return f"[{float(self.lo):.15g}, {float(self.hi):.15g}]"


@dataclass
class CriticalFaceResult:
    face: FaceRecord
    status: str
    t_values: list[CriticalValue] = field(default_factory=list)
    certificate: str = ""
    details: dict = field(default_factory=dict)

    @property
    def exact_count(self) -> int | None:
        if self.status == BOUND_ONLY:
            return None
        return len(self.t_values)


# -- witness recovery -----------------------------------------------------------


def _span_system(cfg: PointConfig):
    """Rows a_i - a_0 (span coordinates) for d independent indices i."""
    red = cfg.reduced()
    pts = red.exponents
    chosen: list[int] = []
    rows: list[tuple[Fraction, ...]] = []
    for i in range(1, len(pts)):
        cand = rows + [tuple(x - y for x, y in zip(pts[i], pts[0]))]
        if rank(RationalMatrix(cand)) == len(cand):
            rows, chosen = cand, chosen + [i]
        if len(rows) == red.d:
            break
    return chosen, RationalMatrix(rows, ncols=red.d)


def _embed(cfg: PointConfig, span_values: Sequence, one) -> tuple:
    x = [one] * cfg.n
    for j, v in zip(cfg.span_coordinates, span_values):
        x[j] = v
    return tuple(x)


def witness_exact(cfg: PointConfig, ratios: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """Positive x with x^{a_i - a_0} = ratios[i] (i >= 1), exact if rational."""
    chosen, M = _span_system(cfg)
    if not chosen:
        return _embed(cfg, [], Fraction(1))
    from .exactla import inverse

    Minv = inverse(M)
    vals = []
    for j in range(M.ncols):
        v = Fraction(1)
        for col, i in enumerate(chosen):
            p = rational_power(ratios[i], Minv[j, col])
            if p is None:
                return None
            v *= p
        vals.append(v)
    return _embed(cfg, vals, Fraction(1))


def witness_float(cfg: PointConfig, ratios: Sequence) -> tuple:
    chosen, M = _span_system(cfg)
    with mpmath.workdps(WITNESS_DPS):
        if not chosen:
            return _embed(cfg, [], mpmath.mpf(1))
        A = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in r] for r in M.rows])
        b = mpmath.matrix([mpmath.log(_mp(ratios[i])) for i in chosen])
        sol = mpmath.lu_solve(A, b)
        return _embed(cfg, [mpmath.exp(sol[j]) for j in range(M.ncols)], mpmath.mpf(1))


def _iv(v):
    """Enclosure of a rational at the current interval precision."""
    v = to_fraction(v)
    return mpmath.iv.mpf(v.numerator) / mpmath.iv.mpf(v.denominator)


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def system_residual(poly: SignedPolynomial, x: Sequence, t) -> float:
    """Largest relative residual of f_t and x_j df_t/dx_j at (x, t)."""
    h = _heights(poly)
    exact = (
        all(isinstance(v, (int, Fraction)) for v in x)
        and isinstance(t, (int, Fraction))
        and _exact_powers_ok(h)
        and max(abs(Fraction(v).numerator) + Fraction(v).denominator for v in (*x, t)) < 2**64
    )
    if exact:
        terms = []
        for c, a, hh in zip(poly.coeffs, poly.cfg.exponents, h):
            tp = rational_power(t, hh)
            mono = Fraction(1)
            for xi, ai in zip(x, a):
                p = rational_power(xi, ai)
                if p is None:
                    exact = False
                    break
                mono *= p
            if tp is None or not exact:
                exact = False
                break
            terms.append(c * tp * mono)
        if exact:
            eqs = [sum(terms, Fraction(0))] + [
                sum((term * a[j] for term, a in zip(terms, poly.cfg.exponents)), Fraction(0)) for j in range(poly.cfg.n)
            ]
            return float(max(abs(e) for e in eqs))
    with mpmath.workdps(WITNESS_DPS):
        tt = _mp(t)
        terms = []
        for c, a, hh in zip(poly.coeffs, poly.cfg.exponents, h):
            v = _mp(c) * tt ** _mp(hh)
            for xi, ai in zip(x, a):
                v *= _mp(xi) ** _mp(ai)
            terms.append(v)
        scale = sum(abs(v) for v in terms) or mpmath.mpf(1)
        eqs = [sum(terms)] + [sum(v * _mp(a[j]) for v, a in zip(terms, poly.cfg.exponents)) for j in range(poly.cfg.n)]
        return float(max(abs(e) for e in eqs) / scale)


# -- codimension one ------------------------------------------------------------


def _t_from_power(R: Fraction, E: Fraction) -> tuple[Fraction | None, Fraction, Fraction]:
    """t = R^(1/E) for R > 0, exact when rational, otherwise a rational bracket."""
    exact = rational_power(R, 1 / E)
    if exact is not None:
        return exact, exact, exact
    iv = mpmath.iv
    saved = iv.dps
    iv.dps = WITNESS_DPS
    try:
        r = iv.mpf(R.numerator) / iv.mpf(R.denominator)
        t = iv.exp(iv.log(r) * iv.mpf(E.denominator) / iv.mpf(E.numerator))
        return (None, *_iv_bounds(t))
    finally:
        iv.dps = saved


def _exact_powers_ok(h: Sequence[Fraction]) -> bool:
    # exact witnesses raise t to h_i - h_0; keep those numbers small
    return max(h) - min(h) <= EXACT_HEIGHT_SPAN


def codim1_critical(poly: SignedPolynomial, face: FaceRecord | None = None) -> CriticalFaceResult:
    """Unique critical value of a codimension-one face when signs allow one."""
    idx = face.indices if face is not None else tuple(range(len(poly.cfg)))
    sub = poly.restrict(idx)
    cfg = sub.cfg
    if face is None:
        face = FaceRecord(idx, cfg.d, cfg.k, (Fraction(0),) * (cfg.n + 1), False, is_pyramid(cfg), False, False)
    if cfg.k != 1:
        raise PreconditionError(f"face {list(idx)} has codimension {cfg.k}, not 1")
    h = _heights(sub)
    if rank(lifted_matrix(cfg, h)) != rank(cfg.matrix) + 1:
        raise PreconditionError(f"heights are not compatible on face {list(idx)}")
    lam = primitive_integer(gale_dual(cfg).B.col(0))
    if any(v == 0 for v in lam):
        return CriticalFaceResult(face, PYRAMID_EXCLUDED, certificate="zero affine-relation entry (pyramid)")
    prods = [c * l for c, l in zip(sub.coeffs, lam)]
    if not (all(v > 0 for v in prods) or all(v < 0 for v in prods)):
        return CriticalFaceResult(face, NO_POSITIVE_SOLUTION, certificate="not sign compatible")
    E = sum((hh * l for hh, l in zip(h, lam)), Fraction(0))
    if E == 0:
        raise InvariantViolation("sum h_a lambda_a vanished under a compatible height")
    R = prod((Fraction(l) / c) ** l for l, c in zip(lam, sub.coeffs))
    t_exact, lo, hi = _t_from_power(R, E)
    # c_i t^{h_i} x^{a_i} = lambda_i y  =>  x^{a_i - a_0} = lambda_i c_0 t^{h_0} / (lambda_0 c_i t^{h_i})
    x = None
    if t_exact is not None and _exact_powers_ok(h):
        ratios = []
        for i in range(len(cfg)):
            tp = rational_power(t_exact, h[0] - h[i])
            if tp is None:
                ratios = None
                break
            ratios.append(Fraction(lam[i]) * sub.coeffs[0] / (lam[0] * sub.coeffs[i]) * tp)
        if ratios is not None:
            x = witness_exact(cfg, ratios)
    if x is None:
        with mpmath.workdps(WITNESS_DPS):
            tm = _t_mp(R, E) if t_exact is None else _mp(t_exact)
            ratios = [
                _mp(Fraction(lam[i]) * sub.coeffs[0] / (lam[0] * sub.coeffs[i])) * tm ** _mp(h[0] - h[i])
                for i in range(len(cfg))
            ]
            x = witness_float(cfg, ratios)
            t_for_res = tm
    else:
        t_for_res = t_exact
    res = system_residual(sub, x, t_for_res)
    if res > RESIDUAL_TOL:
        raise InvariantViolation(f"codim-1 witness residual {res:g} on face {list(idx)}")
    val = CriticalValue(t_exact, lo, hi, x, res)
    return CriticalFaceResult(
        face,
        CRITICAL_VALUES,
        [val],
        certificate="sign compatible circuit: exactly one critical value",
        details={"lambda": lam, "sum_h_lambda": E},
    )


def _t_mp(R: Fraction, E: Fraction):
    return mpmath.power(_mp(R), 1 / _mp(E))


# -- codimension two ------------------------------------------------------------


def _cone_rays(D: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """The two extreme rays of the closed planar sector {<D_i, y> >= 0}, ordered
    counterclockwise (det(r1, r2) > 0)."""
    rays = []
    for d in D:
        for r in ((-d[1], d[0]), (d[1], -d[0])):
            if all(dot(e, r) >= 0 for e in D):
                if not any(_det2(r, q) == 0 and dot(r, q) > 0 for q in rays):
                    rays.append(r)
    if len(rays) != 2:
        raise InvariantViolation(f"expected two extreme rays, found {len(rays)}")
    r1, r2 = rays
    if _det2(r1, r2) < 0:
        r1, r2 = r2, r1
    return r1, r2


def _linear_in_s(d, r1, r2) -> UnivariatePoly:
    # <d, (1-s) r1 + s r2>
    a = dot(d, r1)
    return UnivariatePoly([a, dot(d, r2) - a])


def _interval_t(lin: list[UnivariatePoly], u: Sequence[int], E: Fraction, lo: Fraction, hi: Fraction):
    """Interval enclosure of t = (prod l_i(s)^{u_i})^(1/E) for s in [lo, hi]."""
    iv = mpmath.iv
    saved = iv.dps
    iv.dps = WITNESS_DPS
    try:
        s = iv.mpf([_iv(lo).a, _iv(hi).b])
        val = iv.mpf(1)
        for l, ui in zip(lin, u):
            if ui:
                c0 = l.coeffs[0] if l.coeffs else Fraction(0)
                c1 = l.coeffs[1] if len(l.coeffs) > 1 else Fraction(0)
                val *= (_iv(c0) + _iv(c1) * s) ** int(ui)
        return iv.exp(iv.log(val) / _iv(E))
    finally:
        iv.dps = saved


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    v = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -v if sign else v


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an interval (mpf(x.a) would round to working precision)."""
    a, b = x._mpi_
    return _raw_to_fraction(a), _raw_to_fraction(b)


def sim_classes_of(B: RationalMatrix) -> list[list[int]]:
    groups: list[list[int]] = []
    for i in range(B.nrows):
        for g in groups:
            if _det2(B.row(g[0]), B.row(i)) == 0:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def signvar_certificate(D: Sequence[Sequence[Fraction]], b: Sequence[int]) -> tuple[int, int, list[list[int]]]:
    """signvar(b_{u_0}, ..., b_{u_s}) over colinearity classes ordered by det(D_u, D_v) > 0."""
    classes = sim_classes_of(RationalMatrix(D))

    def cmp(u, v):
        d = _det2(D[u[0]], D[v[0]])
        return -1 if d > 0 else (1 if d < 0 else 0)

    classes.sort(key=cmp_to_key(cmp))
    sums = [sum(b[i] for i in u) for u in classes]
    return sign_variations(sums), len(classes) - 1, classes


EXACT_DEGREE_LIMIT = 60
T_FINE = mpmath.mpf(10) ** -40
S_FINE = Fraction(1, 2**160)


class _GaleArc:
    """The Gale equation restricted to the arc y(s) = (1-s) r1 + s r2, 0 < s < 1.

    phi(s) = sum lambda_i log l_i(s) vanishes exactly where P(s) = N(s).
    """

    def __init__(self, lin: list[UnivariatePoly], lam: Sequence[int]):
        self.lin = lin
        self.lam = [int(x) for x in lam]
        self.c0 = [l.coeffs[0] if l.coeffs else Fraction(0) for l in lin]
        self.c1 = [l.coeffs[1] if len(l.coeffs) > 1 else Fraction(0) for l in lin]

    def phi_iv(self, lo: Fraction, hi: Fraction, dps: int = 90):
        iv = mpmath.iv
        saved = iv.dps
        iv.dps = dps
        try:
            s = iv.mpf([_iv(lo).a, _iv(hi).b])
            acc = iv.mpf(0)
            for c0, c1, e in zip(self.c0, self.c1, self.lam):
                if e:
                    acc += e * iv.log(_iv(c0) + _iv(c1) * s)
            return acc
        finally:
            iv.dps = saved

    def inside(self, lo: Fraction, hi: Fraction) -> bool:
        """Every form with nonzero exponent is positive on [lo, hi]."""
        return all(c0 + c1 * x > 0 for c0, c1, e in zip(self.c0, self.c1, self.lam) if e for x in (lo, hi))

    def sign_iv(self, lo: Fraction, hi: Fraction) -> int | None:
        v = self.phi_iv(lo, hi)
        if v.a > 0:
            return 1
        if v.b < 0:
            return -1
        return None

    def derivative_numerator(self) -> UnivariatePoly:
        q = UnivariatePoly()
        for i, e in enumerate(self.lam):
            if e and self.c1[i]:
                term = UnivariatePoly([e * self.c1[i]])
                for j, l in enumerate(self.lin):
                    if j != i:
                        term = term * l
                q = q + term
        return q

    def end_sign(self, at_one: bool) -> int | None:
        """Sign of phi near s = 0 (or s = 1)."""
        vals = [c0 + c1 if at_one else c0 for c0, c1 in zip(self.c0, self.c1)]
        vanishing = sum(e for v, e in zip(vals, self.lam) if v == 0)
        if vanishing:
            # log l_i -> -infinity on the vanishing rows
            return -1 if vanishing > 0 else 1
        # finite limit: log of prod l_i^lambda_i with the vanishing rows replaced by slopes
        pt = Fraction(1) if at_one else Fraction(0)
        iv = mpmath.iv
        saved = iv.dps
        iv.dps = 60
        try:
            acc = iv.mpf(0)
            for v, c1, e in zip(vals, self.c1, self.lam):
                if e:
                    acc += e * iv.log(_iv(abs(c1) if v == 0 else v))
        finally:
            iv.dps = saved
        if acc.a > 0:
            return 1
        if acc.b < 0:
            return -1
        return None

    def gale_poly(self) -> UnivariatePoly:
        P = UnivariatePoly([1])
        N = UnivariatePoly([1])
        for l, e in zip(self.lin, self.lam):
            if e > 0:
                P = P * l**e
            elif e < 0:
                N = N * l ** (-e)
        return P - N

    def degree(self) -> int:
        return max(sum(e for e in self.lam if e > 0), -sum(e for e in self.lam if e < 0))


def _exact_arc_roots(arc: _GaleArc):
    """Roots of P - N in (0,1) by exact isolation; (intervals, simple flags, polynomial)."""
    G = arc.gale_poly()
    if G.is_zero():
        return None
    roots = [iv for iv in isolate_real_roots(G, (0, 1)) if not (iv[0] == iv[1] and iv[0] in (0, 1))]
    sq = squarefree_part(G)
    g_mult = None
    if sq.degree < G.degree:
        from .exactla import poly_gcd

        g_mult = poly_gcd(G, G.derivative())
    out = []
    for iv in roots:
        r = rational_root_in(G, iv)
        if r is not None:
            iv = (r, r)
        if g_mult is None:
            simple = True
        elif r is not None:
            simple = g_mult(r) != 0
        else:
            simple = not isolate_real_roots(g_mult, iv)
        out.append((iv, simple, None if iv[0] == iv[1] else (1 if sq(iv[0]) > 0 else -1)))

    def sign(x: Fraction) -> int:
        v = sq(x)
        return (v > 0) - (v < 0)

    return out, sign, G


def _log_arc_roots(arc: _GaleArc):
    """Roots of phi in (0,1): phi is strictly monotone between roots of the
    numerator Q of phi', so signs at the ends and at Q's roots decide everything."""
    Q = arc.derivative_numerator()
    if Q.is_zero():
        sgn = arc.end_sign(False)
        if sgn is None:
            return None
        return [], (lambda x: sgn), None
    crit = [iv for iv in isolate_real_roots(Q, (0, 1)) if not (iv[0] == iv[1] and iv[0] in (0, 1))]
    sq = squarefree_part(Q)
    marks: list[tuple[Fraction, Fraction, int]] = []  # (lo, hi, sign of phi on [lo, hi])
    for lo, hi in crit:
        while not arc.inside(lo, hi):
            lo, hi = refine_root(sq, (lo, hi), (hi - lo) / 16)
        while True:
            sg = arc.sign_iv(lo, hi)
            if sg is not None:
                break
            if hi - lo < S_FINE:
                sg = 0  # phi and phi' vanish together: a multiple root
                break
            lo, hi = refine_root(sq, (lo, hi), (hi - lo) / 16) if lo != hi else (lo, hi)
            if lo == hi and arc.sign_iv(lo, hi) is None:
                sg = 0
                break
        marks.append((lo, hi, sg))
    left = arc.end_sign(False)
    right = arc.end_sign(True)
    if left is None or right is None:
        raise InvariantViolation("could not decide the sign of the Gale equation at an arc end")
    points = [(Fraction(0), Fraction(0), left)] + marks + [(Fraction(1), Fraction(1), right)]
    out = []
    for (a0, a1, sa), (b0, b1, sb) in zip(points, points[1:]):
        if sa * sb < 0:
            out.append(((a1, b0), True, sa))
    for lo, hi, sg in marks:
        if sg == 0:
            out.append(((lo, hi), False, None))
    out.sort(key=lambda r: r[0][0])

    def sign(x: Fraction) -> int | None:
        return arc.sign_iv(x, x)

    return out, sign, None


def _bisect(sign, a: Fraction, b: Fraction, width: Fraction, sa: int | None) -> tuple[Fraction, Fraction]:
    """Shrink a bracket whose left end has sign ``sa``; stops early on an exact
    or undecidable midpoint (and at once when ``sa`` is unknown)."""
    while sa is not None and b - a > width:
        m = (a + b) / 2
        sm = sign(m)
        if sm == 0:
            return m, m
        if sm is None:
            # phi(m) is within rounding of zero: bracket m tightly
            lo, hi = max(a, m - width), min(b, m + width)
            if sign(lo) == sa and sign(hi) == -sa:
                return lo, hi
            return a, b
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def codim2_critical(poly: SignedPolynomial, face: FaceRecord | None = None, method: str = "auto") -> CriticalFaceResult:
    """Certified list of critical values of a codimension-two face.

    ``method`` picks the root counter on the Gale arc: "exact" isolates the
    roots of P - N, "log" works with sum lambda_i log l_i(s) and is used by
    "auto" once P - N would exceed a few hundred in degree.
    """
    idx = face.indices if face is not None else tuple(range(len(poly.cfg)))
    sub = poly.restrict(idx)
    cfg = sub.cfg
    if face is None:
        face = FaceRecord(idx, cfg.d, cfg.k, (Fraction(0),) * (cfg.n + 1), False, is_pyramid(cfg), False, False)
    if cfg.k != 2:
        raise PreconditionError(f"face {list(idx)} has codimension {cfg.k}, not 2")
    h = _heights(sub)
    Ah = lifted_matrix(cfg, h)
    if rank(Ah) != rank(cfg.matrix) + 1:
        raise PreconditionError(f"heights are not compatible on face {list(idx)}")
    B = gale_dual(cfg).B
    if any(all(x == 0 for x in B.row(i)) for i in range(len(cfg))):
        return CriticalFaceResult(face, PYRAMID_EXCLUDED, certificate="zero Gale row (pyramid)")
    D = [tuple(x / c for x in B.row(i)) for i, c in enumerate(sub.coeffs)]
    lam = primitive_integer(kernel_basis(Ah).col(0))
    if strict_cone_feasible(D) is None:
        return CriticalFaceResult(face, NO_POSITIVE_SOLUTION, certificate="Gale rows not in an open half plane")
    sv, s, classes = signvar_certificate(D, lam)

    r1, r2 = _cone_rays(D)
    lin = [_linear_in_s(d, r1, r2) for d in D]
    arc = _GaleArc(lin, lam)
    if method == "auto":
        method = "exact" if arc.degree() <= EXACT_DEGREE_LIMIT else "log"
    if method not in ("exact", "log"):
        raise ValueError(f"unknown method {method!r}")
    found = _exact_arc_roots(arc) if method == "exact" else _log_arc_roots(arc)
    if found is None:
        raise PreconditionError(f"the Gale equation vanishes identically on face {list(idx)}")
    roots, sign, G = found

    # a direction u in ker A \ ker A^h to read off t
    u = None
    for col in B.columns():
        cand = primitive_integer(col)
        Eu = sum((hh * ui for hh, ui in zip(h, cand)), Fraction(0))
        if Eu != 0:
            u, E = cand, Eu
            break
    if u is None:
        raise InvariantViolation("no kernel direction with nonzero height pairing")

    values: list[CriticalValue] = []
    for iv, simple, left_sign in roots:
        val = _recover(sub, D, lin, u, E, iv, sign, r1, r2, left_sign)
        val.simple = simple
        values.append(val)
    distinct = _t_distinct(values)
    if not len(values) <= sv <= s:
        raise InvariantViolation(f"root count {len(values)}, signvar {sv}, s {s} out of order on face {list(idx)}")
    status = CRITICAL_VALUES if values else NO_POSITIVE_SOLUTION
    route = "exact root isolation" if method == "exact" else "monotone log-equation isolation"
    cert = f"{route}: {len(values)} root(s) <= signvar {sv} <= s {s}"
    if not distinct:
        cert += "; t values not separated (non-generic heights)"
    return CriticalFaceResult(
        face,
        status,
        values,
        certificate=cert,
        details={
            "lambda": lam,
            "signvar": sv,
            "s": s,
            "classes": classes,
            "rays": (r1, r2),
            "gale_poly": G,
            "method": method,
            "non_simple": [i for i, v in enumerate(values) if not v.simple],
            "t_distinct": distinct,
        },
    )


def _recover(sub, D, lin, u, E, iv, sign, r1, r2, left_sign=None) -> CriticalValue:
    h = _heights(sub)
    cfg = sub.cfg
    a, b = iv
    if a == b:
        y = tuple((1 - a) * p + a * q for p, q in zip(r1, r2))
        vals = [dot(d, y) for d in D]
        if any(v <= 0 for v in vals):
            raise InvariantViolation("recovered Gale point left the cone")
        R = prod(Fraction(v) ** ui for v, ui in zip(vals, u))
        t_exact, lo, hi = _t_from_power(R, E)
        x = None
        if t_exact is not None and _exact_powers_ok(h):
            ratios = []
            for i in range(len(cfg)):
                tp = rational_power(t_exact, h[0] - h[i])
                if tp is None:
                    ratios = None
                    break
                ratios.append(vals[i] / vals[0] * tp)
            if ratios is not None:
                x = witness_exact(cfg, ratios)
        with mpmath.workdps(WITNESS_DPS):
            tm = _mp(t_exact) if t_exact is not None else mpmath.power(_mp(R), 1 / _mp(E))
            if x is None:
                ratios = [_mp(vals[i] / vals[0]) * tm ** _mp(h[0] - h[i]) for i in range(len(cfg))]
                x = witness_float(cfg, ratios)
            exact_x = t_exact is not None and all(isinstance(v, Fraction) for v in x)
            res = system_residual(sub, x, t_exact if exact_x else tm)
        if res > RESIDUAL_TOL:
            raise InvariantViolation(f"codim-2 witness residual {res:g}")
        return CriticalValue(t_exact, lo, hi, x, res, gale_point=y)

    # shrink the s-bracket until t is pinned far below the reporting width
    a, b = _bisect(sign, a, b, S_FINE, left_sign)
    if a == b:
        return _recover(sub, D, lin, u, E, (a, a), sign, r1, r2)
    t_iv = _interval_t(lin, u, E, a, b)
    if float(t_iv.delta) > float(T_WIDTH):
        raise InvariantViolation("critical value enclosure wider than 1e-12")
    lo, hi = _iv_bounds(t_iv)
    with mpmath.workdps(WITNESS_DPS):
        sm = _mp((a + b) / 2)
        y = [(1 - sm) * _mp(p) + sm * _mp(q) for p, q in zip(r1, r2)]
        vals = [sum(_mp(di) * yi for di, yi in zip(d, y)) for d in D]
        if any(v <= 0 for v in vals):
            raise InvariantViolation("recovered Gale point left the cone")
        tm = mpmath.exp(sum(int(ui) * mpmath.log(v) for v, ui in zip(vals, u)) / _mp(E))
        ratios = [vals[i] / vals[0] * tm ** _mp(h[0] - h[i]) for i in range(len(cfg))]
        x = witness_float(cfg, ratios)
        res = system_residual(sub, x, tm)
    if res > RESIDUAL_TOL:
        raise InvariantViolation(f"codim-2 witness residual {res:g}")
    mid = (a + b) / 2
    y_mid = tuple((1 - mid) * p + mid * q for p, q in zip(r1, r2))
    if any(dot(d, y_mid) <= 0 for d in D):
        raise InvariantViolation("isolating interval leaves the cone")
    return CriticalValue(None, lo, hi, x, res, gale_point=y_mid)


def _t_distinct(values: list[CriticalValue]) -> bool:
    """True when all t values are certified pairwise distinct."""
    for v, w in combinations(values, 2):
        if v.exact is not None and w.exact is not None:
            if v.exact == w.exact:
                return False
        elif not (v.hi < w.lo or w.hi < v.lo):
            return False
    return True


# -- higher codimension ----------------------------------------------------------


def bound_bs_gale(n: int, k: int) -> EValue:
    """(e^2+3)/4 * 2^C(k-1,2) * (n+1)^(k-1)."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    return EValue.e2_plus_3(Fraction(2 ** comb(k - 1, 2) * (n + 1) ** (k - 1), 4))


# -- whole-polynomial analysis ------------------------------------------------------


def analyze_face(poly: SignedPolynomial, face: FaceRecord) -> CriticalFaceResult:
    if face.is_pyramid:
        return CriticalFaceResult(face, PYRAMID_EXCLUDED, certificate="pyramid: no positive critical point")
    hs = half_space_filter(poly, face)
    if not hs.feasible:
        cert = "cone of Gale rows is empty"
        if hs.monochromatic_coface is not None:
            local = hs.monochromatic_coface
            cert += f"; single-signed coface {[face.indices[i] for i in local]}"
        return CriticalFaceResult(face, SIGN_EXCLUDED, certificate=cert)
    if face.codim == 1:
        return codim1_critical(poly, face)
    if face.codim == 2:
        return codim2_critical(poly, face)
    bound = bound_bs_gale(face.dim, face.codim)
    return CriticalFaceResult(
        face, BOUND_ONLY, certificate=f"no solver above codimension 2; at most {bound.render()} values", details={"bound": bound}
    )


def analyze_critical(poly: SignedPolynomial, faces: list[FaceRecord] | None = None, select: Sequence[int] | None = None) -> list[CriticalFaceResult]:
    """Per-face critical analysis in face order; ``select`` restricts to one face."""
    h = _heights(poly)
    faces = enumerate_faces(poly.cfg) if faces is None else faces
    ok, bad = h_compatible(poly.cfg, h, faces)
    if not ok:
        raise PreconditionError(f"heights are not compatible: face {list(bad)} has rank(A_F^h) = rank(A_F)")
    if select is not None:
        sel = tuple(sorted(select))
        faces = [f for f in faces if f.indices == sel]
        if not faces:
            raise PreconditionError(f"{list(sel)} is not a face")
    return [analyze_face(poly, f) for f in faces]


# -- Jacobian determinant identity -----------------------------------------------


def jacobian_ratios(poly: SignedPolynomial, samples: Sequence[Sequence]) -> list[tuple[Fraction, Fraction]]:
    """(det J, G') at each sample y of the cone."""
    cfg = poly.cfg
    red = cfg.reduced()
    k = cfg.k
    if k < 2:
        raise PreconditionError("the identity needs codimension at least 2")
    h = _heights(poly)
    Ah = lifted_matrix(cfg, h)
    if rank(Ah) != rank(cfg.matrix) + 1:
        raise PreconditionError("heights are not compatible")
    B = gale_dual(cfg).B
    lam = RationalMatrix.from_columns([primitive_integer(c) for c in kernel_basis(Ah).columns()], len(cfg))
    D = [tuple(x / c for x in B.row(i)) for i, c in enumerate(poly.coeffs)]
    out = []
    for y in samples:
        y = tuple(to_fraction(v) for v in y)
        dv = [dot(d, y) for d in D]
        if any(v <= 0 for v in dv):
            raise PreconditionError(f"sample {[str(v) for v in y]} is outside the cone")
        rows = []
        for p in range(k - 1):
            phi = prod(v ** int(lam[a, p]) for a, v in enumerate(dv))
            rows.append([phi * sum((lam[a, p] * D[a][j] / dv[a] for a in range(len(cfg))), Fraction(0)) for j in range(k)])
        rows.append(list(y))
        detJ = determinant(rows)
        bv = [dot(B.row(a), y) for a in range(len(cfg))]
        pref = prod(v ** int(-1 + sum(lam[a, p] for p in range(k - 1))) for a, v in enumerate(bv))
        G = pref * cuspidal_value(red, y) * sum((v * v for v in y), Fraction(0)) * dot(h, bv)
        out.append((detJ, G))
    return out


def jacobian_identity_check(poly: SignedPolynomial, samples: Sequence[Sequence]) -> bool:
    """det J / G' takes one constant value at every sample where G' != 0."""
    pairs = jacobian_ratios(poly, samples)
    if all(G == 0 for _, G in pairs):
        raise PreconditionError("G' vanishes at every sample")
    ratios = {dj / G for dj, G in pairs if G != 0}
    zeros_ok = all(dj == 0 for dj, G in pairs if G == 0)
    return len(ratios) == 1 and zeros_ok and next(iter(ratios)) != 0
