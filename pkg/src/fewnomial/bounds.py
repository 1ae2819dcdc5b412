"""Closed-form bounds on the number of positive components, and the
certified upper bound obtained by following f_t = sum c_a t^h_a x^a from
t near 0 to t near infinity."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .critical import BOUND_ONLY, CRITICAL_VALUES, analyze_critical, h_compatible
from .errors import InvariantViolation, PreconditionError
from .evalue import EValue
from .faces import enumerate_faces
from .patchwork import lower_hull_triangulation, random_heights, viro_extremal_b0
from .polynomial import SignedPolynomial


def _check_counts(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or v < 1:
            raise PreconditionError(f"{name} must be a positive integer, got {v!r}")


def general_bound(m: int, k: int) -> tuple[EValue, int]:
    """(full, simple) bound in terms of the basis dimension m and codimension k."""
    _check_counts(m=m, k=k)
    s = sum(comb(m + k + 2, k - j) * 2 ** comb(j, 2) * (m + 1) ** j for j in range(k))
    full = EValue.e2_plus_3(Fraction(s, 8 * (m + k + 2))) + (1 + k)
    simple = 8 * (m + 1) ** (k - 1) * 2 ** comb(k - 1, 2)
    if not full <= simple:
        raise InvariantViolation(f"full bound exceeds simple bound at m={m}, k={k}")
    return full, simple


def codim2_bounds(m: int, u_size: int, r: int) -> tuple[int, int]:
    """(by class, by circuit) for codimension two: floor((m-|u|)/2)+3 and floor((r-1)/2)+3."""
    _check_counts(m=m, u_size=u_size, r=r)
    if u_size > m + 3:
        raise PreconditionError(f"class size {u_size} exceeds m+3 = {m + 3}")
    return (m - u_size) // 2 + 3, (r - 1) // 2 + 3


def codim2_config_bounds(cfg) -> tuple[int, int]:
    """Both codimension-two bounds for a configuration, using its largest
    colinearity class and its smallest circuit dimension."""
    from .config import matroid_report

    if cfg.k != 2:
        raise PreconditionError(f"codimension is {cfg.k}, not 2")
    rep = matroid_report(cfg)
    m = len(rep.basis_indices) - cfg.k - 1
    best = max(len(c) for c in rep.sim_classes)
    by_class = (m - best) // 2 + 3
    by_circuit = (rep.min_circuit_dim - 1) // 2 + 3
    return by_class, by_circuit


@dataclass
class BoundReport:
    inputs: dict
    values: dict = field(default_factory=dict)  # name -> EValue
    formulas: dict = field(default_factory=dict)  # name -> text

    def add(self, name: str, value, formula: str) -> None:
        self.values[name] = value if isinstance(value, EValue) else EValue.rational(value)
        self.formulas[name] = formula

    def rows(self) -> list[tuple[str, str, str]]:
        return [(name, v.render(), self.formulas[name]) for name, v in self.values.items()]

    def to_csv(self) -> str:
        lines = ["name,value,exact,formula"]
        for name, v in self.values.items():
            lines.append(f"{name},{v.render()},{v.symbolic()},\"{self.formulas[name]}\"")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        head = "  ".join(f"{k}={v}" for k, v in self.inputs.items())
        rows = self.rows()
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        body = [f"{r[0]:<{w0}}  {r[1]:>{w1}}  {r[2]}" for r in rows]
        return "\n".join([head] + body) + "\n"


def prior_bounds(n: int, d: int, k: int) -> BoundReport:
    """Historical bounds next to the ones computed here, for ambient dimension n,
    affine dimension d and codimension k."""
    _check_counts(n=n, d=d, k=k)
    rep = BoundReport({"n": n, "d": d, "k": k})
    rep.add(
        "khovanskii",
        (2 * n * n - n + 1) ** (n + k) * (2 * n) ** (n - 1) * 2 ** comb(n + k, 2),
        "(2n^2-n+1)^(n+k) (2n)^(n-1) 2^C(n+k,2)",
    )
    rep.add(
        "bound_2008",
        EValue((Fraction(3, 4), Fraction(1, 4), Fraction(0))) * (2 ** comb(k + 1, 2) * 2**d * d ** (k + 1)),
        "(e+3)/4 2^C(k+1,2) 2^d d^(k+1)",
    )
    rep.add(
        "bound_2009",
        EValue.e2_plus_3(Fraction(2 ** comb(k, 2) * d**k) * Fraction(2) ** (d - 3)),
        "(e^2+3) 2^C(k,2) d^k 2^(d-3)",
    )
    rep.add("bound_2017", comb(d + k + 1, 2) + 2 ** comb(k - 1, 2) * (d + 2) ** (k - 1), "C(d+k+1,2) + 2^C(k-1,2) (d+2)^(k-1)")
    full, simple = general_bound(d, k)
    rep.add("general_full", full, "1+k+(e^2+3)/(8(m+k+2)) sum_j C(m+k+2,k-j) 2^C(j,2) (m+1)^j, m=d")
    rep.add("general_simple", simple, "8 (m+1)^(k-1) 2^C(k-1,2), m=d")
    if k == 2:
        rep.add("codim2_circuit", codim2_bounds(d, 1, 1)[0], "floor((d-1)/2)+3")
    return rep


# -- the certified pipeline ----------------------------------------------------


@dataclass
class FaceContribution:
    indices: tuple[int, ...]
    codim: int
    status: str
    count: int | None
    bound: EValue | None
    certificate: str


@dataclass
class B0Certificate:
    upper: int
    n0: int
    n_inf: int
    t_size: int
    heights: tuple[Fraction, ...]
    flag: str  # certified, generic-assumed or bound-only
    ledger: list[FaceContribution]

    def to_text(self) -> str:
        lines = [
            f"upper={self.upper} flag={self.flag} n0={self.n0} n_inf={self.n_inf} |T|<={self.t_size}",
            "heights=" + " ".join(str(h) for h in self.heights),
        ]
        for c in self.ledger:
            val = str(c.count) if c.count is not None else f"<= {c.bound.render()}"
            lines.append(f"face {' '.join(map(str, c.indices))} codim {c.codim}: {c.status} {val} ({c.certificate})")
        return "\n".join(lines) + "\n"


def _both_hulls_generic(cfg, h) -> bool:
    return lower_hull_triangulation(cfg, h).comb_flag and lower_hull_triangulation(cfg, [-x for x in h]).comb_flag


def sample_heights(poly: SignedPolynomial, rng: random.Random, attempts: int = 40) -> tuple[Fraction, ...]:
    """Random integer heights usable by the pipeline: both hulls pass the
    combinatorial check and every non-pyramidal face sees a nonconstant lift."""
    faces = enumerate_faces(poly.cfg)
    for _ in range(attempts):
        h, _ = random_heights(poly.cfg, rng)
        if _both_hulls_generic(poly.cfg, h) and h_compatible(poly.cfg, h, faces)[0]:
            return tuple(Fraction(x) for x in h)
    raise PreconditionError(f"no usable heights found in {attempts} draws")


def certified_b0_upper(poly: SignedPolynomial) -> B0Certificate:
    """ceil((|T| + n0 + n_inf) / 2) for the heights attached to ``poly``."""
    if poly.heights is None:
        raise PreconditionError("heights are required; use certified_b0_search to sample them")
    h = poly.heights
    faces = enumerate_faces(poly.cfg)
    ok, bad = h_compatible(poly.cfg, h, faces)
    if not ok:
        raise PreconditionError(f"heights are not compatible on face {list(bad)}; re-sample h")
    for large, label in ((False, "h"), (True, "-h")):
        hh = h if not large else tuple(-x for x in h)
        if not lower_hull_triangulation(poly.cfg, hh).comb_flag:
            raise PreconditionError(f"the lift by {label} is not a triangulation using every point; re-sample h")
    n0 = viro_extremal_b0(poly)
    n_inf = viro_extremal_b0(poly, large_t=True)
    ledger: list[FaceContribution] = []
    total = 0
    flag = "certified"
    for f, res in zip(faces, analyze_critical(poly, faces)):
        if f.is_defective or f.is_pyramid:
            continue
        if res.status == BOUND_ONLY:
            bound = res.details["bound"]
            total += bound.floor()
            flag = "bound-only"
            ledger.append(FaceContribution(f.indices, f.codim, res.status, None, bound, res.certificate))
            continue
        count = len(res.t_values)
        total += count
        if res.status == CRITICAL_VALUES:
            if any(not v.simple for v in res.t_values) or not res.details.get("t_distinct", True):
                if flag == "certified":
                    flag = "generic-assumed"
        ledger.append(FaceContribution(f.indices, f.codim, res.status, count, None, res.certificate))
    upper = -(-(total + n0 + n_inf) // 2)
    return B0Certificate(upper, n0, n_inf, total, h, flag, ledger)


def certified_b0_search(poly: SignedPolynomial, rng: random.Random, tries: int = 8) -> B0Certificate:
    """Best certificate over several sampled height vectors (plus the attached
    heights when present).  Any single certificate is a valid upper bound."""
    best = None
    candidates = [poly.heights] if poly.heights is not None else []
    candidates += [None] * tries
    for h in candidates:
        try:
            if h is None:
                h = sample_heights(poly, rng)
            cert = certified_b0_upper(poly.with_heights(h))
        except PreconditionError:
            continue
        rank_key = (cert.upper, cert.flag != "certified")
        if best is None or rank_key < (best.upper, best.flag != "certified"):
            best = cert
    if best is None:
        raise PreconditionError("no height vector produced a certificate")
    return best
