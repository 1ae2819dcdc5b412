import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from fewnomial.config import build_config
from fewnomial.critical import (
    BOUND_ONLY,
    CRITICAL_VALUES,
    NO_POSITIVE_SOLUTION,
    PYRAMID_EXCLUDED,
    analyze_critical,
    bound_bs_gale,
    codim1_critical,
    codim2_critical,
    h_compatible,
    half_space_filter,
    jacobian_identity_check,
    signvar_certificate,
    system_residual,
)
from fewnomial.errors import PreconditionError
from fewnomial.faces import enumerate_faces
from fewnomial.polynomial import SignedPolynomial, signed_polynomial

from helpers import (
    FNR_EXPONENTS,
    SHARP_COEFFS,
    SHARP_EXPONENTS,
    cone_samples,
    dual_rows_of,
    random_config_with_codim,
    random_signs,
)


def line_oracle(exps, coeffs, heights):
    """Positive t where f_t(x) = sum c t^h x^a has a positive double root.

    The x-discriminant is a polynomial in t whose positive real roots are
    isolated exactly by sympy; at each, a positive root of f' with f = 0 is
    looked for at 60 digits.
    """
    # dividing by x^min keeps the positive roots and removes the double root at 0
    exps = [int(a) - int(min(exps)) for a in exps]
    x, t = sympy.symbols("x t")
    f = sum(sympy.Rational(c) * t ** int(h) * x ** int(a) for a, c, h in zip(exps, coeffs, heights))
    disc = sympy.Poly(sympy.discriminant(f, x), t)
    found = []
    with mpmath.workdps(60):
        for r in sympy.real_roots(disc):
            t0 = mpmath.mpf(str(sympy.N(r, 70)))
            if t0 <= 0:
                continue
            cf = [sum(mpmath.mpf(sympy.Rational(c).p) / sympy.Rational(c).q * t0 ** int(h)
                      for a, c, h in zip(exps, coeffs, heights) if int(a) == d) for d in range(int(max(exps)) + 1)]
            deriv = [d * cf[d] for d in range(1, len(cf))]
            while deriv and deriv[-1] == 0:
                deriv.pop()
            scale = sum(abs(v) for v in cf)
            for xr in mpmath.polyroots(list(reversed(deriv)), maxsteps=400, extraprec=400) if len(deriv) > 1 else []:
                if abs(mpmath.im(xr)) < mpmath.mpf(10) ** -30 and mpmath.re(xr) > 0:
                    xv = mpmath.re(xr)
                    if abs(mpmath.polyval(list(reversed(cf)), xv)) < mpmath.mpf(10) ** -30 * scale * (1 + xv) ** len(cf):
                        found.append(float(t0))
                        break
    return sorted(set(round(v, 9) for v in found))


class TestCodimOne:
    def test_quadratic_discriminant(self):
        poly = signed_polynomial([(0,), (1,), (2,)], [1, -1, 1], heights=[0, 1, 0])
        res = codim1_critical(poly)
        assert res.status == CRITICAL_VALUES
        (v,) = res.t_values
        assert v.exact == 2 and v.witness == (Fraction(1),) and v.residual == 0

    def test_all_positive_has_no_solution(self):
        poly = signed_polynomial([(0,), (1,), (2,)], [1, 1, 1], heights=[0, 1, 0])
        assert codim1_critical(poly).status == NO_POSITIVE_SOLUTION

    def test_affine_lift_is_rejected(self):
        poly = signed_polynomial([(0,), (1,), (2,)], [1, -3, 1], heights=[0, 1, 2])
        with pytest.raises(PreconditionError, match="compatible"):
            codim1_critical(poly)

    def test_singular_at_t_one(self):
        # (1 - x)^2
        poly = signed_polynomial([(0,), (1,), (2,)], [1, -2, 1], heights=[0, 1, 0])
        (v,) = codim1_critical(poly).t_values
        assert v.exact == 1 and v.witness == (Fraction(1),)

    def test_other_heights(self):
        poly = signed_polynomial([(0,), (1,), (2,)], [1, -1, 1], heights=[0, 1, 1])
        (v,) = codim1_critical(poly).t_values
        assert v.exact == 4

    def test_irrational_value_is_enclosed(self):
        # t^2 = 4 * 3 / 1 with c = (1, -1, 3): discriminant gives t = sqrt(12)
        poly = signed_polynomial([(0,), (1,), (2,)], [1, -1, 3], heights=[0, 1, 0])
        (v,) = codim1_critical(poly).t_values
        assert v.exact is None and v.lo**2 < 12 < v.hi**2 and v.hi - v.lo <= Fraction(1, 10**12)
        assert v.residual < 1e-10

    def test_plane_circuit(self):
        # (1 - x)(1 - y) is singular at (1, 1)
        poly = signed_polynomial([(0, 0), (1, 0), (0, 1), (1, 1)], [1, -1, -1, 1], heights=[0, 0, 0, 1])
        (v,) = codim1_critical(poly).t_values
        assert v.exact == 1 and v.witness == (1, 1) and v.residual == 0
        poly = poly.with_heights([0, 0, 0, 2])
        (v,) = codim1_critical(poly).t_values
        assert v.exact == 1

    def test_random_lines_against_discriminant(self):
        rng = random.Random(21)
        done = 0
        while done < 25:
            pts = sorted(rng.sample(range(7), 3))
            c = [rng.choice((-1, 1)) * rng.randint(1, 5) for _ in pts]
            h = [rng.randint(0, 3) for _ in pts]
            poly = signed_polynomial([(a,) for a in pts], c, heights=h)
            if not h_compatible(poly.cfg, poly.heights)[0]:
                continue
            res = codim1_critical(poly)
            got = sorted(round(float(v.approx), 9) for v in res.t_values)
            assert got == line_oracle(pts, c, h)
            done += 1


class TestCodimTwo:
    def test_sharpness_curve_routes_agree(self):
        poly = signed_polynomial(SHARP_EXPONENTS, SHARP_COEFFS, heights=(0, 0, 1, 1, 0))
        a = codim2_critical(poly, method="exact")
        b = codim2_critical(poly, method="log")
        assert a.status == b.status == CRITICAL_VALUES
        assert len(a.t_values) == len(b.t_values) >= 1
        for u, v in zip(a.t_values, b.t_values):
            assert max(u.lo, v.lo) <= min(u.hi, v.hi)
            assert u.residual < 1e-10 and v.residual < 1e-10

    def test_random_lines_against_discriminant(self):
        rng = random.Random(33)
        done = 0
        while done < 20:
            pts = sorted(rng.sample(range(8), 4))
            c = [rng.choice((-1, 1)) * rng.randint(1, 4) for _ in pts]
            h = [rng.randint(0, 3) for _ in pts]
            poly = signed_polynomial([(a,) for a in pts], c, heights=h)
            if not h_compatible(poly.cfg, poly.heights)[0]:
                continue
            res = codim2_critical(poly)
            if res.status != CRITICAL_VALUES:
                assert line_oracle(pts, c, h) == []
            else:
                got = sorted(round(float(v.approx), 9) for v in res.t_values)
                assert got == line_oracle(pts, c, h)
            done += 1

    def test_certificate_bounds_the_count(self):
        rng = random.Random(8)
        done = 0
        while done < 30:
            cfg = random_config_with_codim(rng, 2, n=2, hi=3)
            coeffs = [s * rng.randint(1, 3) for s in random_signs(rng, len(cfg))]
            h = [rng.randint(0, 4) for _ in range(len(cfg))]
            poly = SignedPolynomial(cfg, tuple(map(Fraction, coeffs)), tuple(map(Fraction, h)))
            if not h_compatible(cfg, poly.heights)[0]:
                continue
            res = codim2_critical(poly)
            if res.status != CRITICAL_VALUES:
                continue
            sv, s = res.details["signvar"], res.details["s"]
            assert len(res.t_values) <= sv <= s
            done += 1

    def test_signvar_certificate_small(self):
        D = [(1, 0), (1, 1), (0, 1)]
        sv, s, classes = signvar_certificate(D, [1, -1, 1])
        assert s == 2 and sv == 2 and len(classes) == 3

    def test_wrong_codimension(self):
        poly = signed_polynomial([(0,), (1,), (2,)], [1, -1, 1], heights=[0, 1, 0])
        with pytest.raises(PreconditionError):
            codim2_critical(poly)


class TestFilters:
    def test_h_compatible_fnr(self):
        cfg = build_config(FNR_EXPONENTS)
        ok, bad = h_compatible(cfg, [0, 0, 0, 0, 1])
        assert not ok and bad == (0, 1, 2)
        assert h_compatible(cfg, [0, 1, 0, 0, 1])[0]

    def test_half_space_and_cofaces(self):
        poly = signed_polynomial(FNR_EXPONENTS, [1, 1, 1, 1, 1], heights=[0, 1, 0, 0, 1])
        res = half_space_filter(poly, (0, 1, 2, 3, 4))
        assert not res.feasible and res.monochromatic_coface is not None
        poly = signed_polynomial(FNR_EXPONENTS, [1, -1, 1, -1, 1], heights=[0, 1, 0, 0, 1])
        res = half_space_filter(poly, (0, 1, 2, 3, 4))
        assert res.feasible

    def test_analyze_statuses(self):
        poly = signed_polynomial(FNR_EXPONENTS, [1, -1, 1, -1, 1], heights=[0, 1, 0, 0, 1])
        faces = enumerate_faces(poly.cfg)
        results = analyze_critical(poly, faces)
        statuses = {f.indices: r.status for f, r in zip(faces, results)}
        assert statuses[(0,)] == PYRAMID_EXCLUDED
        assert statuses[(0, 1, 2)] == CRITICAL_VALUES

    def test_codim_three_is_bound_only(self):
        pts = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1)]
        poly = signed_polynomial(pts, [1, -1, 1, -1, 1, -1], heights=[0, 1, 0, 0, 1, 3])
        faces = enumerate_faces(poly.cfg)
        top = [f for f in faces if f.codim == 3][0]
        (res,) = analyze_critical(poly, [top])
        assert res.status == BOUND_ONLY and res.exact_count is None
        assert float(bound_bs_gale(2, 3)) > 0


def test_residual_is_zero_at_exact_witness():
    poly = signed_polynomial([(0,), (1,), (2,)], [1, -1, 1], heights=[0, 1, 0])
    assert system_residual(poly, (Fraction(1),), Fraction(2)) == 0
    assert system_residual(poly, (Fraction(1),), Fraction(3)) > 0


@pytest.mark.parametrize("k", [2, 3])
def test_jacobian_identity(k):
    rng = random.Random(40 + k)
    done = 0
    while done < 8:
        cfg = random_config_with_codim(rng, k, n=2, hi=3)
        coeffs = tuple(Fraction(s * rng.randint(1, 3)) for s in random_signs(rng, len(cfg)))
        h = tuple(Fraction(rng.randint(0, 4)) for _ in range(len(cfg)))
        if not h_compatible(cfg, h)[0]:
            continue
        poly = SignedPolynomial(cfg, coeffs, h)
        samples = cone_samples(dual_rows_of(cfg, coeffs), rng, 5)
        if len(samples) < 3:
            continue
        assert jacobian_identity_check(poly, samples)
        done += 1
