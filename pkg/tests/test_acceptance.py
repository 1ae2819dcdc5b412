"""The ten acceptance criteria at their stated sizes and tolerances.

Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``;
the terminal summary prints one PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction
from math import comb

import pytest
import sympy

from fewnomial.bounds import certified_b0_search
from fewnomial.config import cofaces, gale_dual, is_coface
from fewnomial.critical import (
    CRITICAL_VALUES,
    codim1_critical,
    codim2_critical,
    h_compatible,
    jacobian_identity_check,
)
from fewnomial.errors import PreconditionError
from fewnomial.exactla import RationalMatrix, cauchy_binet_identity_check, rank
from fewnomial.faces import (
    count_nondefective_faces,
    enumerate_faces,
    horn_kapranov_sample,
    is_defective,
    lawrence_config,
)
from fewnomial.patchwork import build_pl, count_components, edgewise_instance, random_heights
from fewnomial.polynomial import SignedPolynomial, signed_polynomial
from fewnomial.trace import square_box, trace_curve

from helpers import (
    SHARP_COEFFS,
    SHARP_EXPONENTS,
    cone_samples,
    dual_rows_of,
    random_config,
    random_config_with_codim,
    random_signs,
)


@pytest.fixture(scope="module")
def sharp_trace():
    poly = signed_polynomial(SHARP_EXPONENTS, SHARP_COEFFS)
    start = time.perf_counter()
    res = trace_curve(poly, square_box(8), grid_size=512)
    return res, time.perf_counter() - start


@pytest.mark.criterion(1, "sharpness curve traces to exactly 3 stable components in under 30 s")
def test_sharpness_curve(sharp_trace):
    res, elapsed = sharp_trace
    assert res.grid_size >= 512
    assert res.component_count == 3
    assert res.stabilized
    assert elapsed < 30


@pytest.mark.criterion(2, "certified upper bound is exactly 3 and dominates the traced count")
def test_codim2_bound_consistency(sharp_trace):
    poly = signed_polynomial(SHARP_EXPONENTS, SHARP_COEFFS)
    cert = certified_b0_search(poly, random.Random(0))
    d = 2
    assert cert.flag == "certified"
    assert cert.upper == 3 == (d - 1) // 2 + 3
    assert cert.upper >= sharp_trace[0].component_count


@pytest.mark.criterion(3, "codimension-one critical value t = 2 with witness 1 and zero residual")
def test_codim1_exact():
    poly = signed_polynomial([(0,), (1,), (2,)], [1, -1, 1], heights=[0, 1, 0])
    # oracle: 1 - t x + x^2 has a double root when t^2 - 4 = 0, at x = t / 2
    t = sympy.Symbol("t", positive=True)
    (t_oracle,) = sympy.solve(sympy.discriminant(1 - t * sympy.Symbol("x") + sympy.Symbol("x") ** 2, sympy.Symbol("x")), t)
    res = codim1_critical(poly)
    assert res.status == CRITICAL_VALUES
    (v,) = res.t_values
    assert v.exact == Fraction(int(t_oracle))
    assert v.witness == (Fraction(int(t_oracle), 2),)
    assert v.residual == 0


@pytest.mark.criterion(4, "patchworked component bounds, tree dual graph and chamber vertices on 500 instances")
def test_patchwork_bound():
    rng = random.Random(4)
    done = 0
    while done < 500:
        cfg = random_config(rng, max_points=12, max_n=3)
        try:
            h, tri = random_heights(cfg, rng)
        except PreconditionError:
            continue
        rep = count_components(build_pl(cfg, h, random_signs(rng, len(cfg)), tri))
        n, k = cfg.d, cfg.k
        assert rep.count <= k + 1
        if n >= 2 and k >= 2:
            assert rep.count <= k
        assert rep.dual_graph_is_tree
        assert rep.chambers_have_vertex
        done += 1


@pytest.mark.criterion(5, "edgewise family has p^2 components and C(p+2,2)+p^2 points")
def test_edgewise_family():
    for p in (1, 2, 3, 4):
        inst = edgewise_instance(2, p)
        pl = build_pl(inst.cfg, inst.heights, inst.signs)
        assert len(pl.components) == p**2
        assert len(inst.cfg) == comb(p + 2, 2) + p**2


@pytest.mark.criterion(6, "Gale duals on 1000 configurations; cofaces equal face complements")
def test_gale_duality():
    rng = random.Random(6)
    compared = 0
    for _ in range(1000):
        cfg = random_config(rng, max_points=12, max_n=3)
        B = gale_dual(cfg).B
        assert (cfg.matrix @ B).is_zero()
        assert rank(B) == cfg.k == B.ncols
        if len(cfg) > 10 or cfg.k == 0:
            continue
        everything = tuple(range(len(cfg)))
        faces = enumerate_faces(cfg, flags=False)
        # complements of the proper faces, plus A itself for the empty face
        want = {tuple(i for i in everything if i not in f.indices) for f in faces if f.indices != everything}
        want.add(everything)
        got = set(cofaces(cfg))
        assert got == want
        # direct exact LP on a sample of subsets
        for _ in range(6):
            J = tuple(sorted(rng.sample(everything, rng.randint(1, len(cfg)))))
            assert is_coface(cfg, J) == (J in got)
        compared += 1
    assert compared > 300


def _kernel_orthogonal(rng, a, b, v):
    rows = []
    vv = sum(x * x for x in v)
    while len(rows) < a:
        row = [Fraction(rng.randint(-5, 5)) for _ in range(b)]
        proj = sum(r * x for r, x in zip(row, v)) / vv
        rows.append([r - proj * x for r, x in zip(row, v)])
    return RationalMatrix(rows)


@pytest.mark.criterion(7, "Cauchy-Binet identity on 1000 instances and Jacobian identity on 200")
def test_appendix_identities():
    rng = random.Random(7)
    for _ in range(1000):
        cfg = random_config(rng, max_points=9, max_n=3)
        A = cfg.matrix
        a, b = A.shape
        if a > b:
            continue
        v = [Fraction(rng.randint(-6, 6)) for _ in range(b)]
        if not any(v):
            v[0] = Fraction(1)
        C = _kernel_orthogonal(rng, a, b, v)
        assert cauchy_binet_identity_check(A, C, v)
    done = 0
    while done < 200:
        k = 2 if done % 2 == 0 else 3
        cfg = random_config_with_codim(rng, k, n=2, hi=3)
        coeffs = tuple(Fraction(s * rng.randint(1, 3)) for s in random_signs(rng, len(cfg)))
        h = tuple(Fraction(rng.randint(0, 4)) for _ in range(len(cfg)))
        if not h_compatible(cfg, h)[0]:
            continue
        samples = cone_samples(dual_rows_of(cfg, coeffs), rng, 4)
        if len(samples) < 2:
            continue
        assert jacobian_identity_check(SignedPolynomial(cfg, coeffs, h), samples)
        done += 1


@pytest.mark.criterion(8, "pyramids defective, circuits not, face counts within bounds on 500 configs")
def test_defectiveness():
    rng = random.Random(8)
    pyramids = circuits = 0
    for _ in range(500):
        cfg = random_config(rng, max_points=8, max_n=3)
        faces = enumerate_faces(cfg)
        for f in faces:
            if f.is_pyramid or f.is_circuit:
                # second route: inspect the expanded cuspidal form
                assert is_defective(cfg.sub(f.indices), method="expand") == f.is_defective
            if f.is_pyramid:
                assert f.is_defective
                pyramids += 1
            if f.is_circuit:
                assert not f.is_defective
                circuits += 1
        if cfg.k >= 1:
            nd = count_nondefective_faces(cfg, faces)
            assert all(nd.respected.values()) and nd.total_respected
    assert pyramids > 0 and circuits > 0


@pytest.mark.criterion(9, "every base circuit gives a non-defective Lawrence face")
def test_lawrence():
    for m, k in ((1, 1), (1, 2), (2, 1)):
        res = lawrence_config(m, k, seed=0)
        N = m + k + 1
        assert len(res.circuit_faces) == comb(m + k + 1, m + 2)
        faces = {f.indices: f for f in enumerate_faces(res.config)}
        for J in res.circuit_faces:
            I = [i for i in J if i < N]
            assert sorted(J) == sorted(I + [N + i for i in I])
            assert J in faces and not faces[J].is_defective


def _roots_in_open_unit_interval(G):
    # independent count: sympy's continued-fraction isolation over ZZ, endpoints removed
    x = sympy.Symbol("x")
    P = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(G.coeffs)], x)
    _, Z = P.clear_denoms(convert=True)
    Z = Z.sqf_part()
    return len(Z.intervals(inf=0, sup=1)) - (Z.eval(0) == 0) - (Z.eval(1) == 0)


@pytest.mark.criterion(10, "Horn-Kapranov codim-2 instances: root counts, signvar certificate, distinct t")
def test_codim2_certification():
    rng = random.Random(10)
    done = 0
    while done < 100:
        n = rng.choice((1, 2))
        cfg = random_config_with_codim(rng, 2, n=n, hi=4 if n == 2 else 8)
        B = gale_dual(cfg).B
        if any(not any(B.row(i)) for i in range(len(cfg))):
            continue
        y = [Fraction(rng.randint(-5, 5)) for _ in range(2)]
        if any(sum(b * w for b, w in zip(B.row(i), y)) == 0 for i in range(len(cfg))):
            continue
        c = horn_kapranov_sample(cfg, [1] * n, y)
        h = tuple(Fraction(rng.randint(0, 5)) for _ in range(len(cfg)))
        if not h_compatible(cfg, h)[0]:
            continue
        poly = SignedPolynomial(cfg, c, h)
        exact = codim2_critical(poly, method="exact")
        logr = codim2_critical(poly, method="log")
        assert exact.status == logr.status == CRITICAL_VALUES
        count = len(exact.t_values)
        assert _roots_in_open_unit_interval(exact.details["gale_poly"]) == count
        assert len(logr.t_values) == count
        for u, v in zip(exact.t_values, logr.t_values):
            assert max(u.lo, v.lo) <= min(u.hi, v.hi)
        assert count <= exact.details["signvar"] <= exact.details["s"]
        assert exact.details["t_distinct"]
        ts = sorted(exact.t_values, key=lambda v: v.lo)
        assert all(a.hi < b.lo for a, b in zip(ts, ts[1:]))
        # x = 1 is singular at t = 1 by construction
        assert any(v.lo <= 1 <= v.hi for v in exact.t_values)
        done += 1


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
