import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from fewnomial.config import build_config
from fewnomial.errors import PreconditionError
from fewnomial.exactla import sign_variations
from fewnomial.patchwork import (
    build_pl,
    cells_csv,
    count_components,
    edgewise_codim,
    edgewise_instance,
    lower_hull_triangulation,
    pl_svg,
    random_heights,
    simplex_volume,
    viro_extremal_b0,
)
from fewnomial.polynomial import signed_polynomial

from helpers import SHARP_COEFFS, SHARP_EXPONENTS, random_config, random_signs


def scipy_lower_cells(cfg, h):
    red = cfg.reduced()
    pts = np.array([[float(x) for x in p] + [float(v)] for p, v in zip(red.exponents, h)])
    hull = ConvexHull(pts)
    cells = set()
    for simplex, eq in zip(hull.simplices, hull.equations):
        if eq[-2] < -1e-9:
            cells.add(tuple(sorted(int(i) for i in simplex)))
    return cells


def test_square_diagonal():
    cfg = build_config([(0, 0), (1, 0), (0, 1), (1, 1)])
    tri = lower_hull_triangulation(cfg, [0, 0, 0, 1])
    assert tri.comb_flag and sorted(tri.cells) == [(0, 1, 2), (1, 2, 3)]
    flat = lower_hull_triangulation(cfg, [0, 0, 0, 0])
    assert not flat.comb_flag


def test_lower_hull_matches_scipy():
    rng = random.Random(5)
    checked = 0
    while checked < 60:
        cfg = random_config(rng, max_points=9, max_n=2)
        if cfg.d != cfg.n or cfg.d < 1 or cfg.k == 0:
            continue
        h, tri = random_heights(cfg, rng)
        if cfg.d == 1:
            continue
        assert set(tri.cells) == scipy_lower_cells(cfg, h)
        total = sum(simplex_volume(cfg, s) for s in tri.cells)
        hull = ConvexHull(np.array([[float(x) for x in p] for p in cfg.exponents]))
        assert abs(float(total) - hull.volume) < 1e-9
        checked += 1


def test_one_dimensional_count_is_sign_changes():
    rng = random.Random(9)
    for _ in range(100):
        N = rng.randint(2, 9)
        xs = sorted(rng.sample(range(20), N))
        cfg = build_config([(x,) for x in xs])
        h, tri = random_heights(cfg, rng)
        signs = random_signs(rng, N)
        rep = count_components(build_pl(cfg, h, signs, tri))
        # unused points lie above the lower hull and play no part
        assert rep.count == sign_variations(signs[i] for i in tri.used_vertices)
        assert rep.ok


def test_sharpness_extremal_counts():
    flat = signed_polynomial(SHARP_EXPONENTS, SHARP_COEFFS, heights=(0, 0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        viro_extremal_b0(flat)
    poly = flat.with_heights((0, 0, 3, 1, 0))
    # codimension 2 in the plane: at most k = 2 components at either end
    assert 0 <= viro_extremal_b0(poly) <= 2
    assert 0 <= viro_extremal_b0(poly, large_t=True) <= 2


@pytest.mark.parametrize("p", [1, 2, 3])
def test_edgewise_counts(p):
    inst = edgewise_instance(2, p)
    assert inst.n_lattice == comb(p + 2, 2) and inst.n_simplices == p * p
    assert inst.cfg.k == edgewise_codim(2, p)
    pl = build_pl(inst.cfg, inst.heights, inst.signs)
    assert len(pl.components) == p * p
    assert count_components(pl).dual_graph_is_tree


def test_edgewise_three_space():
    inst = edgewise_instance(3, 2)
    pl = build_pl(inst.cfg, inst.heights, inst.signs)
    assert len(pl.components) == 8
    assert len(inst.cfg) == comb(5, 3) + 8


def test_outputs():
    inst = edgewise_instance(2, 2)
    pl = build_pl(inst.cfg, inst.heights, inst.signs)
    csv = cells_csv(pl)
    assert csv.splitlines()[0] == "simplex,vertices,piece,component"
    assert len(csv.splitlines()) == 1 + len(pl.triangulation.cells)
    svg = pl_svg(pl)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    comps = {line.split('data-component="')[1].split('"')[0] for line in svg.splitlines() if "data-component" in line}
    assert comps == {"0", "1", "2", "3"}


def test_exact_heights_accepted():
    cfg = build_config([(0,), (1,), (2,)])
    tri = lower_hull_triangulation(cfg, [Fraction(0), Fraction(-1, 3), Fraction(1)])
    assert tri.comb_flag and sorted(tri.cells) == [(0, 1), (1, 2)]
