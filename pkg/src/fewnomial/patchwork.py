"""Regular triangulations from heights and combinatorial patchworking."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .config import PointConfig, build_config
from .errors import InvariantViolation, PreconditionError
from .exactla import RationalMatrix, determinant, dot, rank, solve, to_fraction
from .polynomial import SignedPolynomial

HEIGHT_RANGE = 1 << 20


@dataclass(frozen=True)
class Triangulation:
    cells: tuple[tuple[int, ...], ...]
    used_vertices: tuple[int, ...]
    comb_flag: bool
    dim: int

    @property
    def simplices(self) -> tuple[tuple[int, ...], ...]:
        return self.cells


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def lower_hull_triangulation(cfg: PointConfig, h: Sequence) -> Triangulation:
    """Project the lower facets of the lifted configuration.

    Every affinely independent (d+1)-subset defines an interpolating affine
    function; it spans a lower facet when no lifted point lies below it.
    ``comb_flag`` holds when every lower facet meets the lift exactly in
    d+1 points.
    """
    h = [to_fraction(x) for x in h]
    if len(h) != len(cfg):
        raise PreconditionError(f"{len(h)} heights for {len(cfg)} points")
    red = cfg.reduced()
    d = red.d
    N = len(red)
    lifted = RationalMatrix(list(red.matrix.rows) + [h])
    if d == 0 or rank(lifted) < d + 2:
        # flat lift: one cell, which is a simplex only when A is one
        simplex = N == d + 1
        return Triangulation((tuple(range(N)),), tuple(range(N)) if simplex else (), simplex, d)
    pts = red.exponents
    cells: set[tuple[int, ...]] = set()
    covered: list[frozenset] = []
    for S in combinations(range(N), d + 1):
        fs = frozenset(S)
        if any(fs <= c for c in covered):
            continue
        M = RationalMatrix([(Fraction(1),) + pts[i] for i in S])
        if determinant(M) == 0:
            continue
        g = solve(M, [h[i] for i in S])
        diffs = [h[j] - g[0] - dot(g[1:], pts[j]) for j in range(N)]
        if any(v < 0 for v in diffs):
            continue
        cell = frozenset(j for j in range(N) if diffs[j] == 0)
        covered.append(cell)
        cells.add(tuple(sorted(cell)))
    ordered = tuple(sorted(cells))
    flag = all(len(c) == d + 1 for c in ordered)
    used = tuple(sorted({i for c in ordered for i in c}))
    return Triangulation(ordered, used, flag, d)


def simplex_volume(cfg: PointConfig, simplex: Sequence[int]) -> Fraction:
    """Exact volume of a full-dimensional simplex in span coordinates."""
    red = cfg.reduced()
    d = red.d
    M = RationalMatrix([(Fraction(1),) + red.exponents[i] for i in simplex])
    return abs(determinant(M)) / factorial(d)


@dataclass
class PLComplex:
    cfg: PointConfig
    triangulation: Triangulation
    signs: dict
    pieces: tuple[bool, ...]
    piece_component: dict  # simplex index -> component id
    components: list[list[int]]
    chambers: list[list[tuple[int, int]]]  # each chamber: list of (simplex index, sign)
    chamber_of: dict
    dual_edges: list[tuple[int, int]]


def _facets_of(simplex: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [tuple(x for x in simplex if x != v) for v in simplex]


def build_pl(cfg: PointConfig, h: Sequence, signs: Sequence | dict, triangulation: Triangulation | None = None) -> PLComplex:
    tri = lower_hull_triangulation(cfg, h) if triangulation is None else triangulation
    if not tri.comb_flag:
        bad = next((c for c in tri.cells if len(c) != tri.dim + 1), tri.cells[0])
        raise PreconditionError(
            f"lower hull is not a triangulation with all lifted points as vertices "
            f"(offending cell {list(bad)}); perturb the heights"
        )
    sg = {i: (1 if s > 0 else -1) for i, s in (signs.items() if isinstance(signs, dict) else enumerate(signs))}
    simp = tri.cells
    pieces = tuple(len({sg[v] for v in s}) == 2 for s in simp)
    by_facet: dict[tuple[int, ...], list[int]] = {}
    for idx, s in enumerate(simp):
        for f in _facets_of(s):
            by_facet.setdefault(f, []).append(idx)
    for f, owners in by_facet.items():
        if len(owners) > 2:
            raise InvariantViolation(f"facet {f} shared by {len(owners)} simplices")

    pdsu = _DSU([i for i, p in enumerate(pieces) if p])
    cells = [(i, s) for i, simplex in enumerate(simp) for s in (1, -1) if any(sg[v] == s for v in simplex)]
    cdsu = _DSU(cells)
    for f, owners in by_facet.items():
        if len(owners) != 2:
            continue
        a, b = owners
        fsigns = {sg[v] for v in f}
        if len(fsigns) == 2 and pieces[a] and pieces[b]:
            pdsu.union(a, b)
        for s in fsigns:
            cdsu.union((a, s), (b, s))

    comp_groups = sorted(sorted(g) for g in pdsu.groups().values())
    piece_component = {i: cid for cid, g in enumerate(comp_groups) for i in g}
    ch_groups = sorted(sorted(g) for g in cdsu.groups().values())
    chamber_of = {cell: cid for cid, g in enumerate(ch_groups) for cell in g}
    edges = []
    for cid, g in enumerate(comp_groups):
        plus = {chamber_of[(i, 1)] for i in g}
        minus = {chamber_of[(i, -1)] for i in g}
        if len(plus) != 1 or len(minus) != 1:
            raise InvariantViolation(f"component {cid} touches more than two chambers")
        edges.append((plus.pop(), minus.pop()))
    return PLComplex(cfg, tri, sg, pieces, piece_component, comp_groups, ch_groups, chamber_of, edges)


@dataclass(frozen=True)
class ComponentReport:
    count: int
    k: int
    n: int
    bound: int
    bound_ok: bool
    chambers_have_vertex: bool
    dual_graph_is_tree: bool
    n_chambers: int

    @property
    def ok(self) -> bool:
        return self.bound_ok and self.chambers_have_vertex and self.dual_graph_is_tree


def _is_tree(n_nodes: int, edges: list[tuple[int, int]]) -> bool:
    if n_nodes == 0:
        return not edges
    if len(edges) != n_nodes - 1 or len(set(frozenset(e) for e in edges)) != len(edges):
        return False
    dsu = _DSU(range(n_nodes))
    for a, b in edges:
        if dsu.find(a) == dsu.find(b):
            return False
        dsu.union(a, b)
    return len(dsu.groups()) == 1


def count_components(pl: PLComplex) -> ComponentReport:
    count = len(pl.components)
    k, n = pl.cfg.k, pl.cfg.d
    bound = k if (n >= 2 and k >= 2) else k + 1
    has_vertex = all(any(pl.signs[v] == s for v in pl.triangulation.cells[i]) for g in pl.chambers for i, s in g)
    tree = _is_tree(len(pl.chambers), pl.dual_edges)
    return ComponentReport(count, k, n, bound, count <= bound, has_vertex, tree, len(pl.chambers))


def random_heights(cfg: PointConfig, rng: random.Random, attempts: int = 20) -> tuple[tuple[int, ...], Triangulation]:
    """Integer heights in [0, 2^20) whose lower hull passes the combinatorial check."""
    for _ in range(attempts):
        h = tuple(rng.randrange(HEIGHT_RANGE) for _ in range(len(cfg)))
        tri = lower_hull_triangulation(cfg, h)
        if tri.comb_flag:
            return h, tri
    raise PreconditionError(f"no generic heights found in {attempts} draws")


# -- edgewise family ----------------------------------------------------------


@dataclass(frozen=True)
class EdgewiseInstance:
    cfg: PointConfig
    heights: tuple[Fraction, ...]
    signs: tuple[int, ...]
    n_lattice: int
    n_simplices: int


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def edgewise_instance(n: int, p: int) -> EdgewiseInstance:
    """Lattice points of the p-fold edgewise subdivision (sign +) plus one
    barycenter per subdivision simplex (sign -), with certifying heights.

    The subdivision is the lower hull of the lattice points lifted by the
    quadratic form sum z_i^2 + sum_{i<j} (z_i - z_j)^2 in partial-sum
    coordinates z_i = b_i + ... + b_n.  Each barycenter sits slightly below
    its simplex after scaling the vertex heights.
    """
    if n < 1 or p < 1:
        raise PreconditionError("need n >= 1 and p >= 1")
    lattice = []
    heights = []
    for b in _compositions(p, n + 1):
        x = tuple(Fraction(v, p) for v in b[1:])
        z = [sum(b[i:]) for i in range(1, n + 1)]
        q = sum(v * v for v in z) + sum((z[i] - z[j]) ** 2 for i in range(n) for j in range(i + 1, n))
        lattice.append(x)
        heights.append(Fraction(q))
    base = build_config(lattice)
    tri = lower_hull_triangulation(base, heights)
    if not tri.comb_flag or len(tri.cells) != p**n:
        raise InvariantViolation(f"edgewise lift gave {len(tri.cells)} cells, expected {p ** n}")
    scale = 4 * (n + 1)
    pts = list(lattice)
    hts = [scale * v for v in heights]
    for s in tri.cells:
        pts.append(tuple(sum((lattice[i][j] for i in s), Fraction(0)) / (n + 1) for j in range(n)))
        hts.append(sum((hts[i] for i in s), Fraction(0)) / (n + 1) - 1)
    cfg = build_config(pts)
    signs = tuple([1] * len(lattice) + [-1] * len(tri.cells))
    return EdgewiseInstance(cfg, tuple(hts), signs, len(lattice), len(tri.cells))


def edgewise_codim(n: int, p: int) -> int:
    return comb(p + n, n) + p**n - n - 1


# -- extremal Viro count ----------------------------------------------------


def viro_extremal_b0(poly: SignedPolynomial, large_t: bool = False) -> int:
    """Components of the positive zero set of f_t for small t (or large t)."""
    if poly.heights is None:
        raise PreconditionError("heights are required for the patchworking count")
    h = poly.heights if not large_t else tuple(-x for x in poly.heights)
    tri = lower_hull_triangulation(poly.cfg, h)
    if not tri.comb_flag:
        raise PreconditionError("heights are not generic enough for combinatorial patchworking; perturb h")
    return count_components(build_pl(poly.cfg, h, poly.signs, tri)).count


# -- output -------------------------------------------------------------------


def cells_csv(pl: PLComplex) -> str:
    lines = ["simplex,vertices,piece,component"]
    for i, s in enumerate(pl.triangulation.cells):
        comp = pl.piece_component.get(i, "")
        lines.append(f"{i},{' '.join(map(str, s))},{int(pl.pieces[i])},{comp}")
    return "\n".join(lines) + "\n"


def pl_segments(pl: PLComplex) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...], int]]:
    """Midpoint segments of L in span coordinates (for d = 2), with component id."""
    red = pl.cfg.reduced()
    pts = red.exponents
    segs = []
    for i, s in enumerate(pl.triangulation.cells):
        if not pl.pieces[i]:
            continue
        mids = []
        for a, b in combinations(s, 2):
            if pl.signs[a] != pl.signs[b]:
                mids.append(tuple((x + y) / 2 for x, y in zip(pts[a], pts[b])))
        if len(mids) == 2:
            segs.append((mids[0], mids[1], pl.piece_component[i]))
    return segs


def pl_svg(pl: PLComplex, size: int = 480) -> str:
    """Standalone SVG of the triangulation, vertex signs and L (d = 2 only)."""
    red = pl.cfg.reduced()
    if red.d != 2:
        raise PreconditionError("SVG output is available for two-dimensional configurations")
    pts = [(float(p[0]), float(p[1])) for p in red.exponents]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    pad = 24

    def tr(x, y):
        return pad + (x - x0) / span * (size - 2 * pad), size - pad - (y - y0) / span * (size - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    out.append(f'<rect width="{size}" height="{size}" fill="white"/>')
    for s in pl.triangulation.cells:
        poly = " ".join("%.4f,%.4f" % tr(*pts[v]) for v in s)
        out.append(f'<polygon points="{poly}" fill="none" stroke="#999" stroke-width="1"/>')
    for a, b, cid in pl_segments(pl):
        (xa, ya), (xb, yb) = tr(float(a[0]), float(a[1])), tr(float(b[0]), float(b[1]))
        out.append(f'<line x1="{xa:.4f}" y1="{ya:.4f}" x2="{xb:.4f}" y2="{yb:.4f}" stroke="#c00" stroke-width="2" data-component="{cid}"/>')
    for v in pl.triangulation.used_vertices:
        x, y = tr(*pts[v])
        fill = "#000" if pl.signs[v] > 0 else "#fff"
        out.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="4" fill="{fill}" stroke="#000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
