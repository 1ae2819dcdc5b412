"""Numerical tracing of V_{>0}(f) for bivariate f in log coordinates.

The curve {f(e^u, e^v) = 0} is sampled on a regular grid, cut into
marching-squares segments and grouped into components with union-find
over the grid edges it crosses.  Counts are heuristic; the grid is doubled
until two consecutive counts agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .exactla import to_fraction
from .polynomial import SignedPolynomial

MIN_GRID = 32
MAX_GRID = 4096
DEFAULT_RADIUS = 8


@dataclass
class TraceResult:
    component_count: int
    stabilized: bool
    box_log: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    grid_size: int
    polylines: list[tuple[int, list[tuple[float, float]]]]  # (component, points)
    history: list[tuple[int, int]] = field(default_factory=list)  # (grid, count)
    cell_centers: list[tuple[float, float, int]] = field(default_factory=list)
    touches_boundary: bool = False


def square_box(radius) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    r = to_fraction(radius)
    if r <= 0:
        raise PreconditionError("box radius must be positive")
    return ((-r, r), (-r, r))


def _normalized_terms(poly: SignedPolynomial):
    # shift exponents to the first one and scale coefficients by the largest
    # magnitude, in exact arithmetic, so x^a f and lambda f give identical floats
    pts = poly.cfg.exponents
    base = pts[0]
    big = max(abs(c) for c in poly.coeffs)
    exps = np.array([[float(a - b) for a, b in zip(p, base)] for p in pts])
    coeffs = np.array([float(c / big) for c in poly.coeffs])
    return exps, coeffs


def sample_grid(poly: SignedPolynomial, box, grid: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values of f(e^u, e^v) divided by its largest term, on a (grid+1)^2 lattice."""
    if poly.cfg.n != 2:
        raise PreconditionError(f"tracing needs n = 2 variables, got {poly.cfg.n}")
    if grid < MIN_GRID:
        raise PreconditionError(f"grid size must be at least {MIN_GRID}, got {grid}")
    (u0, u1), (v0, v1) = box
    if not (u0 < u1 and v0 < v1):
        raise PreconditionError("empty box")
    us = np.linspace(float(u0), float(u1), grid + 1)
    vs = np.linspace(float(v0), float(v1), grid + 1)
    return us, vs, _evaluate(poly, us[:, None], vs[None, :])


def _evaluate(poly: SignedPolynomial, U, V) -> np.ndarray:
    exps, coeffs = _normalized_terms(poly)
    E = exps[:, 0, None, None] * U[None] + exps[:, 1, None, None] * V[None]
    E -= E.max(axis=0)
    return np.einsum("i,ijk->jk", coeffs, np.exp(E))


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _cell_links(poly, us, vs, vals):
    """Marching-squares segments as pairs of crossed grid edges.

    Edge keys: ("h", i, j) joins (i, j)-(i+1, j); ("v", i, j) joins (i, j)-(i, j+1).
    """
    pos = vals > 0
    n = vals.shape[0] - 1
    corners = pos[:-1, :-1].astype(np.int8) + pos[1:, :-1] + pos[:-1, 1:] + pos[1:, 1:]
    cells = np.argwhere((corners > 0) & (corners < 4))
    links = []
    for i, j in cells:
        i, j = int(i), int(j)
        # counterclockwise corners and the edge leaving each one
        c = [pos[i, j], pos[i + 1, j], pos[i + 1, j + 1], pos[i, j + 1]]
        edges = [("h", i, j), ("v", i + 1, j), ("h", i, j + 1), ("v", i, j)]
        crossed = [edges[e] for e in range(4) if c[e] != c[(e + 1) % 4]]
        if len(crossed) == 2:
            links.append(((i, j), crossed[0], crossed[1]))
            continue
        # saddle: the centre sign says which diagonal pair is joined
        centre = _evaluate(poly, np.array([[(us[i] + us[i + 1]) / 2]]), np.array([[(vs[j] + vs[j + 1]) / 2]]))[0, 0] > 0
        if centre == c[0]:
            # corner 0's region reaches the centre: cut off corners 1 and 3
            links.append(((i, j), edges[0], edges[1]))
            links.append(((i, j), edges[2], edges[3]))
        else:
            links.append(((i, j), edges[3], edges[0]))
            links.append(((i, j), edges[1], edges[2]))
    return links, n


def _edge_point(key, us, vs, vals) -> tuple[float, float]:
    kind, i, j = key
    if kind == "h":
        a, b = vals[i, j], vals[i + 1, j]
        s = a / (a - b)
        return (us[i] + s * (us[i + 1] - us[i]), vs[j])
    a, b = vals[i, j], vals[i, j + 1]
    s = a / (a - b)
    return (us[i], vs[j] + s * (vs[j + 1] - vs[j]))


def _on_boundary(key, n: int) -> bool:
    kind, i, j = key
    if kind == "h":
        return j in (0, n)
    return i in (0, n)


def count_on_grid(poly: SignedPolynomial, box, grid: int, geometry: bool = False):
    us, vs, vals = sample_grid(poly, box, grid)
    links, n = _cell_links(poly, us, vs, vals)
    uf = _UnionFind()
    for _, a, b in links:
        uf.union(a, b)
    roots = sorted({uf.find(k) for k in uf.parent})
    ids = {r: i for i, r in enumerate(roots)}
    if not geometry:
        return len(roots), None
    touches = any(_on_boundary(k, n) for k in uf.parent)
    # chain segments into polylines
    adj: dict = {}
    for _, a, b in links:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen: set = set()
    polylines = []
    starts = sorted(k for k in adj if len(adj[k]) == 1) + sorted(adj)
    for s in starts:
        if s in seen:
            continue
        path = [s]
        seen.add(s)
        cur = s
        while True:
            nxt = [x for x in adj[cur] if x not in seen]
            if not nxt:
                if len(path) > 2 and s in adj[cur]:
                    path.append(s)
                break
            cur = nxt[0]
            seen.add(cur)
            path.append(cur)
        pts = [tuple(float(x) for x in _edge_point(k, us, vs, vals)) for k in path]
        polylines.append((ids[uf.find(s)], pts))
    centres = sorted(
        {
            (float((us[i] + us[i + 1]) / 2), float((vs[j] + vs[j + 1]) / 2), ids[uf.find(a)])
            for (i, j), a, _ in links
        }
    )
    polylines.sort(key=lambda p: (p[0], p[1][0]))
    return len(roots), (polylines, centres, touches)


def trace_curve(poly: SignedPolynomial, box_log=None, grid_size: int = 512, max_grid: int = MAX_GRID) -> TraceResult:
    """Component count of V_{>0}(f) in a log box, doubling the grid until stable."""
    box = square_box(DEFAULT_RADIUS) if box_log is None else tuple((to_fraction(a), to_fraction(b)) for a, b in box_log)
    if poly.cfg.n != 2:
        raise PreconditionError(f"tracing needs n = 2 variables, got {poly.cfg.n}")
    if grid_size < MIN_GRID:
        raise PreconditionError(f"grid size must be at least {MIN_GRID}, got {grid_size}")
    history = []
    grid = grid_size
    prev = None
    stabilized = False
    while True:
        count, _ = count_on_grid(poly, box, grid)
        history.append((grid, count))
        if prev is not None and count == prev:
            stabilized = True
            break
        if grid * 2 > max(max_grid, grid_size):
            break
        prev = count
        grid *= 2
    count, (polylines, centres, touches) = count_on_grid(poly, box, grid, geometry=True)
    return TraceResult(count, stabilized, box, grid, polylines, history, centres, touches)


def radius_stable(poly: SignedPolynomial, radii: Sequence = (6, 8, 10), grid_size: int = 512) -> tuple[bool, list[int]]:
    """Whether the stabilized count agrees across several square boxes."""
    counts = []
    for r in radii:
        res = trace_curve(poly, square_box(r), grid_size)
        if not res.stabilized:
            return False, counts + [res.component_count]
        counts.append(res.component_count)
    return len(set(counts)) == 1, counts


# -- output -------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def trace_svg(result: TraceResult, size: int = 480) -> str:
    """Standalone SVG with labeled log axes and one path per polyline, grouped by component."""
    (u0, u1), (v0, v1) = ((float(a), float(b)) for a, b in result.box_log)
    pad = 40

    def X(u):
        return pad + (u - u0) / (u1 - u0) * size

    def Y(v):
        return pad + (v1 - v) / (v1 - v0) * size

    W = size + 2 * pad
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">',
        f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="white" stroke="black"/>',
        f'<text x="{pad + size / 2:.1f}" y="{W - 8}" text-anchor="middle" font-size="13">log x</text>',
        f'<text x="12" y="{pad + size / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 12 {pad + size / 2:.1f})">log y</text>',
        f'<text x="{pad}" y="{pad + size + 16}" font-size="11">{u0:g}</text>',
        f'<text x="{pad + size}" y="{pad + size + 16}" text-anchor="end" font-size="11">{u1:g}</text>',
        f'<text x="{pad - 4}" y="{pad + size}" text-anchor="end" font-size="11">{v0:g}</text>',
        f'<text x="{pad - 4}" y="{pad + 10}" text-anchor="end" font-size="11">{v1:g}</text>',
    ]
    comps = sorted({c for c, _ in result.polylines})
    for c in comps:
        colour = _PALETTE[c % len(_PALETTE)]
        out.append(f'<g id="component-{c}" stroke="{colour}" fill="none" stroke-width="1.5">')
        for cc, pts in result.polylines:
            if cc != c:
                continue
            d = "M " + " L ".join(f"{X(u):.3f} {Y(v):.3f}" for u, v in pts)
            out.append(f'<path d="{d}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(result: TraceResult, path) -> None:
    with open(path, "w") as fh:
        fh.write(trace_svg(result))


def trace_csv(result: TraceResult) -> str:
    lines = ["u,v,component"]
    lines += [f"{u:.6f},{v:.6f},{c}" for u, v, c in result.cell_centers]
    return "\n".join(lines) + "\n"
