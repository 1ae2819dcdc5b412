"""PNG figures for the report commands (matplotlib, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bounds import BoundReport  # noqa: E402
from .errors import PreconditionError  # noqa: E402
from .patchwork import PLComplex, pl_segments  # noqa: E402
from .trace import TraceResult  # noqa: E402

COLOURS = ("tab:blue", "tab:red", "tab:green", "tab:purple", "tab:orange", "tab:brown", "tab:pink", "tab:cyan")


def _finish(fig, path) -> None:
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_trace(result: TraceResult, path) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    for comp, pts in result.polylines:
        us, vs = zip(*pts)
        ax.plot(us, vs, color=COLOURS[comp % len(COLOURS)], lw=1.2)
    (u0, u1), (v0, v1) = ((float(a), float(b)) for a, b in result.box_log)
    ax.set_xlim(u0, u1)
    ax.set_ylim(v0, v1)
    ax.set_aspect("equal")
    ax.set_xlabel("log x")
    ax.set_ylabel("log y")
    flag = "stable" if result.stabilized else "not stable"
    ax.set_title(f"{result.component_count} component(s), grid {result.grid_size}, {flag}")
    _finish(fig, path)


def plot_patchwork(pl: PLComplex, path) -> None:
    if pl.cfg.d != 2:
        raise PreconditionError("patchwork figures need a two-dimensional configuration")
    pts = [tuple(float(x) for x in p) for p in pl.cfg.reduced().exponents]
    fig, ax = plt.subplots(figsize=(5, 5))
    for cell in pl.triangulation.cells:
        loop = list(cell) + [cell[0]]
        ax.plot([pts[i][0] for i in loop], [pts[i][1] for i in loop], color="0.7", lw=0.8)
    for (a, b, comp) in pl_segments(pl):
        ax.plot([float(a[0]), float(b[0])], [float(a[1]), float(b[1])], color=COLOURS[comp % len(COLOURS)], lw=2)
    used = pl.triangulation.used_vertices
    for i in used:
        plus = pl.signs[i] > 0
        ax.plot(*pts[i], marker="o", ms=5, color="black", mfc="black" if plus else "white")
    ax.set_aspect("equal")
    ax.set_title(f"{len(pl.components)} component(s)")
    _finish(fig, path)


def plot_bounds(report: BoundReport, path) -> None:
    names = list(report.values)
    vals = [float(v) for v in report.values.values()]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.barh(names, vals, color="tab:blue")
    ax.set_xscale("log")
    ax.invert_yaxis()
    ax.set_xlabel("bound on positive components")
    ax.set_title("  ".join(f"{k}={v}" for k, v in report.inputs.items()))
    _finish(fig, path)
