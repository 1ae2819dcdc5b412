"""Command-line entry point: ``fewnomial <command> ...``.

Exit codes: 0 success, 2 parse error, 3 precondition refusal, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from .errors import InvariantViolation, ParseError, PreconditionError

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INVARIANT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FEWNOMIAL_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ParseError(f"FEWNOMIAL_SEED: {env!r} is not an integer") from None


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_fmt(x) for x in v) + ")"
    return str(v)


def _section(out, title: str) -> None:
    out.append(f"# {title}")


def _write(path, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise PreconditionError(f"cannot write {path}: {e.strerror}") from None


# -- commands -----------------------------------------------------------------


def cmd_analyze(args) -> list[str]:
    from .config import build_config, matroid_report
    from .document import load_document
    from .faces import count_nondefective_faces, enumerate_faces

    doc = load_document(args.document)
    cfg = build_config(doc.exponents)
    out = []
    _section(out, "configuration")
    out += [f"name={doc.name}", f"points={len(cfg)}", f"n={cfg.n}", f"d={cfg.d}", f"k={cfg.k}"]
    if cfg.k == 0:
        out.append("note=no discriminant, hypersurface never singular")
    rep = matroid_report(cfg)
    out += [
        f"pyramid={str(rep.is_pyramid).lower()}",
        f"basis={_fmt(rep.basis_indices)}",
        f"circuits={len(rep.circuits)}",
    ]
    out += [f"circuit={_fmt(c)}" for c in rep.circuits]
    if rep.sim_classes is not None:
        out.append("classes=" + " ".join(_fmt(c) for c in rep.sim_classes))
    if rep.min_circuit_dim is not None:
        out.append(f"min_circuit_dim={rep.min_circuit_dim}")
    faces = enumerate_faces(cfg)
    _section(out, "faces")
    out.append("indices,dim,codim,simplex,pyramid,circuit,defective")
    for f in faces:
        flags = (f.is_simplex, f.is_pyramid, f.is_circuit, f.is_defective)
        out.append(f"{' '.join(map(str, f.indices))},{f.dim},{f.codim}," + ",".join(str(x).lower() for x in flags))
    nd = count_nondefective_faces(cfg, faces)
    _section(out, "non-defective faces")
    out.append("codim,count,bound,respected")
    for ell in sorted(nd.counts):
        out.append(f"{ell},{nd.counts[ell]},{nd.bounds[ell]},{str(nd.respected[ell]).lower()}")
    out.append(f"total={nd.total} bound={nd.total_bound} respected={str(nd.total_respected).lower()}")
    return out


def _patchwork_report(cfg, heights, signs, args, out) -> None:
    from .patchwork import build_pl, cells_csv, count_components, lower_hull_triangulation, pl_svg

    tri = lower_hull_triangulation(cfg, heights)
    _section(out, "triangulation")
    out += [f"cells={len(tri.cells)}", f"used_vertices={len(tri.used_vertices)}", f"comb_flag={str(tri.comb_flag).lower()}"]
    pl = build_pl(cfg, heights, signs, tri)
    rep = count_components(pl)
    _section(out, "patchwork")
    out += [
        f"b0={rep.count}",
        f"k={rep.k}",
        f"bound={rep.bound}",
        f"bound_ok={str(rep.bound_ok).lower()}",
        f"chambers={rep.n_chambers}",
        f"dual_graph_tree={str(rep.dual_graph_is_tree).lower()}",
        f"chambers_have_vertex={str(rep.chambers_have_vertex).lower()}",
    ]
    if not rep.ok:
        raise InvariantViolation("patchwork checks failed: " + " ".join(out[-6:]))
    if getattr(args, "csv", None):
        _write(args.csv, cells_csv(pl))
        out.append(f"csv={args.csv}")
    if getattr(args, "svg", None):
        if cfg.d != 2:
            raise PreconditionError("--svg needs a two-dimensional configuration")
        _write(args.svg, pl_svg(pl))
        out.append(f"svg={args.svg}")
    if getattr(args, "png", None):
        from .plotting import plot_patchwork

        plot_patchwork(pl, args.png)
        out.append(f"png={args.png}")


def cmd_patchwork(args) -> list[str]:
    from .document import load_document
    from .patchwork import random_heights

    doc = load_document(args.document)
    poly = doc.polynomial()
    cfg = poly.cfg
    out = []
    if args.heights == "given":
        if doc.heights is None:
            raise PreconditionError("--heights given needs heights in the document")
        h = doc.heights
    else:
        h, _ = random_heights(cfg, random.Random(_seed(args)))
    out.append("heights=" + " ".join(str(x) for x in h))
    _patchwork_report(cfg, h, poly.signs, args, out)
    return out


def cmd_edgewise(args) -> list[str]:
    from .patchwork import edgewise_codim, edgewise_instance

    inst = edgewise_instance(args.n, args.p)
    out = [
        f"n={args.n}",
        f"p={args.p}",
        f"points={len(inst.cfg)}",
        f"lattice_points={inst.n_lattice}",
        f"barycenters={inst.n_simplices}",
        f"k={inst.cfg.k}",
        f"expected_k={edgewise_codim(args.n, args.p)}",
    ]
    _patchwork_report(inst.cfg, inst.heights, inst.signs, args, out)
    return out


def _parse_face(spec: str):
    if spec == "all":
        return None
    try:
        return tuple(sorted(int(x) for x in spec.replace(" ", "").split(",") if x))
    except ValueError:
        raise ParseError(f"--face: expected 'all' or comma-separated indices, got {spec!r}") from None


def cmd_critical(args) -> list[str]:
    from .critical import analyze_critical
    from .document import load_document

    doc = load_document(args.document)
    if doc.heights is None:
        raise PreconditionError("heights: required by the critical command")
    poly = doc.polynomial(need_coefficients=True)
    results = analyze_critical(poly, select=_parse_face(args.face))
    out = []
    _section(out, "critical")
    out.append("face,codim,status,count,t_values,certificate")
    total = 0
    exact_total = True
    for r in results:
        cnt = r.exact_count
        if cnt is None:
            exact_total = False
            cnt_s = f"<={r.details['bound'].render()}"
        else:
            total += cnt if not r.face.is_defective else 0
            cnt_s = str(cnt)
        ts = " ".join(v.render() for v in r.t_values)
        out.append(f"{' '.join(map(str, r.face.indices))},{r.face.codim},{r.status},{cnt_s},{ts},\"{r.certificate}\"")
    _section(out, "witnesses")
    for r in results:
        for v in r.t_values:
            x = " ".join(str(c) if isinstance(c, Fraction) else f"{float(c):.15g}" for c in v.witness)
            out.append(f"face={' '.join(map(str, r.face.indices))} t={v.render()} x={x} residual={v.residual:.3g} simple={str(v.simple).lower()}")
    out.append(f"T_nondefective={total}" + ("" if exact_total else " (plus bound-only faces)"))
    return out


def cmd_bound(args) -> list[str]:
    from .bounds import certified_b0_search, certified_b0_upper, codim2_config_bounds, prior_bounds

    out = []
    if args.document:
        from .document import load_document

        doc = load_document(args.document)
        poly = doc.polynomial(need_coefficients=True)
        if doc.heights is not None and not args.search:
            cert = certified_b0_upper(poly)
        else:
            cert = certified_b0_search(poly, random.Random(_seed(args)), tries=args.tries)
        _section(out, "certified upper bound")
        out += cert.to_text().rstrip("\n").split("\n")
        if poly.cfg.k == 2:
            by_class, by_circuit = codim2_config_bounds(poly.cfg)
            out += [f"codim2_class_bound={by_class}", f"codim2_circuit_bound={by_circuit}"]
        return out
    if args.dim is None or args.codim is None:
        raise ParseError("bound: give a document or both --dim and --codim")
    n = args.n if args.n is not None else args.dim
    rep = prior_bounds(n, args.dim, args.codim)
    if args.codim == 1:
        rep.add("codim1_circuit", 2, "one circuit: at most 2 components")
    _section(out, "bounds")
    out += rep.to_text().rstrip("\n").split("\n")
    if args.csv:
        _write(args.csv, rep.to_csv())
        out.append(f"csv={args.csv}")
    if args.png:
        from .plotting import plot_bounds

        plot_bounds(rep, args.png)
        out.append(f"png={args.png}")
    return out


def cmd_trace(args) -> list[str]:
    from .document import load_document
    from .trace import emit_svg, square_box, trace_csv, trace_curve

    doc = load_document(args.document)
    poly = doc.polynomial(need_coefficients=True)
    if args.grid < 32:
        raise PreconditionError(f"--grid must be at least 32, got {args.grid}")
    res = trace_curve(poly, square_box(args.box), args.grid)
    out = []
    _section(out, "trace")
    out += [
        f"components={res.component_count}",
        f"stabilized={str(res.stabilized).lower()}",
        f"grid={res.grid_size}",
        "history=" + " ".join(f"{g}:{c}" for g, c in res.history),
        f"box={args.box}",
        f"touches_boundary={str(res.touches_boundary).lower()}",
    ]
    if args.svg:
        emit_svg(res, args.svg)
        out.append(f"svg={args.svg}")
    if args.csv:
        _write(args.csv, trace_csv(res))
        out.append(f"csv={args.csv}")
    if args.png:
        from .plotting import plot_trace

        plot_trace(res, args.png)
        out.append(f"png={args.png}")
    return out


def cmd_lawrence(args) -> list[str]:
    from .faces import enumerate_faces, lawrence_config

    res = lawrence_config(args.m, args.k, _seed(args))
    cfg = res.config
    out = [f"m={args.m}", f"k={args.k}", f"seed={_seed(args)}", f"points={len(cfg)}", f"n={cfg.n}", f"codim={cfg.k}"]
    _section(out, "base")
    out += [" ".join(str(x) for x in p) for p in res.base.exponents]
    faces = {f.indices: f for f in enumerate_faces(cfg)}
    _section(out, "circuit faces")
    out.append("indices,is_face,non_defective")
    for I in res.circuit_faces:
        f = faces.get(I)
        out.append(f"{' '.join(map(str, I))},{str(f is not None).lower()},{str(f is not None and not f.is_defective).lower()}")
    out.append(f"circuit_faces={len(res.circuit_faces)}")
    return out


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fewnomial", description="Exact tools for positive real zero sets of sparse polynomials.")
    p.add_argument("--seed", type=int, default=None, help="seed for random choices (default: FEWNOMIAL_SEED or 0)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="dimension, circuits, faces and defectiveness")
    a.add_argument("document")
    a.set_defaults(func=cmd_analyze)

    pw = sub.add_parser("patchwork", help="combinatorial patchworking and its component count")
    pw.add_argument("document")
    pw.add_argument("--heights", choices=("auto", "given"), default="auto")
    pw.add_argument("--svg")
    pw.add_argument("--png")
    pw.add_argument("--csv")
    pw.set_defaults(func=cmd_patchwork)

    c = sub.add_parser("critical", help="critical values of the Viro family per face")
    c.add_argument("document")
    c.add_argument("--face", default="all", help="'all' or comma-separated point indices")
    c.set_defaults(func=cmd_critical)

    b = sub.add_parser("bound", help="bound table or certified upper bound for a document")
    b.add_argument("document", nargs="?")
    b.add_argument("--dim", type=int)
    b.add_argument("--codim", type=int)
    b.add_argument("--n", type=int, help="ambient dimension for the table (default: --dim)")
    b.add_argument("--search", action="store_true", help="sample heights even when the document has some")
    b.add_argument("--tries", type=int, default=8)
    b.add_argument("--csv")
    b.add_argument("--png")
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("trace", help="numerical component count of a bivariate curve")
    t.add_argument("document")
    t.add_argument("--box", type=int, default=8, help="half-width of the log box")
    t.add_argument("--grid", type=int, default=512)
    t.add_argument("--svg")
    t.add_argument("--png")
    t.add_argument("--csv")
    t.set_defaults(func=cmd_trace)

    lw = sub.add_parser("lawrence", help="Lawrence configuration over a random base")
    lw.add_argument("--m", type=int, required=True)
    lw.add_argument("--k", type=int, required=True)
    lw.set_defaults(func=cmd_lawrence)

    e = sub.add_parser("edgewise", help="edgewise-subdivision patchwork with p^n components")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--svg")
    e.add_argument("--png")
    e.add_argument("--csv")
    e.set_defaults(func=cmd_edgewise)
    return p


def run(argv=None) -> tuple[int, list[str], str]:
    """(exit code, report lines, error text) without touching sys streams."""
    try:
        args = build_parser().parse_args(argv)
        lines = args.func(args)
        return EXIT_OK, lines, ""
    except ParseError as e:
        return EXIT_PARSE, [], f"parse error: {e}"
    except InvariantViolation as e:
        return EXIT_INVARIANT, [], f"internal invariant violated: {e}"
    except PreconditionError as e:
        return EXIT_PRECONDITION, [], f"refused: {e}"


def main(argv=None) -> int:
    code, lines, err = run(argv)
    if lines:
        print("\n".join(lines))
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
