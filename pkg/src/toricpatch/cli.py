"""``toric`` command-line interface.

Exit codes: 0 success, 1 a check or computation failed, 2 usage or
validation error.  ``--json`` output is deterministic (sorted keys, no
timings) so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .ideal import binomials_from_kernel, default_bound, quadratic_binomials
from .implicitize import SamplingError, degree_search, implicitize
from .lattice import EnumerationTooLarge
from .models import Model, ModelError, resolve_model
from .moment import (MomentQuery, NoConvergence, OnBoundary, OutsidePolytope,
                     moment_inverse)
from .patch import BasepointHit, curve_basepoints, patch_point
from .polytope import (DimensionDeficient, affine_dimension, convex_hull,
                       implicit_degree, project_to_span, volume)
from .realmesh import (all_orthants, chart_sample, export_csv, export_obj, merge,
                       nonneg_patch_via_moment, orthant_sample)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
INT64 = 2 ** 63


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if -INT64 <= obj < INT64 else str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _emit(args, doc: dict, text: str):
    """Print JSON or text; ``--out`` redirects the same bytes to a file."""
    body = dumps(doc) if args.json else text.rstrip("\n") + "\n"
    if getattr(args, "out", None) and not getattr(args, "_out_used", False):
        Path(args.out).write_text(body, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(body)


def _parse_point(text: str, n: int, what: str) -> list[Fraction]:
    try:
        vals = [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: expected {n} comma-separated rationals, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what}: expected {n} coordinates, got {len(vals)}")
    return vals


def _need_scheme(model: Model, cmd: str):
    if model.scheme is None:
        raise UsageError(f"{cmd}: model '{model.name}' has no projection or control points")
    return model.scheme


# ---------------------------------------------------------------- commands

def cmd_ideal(args, model: Model) -> int:
    A = model.A
    if args.quadratic:
        bins, mode = quadratic_binomials(A), "quadratic"
    else:
        bound = args.bound if args.bound is not None else default_bound(A)
        if bound < 1:
            raise UsageError("--bound must be a positive integer")
        bins, mode = binomials_from_kernel(A, bound), f"bound {bound}"
    labels = model.labels
    style = "compact" if labels and all(len(s) == 1 for s in labels) else "plain"
    lines = [b.format(labels, style) for b in bins]
    doc = {"model": model.name, "mode": mode, "count": len(bins),
           "binomials": [{"text": t, "plus": b.plus, "minus": b.minus, "degree": b.degree}
                         for t, b in zip(lines, bins)]}
    _emit(args, doc, "\n".join(lines) if lines else "(no binomials)")
    return EXIT_OK


def cmd_degree(args, model: Model) -> int:
    A = model.A
    dim = affine_dimension(A.vectors)
    doc = {"model": model.name, "n": A.n, "dimension": dim, "points": len(A)}
    if dim == 0:
        doc["degree"] = 1
        text = ["degree 1 (a single point)"]
    else:
        B = project_to_span(A)
        P = convex_hull(B)
        vol = volume(P)
        doc.update(degree=implicit_degree(A), volume=vol, vertices=len(P.vertices))
        text = [f"degree {doc['degree']}",
                f"volume {vol} in a {dim}-dimensional span, {len(P.vertices)} vertices"]
    if A.n == 1 and model.scheme is not None:
        rep = curve_basepoints(A, model.scheme)
        doc["basepoints"] = {"gcd": rep.format(), "gcd_degree": rep.gcd_degree,
                             "image_degree_bound": rep.reduced_degree}
        text.append(f"basepoint gcd {rep.format()}" + (
            f" (image degree at most {rep.reduced_degree})" if rep.has_basepoints else " (none)"))
    _emit(args, doc, "\n".join(text))
    return EXIT_OK


def cmd_eval(args, model: Model) -> int:
    scheme = _need_scheme(model, "eval")
    t = _parse_point(args.at, model.A.n, "--at")
    try:
        z = patch_point(model.A, scheme, t)
    except BasepointHit as exc:
        raise UsageError(f"eval: {exc}") from None
    hom = z.normalized()
    affine = None if hom[0] == 0 else [c / hom[0] for c in hom[1:]]
    doc = {"model": model.name, "t": t, "homogeneous": list(hom), "affine": affine}
    text = "[" + " : ".join(str(c) for c in hom) + "]"
    if affine is not None:
        text += "\naffine (" + ", ".join(str(c) for c in affine) + ")"
    else:
        text += "\n(point at infinity)"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_invert(args, model: Model) -> int:
    u = _parse_point(args.at, model.A.n, "--at")
    q = MomentQuery(model.A, [float(c) for c in u], model.weights, tol=args.tol)
    r = moment_inverse(q)
    doc = {"model": model.name, "u": u, "t": r.t.tolist(), "values": r.values.tolist(),
           "iterations": r.iterations, "residual": r.residual}
    names = model.labels or [",".join(map(str, m)) for m in model.A]
    text = ["t = (" + ", ".join(f"{x:.15g}" for x in r.t) + ")"]
    text += [f"f[{nm}] = {v:.15g}" for nm, v in zip(names, r.values)]
    text.append(f"{r.iterations} Newton steps, residual {r.residual:.2e}")
    _emit(args, doc, "\n".join(text))
    return EXIT_OK


PRECISION_LIMIT = 1e-10


def cmd_precision_check(args, model: Model) -> int:
    from .moment import alpha_weighted, interior_grid

    A = model.A
    E = np.array(A.vectors, dtype=float)
    weights = model.weights or [1] * len(A)
    rows = []
    for idx, u in interior_grid(A, args.grid, args.tol):
        r = moment_inverse(MomentQuery(A, u, weights, tol=args.tol))
        rows.append({"index": list(idx), "u": list(u),
                     "precision": float(np.abs(r.values @ E - u).max()),
                     "round_trip": float(np.abs(alpha_weighted(A, weights, r.t) - u).max()),
                     "sum": abs(float(r.values.sum()) - 1.0)})
    worst = {k: max((row[k] for row in rows), default=0.0) for k in ("precision", "round_trip", "sum")}
    ok = bool(rows) and worst["precision"] <= PRECISION_LIMIT
    if args.csv:
        from .report import write_rows
        write_rows([{"u": ";".join(repr(c) for c in row["u"]), "precision": repr(row["precision"]),
                     "round_trip": repr(row["round_trip"]), "sum": repr(row["sum"])} for row in rows],
                   args.csv)
    if args.figure:
        from .report import plot_basis_functions, plot_precision_residuals
        if A.n == 2:
            plot_precision_residuals(A, args.figure, args.grid, weights, title=model.name)
        elif A.n == 1:
            plot_basis_functions(A, args.figure, weights, title=model.name)
    doc = {"model": model.name, "grid": args.grid, "points": len(rows), "pass": ok, "max": worst,
           "limit": PRECISION_LIMIT}
    text = (f"{'PASS' if ok else 'FAIL'} linear precision on {len(rows)} interior points: "
            f"max residual {worst['precision']:.2e}, round trip {worst['round_trip']:.2e}, "
            f"sum deviation {worst['sum']:.2e}")
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_implicitize(args, model: Model) -> int:
    scheme = _need_scheme(model, "implicitize")
    names = model.variable_names()
    if args.degree is not None:
        if args.degree < 1:
            raise UsageError("--degree must be at least 1")
        d, forms = args.degree, implicitize(model.A, scheme, args.degree)
    else:
        d, forms = degree_search(model.A, scheme)
    doc = {"model": model.name, "degree": d, "dimension": len(forms), "variables": names,
           "forms": [{"text": f.format(names), "terms": f.term_count,
                      "coefficients": [{"monomial": list(m), "c": c} for m, c in f.terms().items()]}
                     for f in forms]}
    if not forms:
        text = f"no vanishing form of degree {d}" if d else "no vanishing form up to the implicit degree"
    else:
        text = "\n".join(f"{f.format(names)} = 0" for f in forms)
        if len(forms) > 1:
            text = f"{len(forms)} independent forms of degree {d}\n" + text
    _emit(args, doc, text)
    return EXIT_OK


def _parse_eps(text: str, n: int) -> list[tuple[int, ...]]:
    if text == "all":
        return all_orthants(n)
    try:
        eps = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--eps: expected 'all' or {n} signs like 1,-1") from None
    if len(eps) != n or any(e not in (1, -1) for e in eps):
        raise UsageError(f"--eps: expected {n} entries each +1 or -1")
    return [eps]


def cmd_mesh(args, model: Model) -> int:
    scheme = _need_scheme(model, "mesh")
    A = model.A
    if A.n not in (1, 2):
        raise UsageError("mesh: only curves and surfaces (n = 1 or 2) can be meshed")
    if args.via_moment:
        mesh = nonneg_patch_via_moment(A, scheme, args.grid, model.weights)
    else:
        if args.grid < 2:
            raise UsageError("--grid must be at least 2")
        mesh = merge([orthant_sample(A, scheme, e, args.grid) for e in _parse_eps(args.eps, A.n)])
    if args.out:
        export_obj(mesh, args.out)
        args._out_used = True
    if args.csv:
        export_csv(mesh, args.csv)
    if args.figure:
        from .report import plot_mesh, plot_plane_curve
        if A.n == 1 and scheme.k == 2:
            plot_plane_curve(A, scheme, args.figure, title=model.name)
        else:
            plot_mesh(mesh, args.figure, title=model.name, control_points=scheme.control_points())
    doc = {"model": model.name, "vertices": len(mesh.vertices), "faces": len(mesh.faces),
           "dropped": mesh.dropped, "obj": args.out, "csv": args.csv}
    text = f"{len(mesh.vertices)} vertices, {len(mesh.faces)} faces, {mesh.dropped} samples dropped"
    if args.out:
        text += f"\nOBJ written to {args.out}"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_chart(args, model: Model) -> int:
    if not model.charts:
        raise UsageError(f"chart: model '{model.name}' defines no charts")
    names = sorted(model.charts) if args.name is None else [args.name]
    for nm in names:
        if nm not in model.charts:
            raise UsageError(f"chart: unknown chart {nm!r} (have {', '.join(sorted(model.charts))})")
    doc = {"model": model.name, "grid": args.grid, "charts": {}}
    text = []
    for nm in names:
        gens = model.charts[nm]
        pts = chart_sample(gens, args.grid)
        doc["charts"][nm] = {"generators": [list(g) for g in gens], "points": [list(p) for p in pts]}
        text.append(f"{nm}: {len(pts)} points from generators {[list(g) for g in gens]}")
        text += ["  (" + ", ".join(str(c) for c in p) + ")" for p in pts[: args.show]]
    _emit(args, doc, "\n".join(text))
    return EXIT_OK


def cmd_verify(args, model: Model | None) -> int:
    from .verify import CHECKS, run_all

    selected = CHECKS
    if args.only:
        wanted = set(args.only.split(","))
        selected = [c for c in CHECKS if c.__name__.removeprefix("check_").replace("_", "-") in wanted
                    or c.__name__.removeprefix("check_") in wanted]
        if not selected:
            raise UsageError(f"--only: no check matches {args.only!r}")
    results = run_all(selected)
    ok = all(r.passed for r in results)
    if args.report:
        _write_report(Path(args.report), results)
    doc = {"pass": ok, "checks": [{"name": r.name, "pass": r.passed, "detail": r.detail} for r in results]}
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'} {r.name:<22} {r.detail}  ({r.seconds:.2f}s)"
                     for r in results)
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_FAIL


def _write_report(outdir: Path, results):
    """Summary CSV plus figures of the fixtures."""
    from .lattice import ExponentSet
    from .models import load_fixture
    from .report import plot_basis_functions, plot_mesh, plot_plane_curve, plot_precision_residuals, write_rows
    from .realmesh import real_part

    outdir.mkdir(parents=True, exist_ok=True)
    write_rows([{"check": r.name, "pass": int(r.passed), "seconds": f"{r.seconds:.3f}", "detail": r.detail}
                for r in results], outdir / "summary.csv")
    rnc = load_fixture("rnc3")
    plot_plane_curve(rnc.A, rnc.scheme, outdir / "cubic_curve.png", title="rational cubic")
    hexs = load_fixture("hexsurf")
    mesh = nonneg_patch_via_moment(hexs.A, hexs.scheme, 24)
    plot_mesh(mesh, outdir / "hexagon_patch.png", title="hexagonal patch",
              control_points=hexs.scheme.control_points())
    export_obj(mesh, outdir / "hexagon_patch.obj")
    pil = load_fixture("pillow")
    sheets = real_part(pil.A, pil.scheme, 30)
    plot_mesh(sheets, outdir / "pillow.png", title="double pillow", max_extent=2.5)
    export_csv(sheets, outdir / "pillow.csv")
    plot_precision_residuals(load_fixture("hexagon").A, outdir / "hexagon_precision.png", title="hexagon")
    plot_basis_functions(ExponentSet.of(range(5)), outdir / "segment4_basis.png", title="segment of length 4")


COMMANDS = {
    "ideal": cmd_ideal, "degree": cmd_degree, "eval": cmd_eval, "invert": cmd_invert,
    "precision-check": cmd_precision_check, "implicitize": cmd_implicitize,
    "mesh": cmd_mesh, "chart": cmd_chart, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric", description="Exact toric-variety toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="<subcommand>")

    def add(name, help_, model=True):
        sp = sub.add_parser(name, help=help_)
        if model:
            sp.add_argument("model", help="model JSON file or shipped fixture name")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", metavar="PATH", help="write output to PATH")
        return sp

    sp = add("ideal", "binomials of the toric ideal")
    sp.add_argument("--bound", type=int, help="max-norm of kernel vectors (default: coordinate spread)")
    sp.add_argument("--quadratic", action="store_true", help="only coincident-midpoint quadrics")

    add("degree", "implicit degree from the normalized volume")

    sp = add("eval", "evaluate the patch at a torus point")
    sp.add_argument("--at", required=True, help="comma-separated rationals, e.g. 1/2,3")

    sp = add("invert", "invert the algebraic moment map")
    sp.add_argument("--at", required=True, help="point of conv(A), comma-separated")
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = add("precision-check", "linear precision on an interior grid")
    sp.add_argument("--grid", type=int, default=11)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--csv", metavar="PATH", help="per-point residual table")
    sp.add_argument("--figure", metavar="PNG", help="residual or basis-function plot")

    sp = add("implicitize", "implicit equation by exact interpolation")
    sp.add_argument("--degree", type=int, help="degree to try (default: search up to n!Vol)")

    sp = add("mesh", "triangle mesh of the real patch (--out writes OBJ)")
    sp.add_argument("--grid", type=int, default=30)
    sp.add_argument("--eps", default="all", help="orthant sign vector like 1,-1, or 'all'")
    sp.add_argument("--via-moment", action="store_true", help="nonnegative patch parametrized by conv(A)")
    sp.add_argument("--csv", metavar="PATH", help="x,y,z,eps,s,t point table")
    sp.add_argument("--figure", metavar="PNG")

    sp = add("chart", "sample an affine chart exactly")
    sp.add_argument("--name", help="chart name (default: all)")
    sp.add_argument("--grid", type=int, default=20)
    sp.add_argument("--show", type=int, default=5, help="points listed in text mode")

    sp = add("verify", "run the reference fixture suite", model=False)
    sp.add_argument("model", nargs="?", help="ignored; the suite uses the shipped fixtures")
    sp.add_argument("--only", help="comma-separated check names")
    sp.add_argument("--report", metavar="DIR", help="write summary.csv and figures to DIR")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._out_used = False
    try:
        model = None
        if args.command != "verify":
            model = resolve_model(args.model)
        return COMMANDS[args.command](args, model)
    except FileNotFoundError as exc:
        print(f"toric: no such model file: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, UsageError, OnBoundary, OutsidePolytope, DimensionDeficient,
            EnumerationTooLarge, BasepointHit) as exc:
        print(f"toric: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergence, SamplingError) as exc:
        print(f"toric: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"toric: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
