"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) for the summary lines, or
through pytest, where each criterion is its own test and prints its line
(visible with ``-s``).
"""

from __future__ import annotations

import io
import json
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

from toricpatch.cli import main as toric
from toricpatch.ideal import binomials_from_kernel, is_toric_binomial, quadratic_binomials, residual_at
from toricpatch.implicitize import ImplicitForm, implicitize, residual_max, sample_points
from toricpatch.lattice import ExponentSet, integer_kernel_basis, lift, mat_vec, pos_neg_split
from toricpatch.models import FIXTURES, load_fixture
from toricpatch.moment import (MomentQuery, _hull, algebraic_moment, alpha_weighted,
                               facet_distances, interior_grid, moment_inverse, moment_map)
from toricpatch.patch import ControlScheme, monomial_param
from toricpatch.polytope import implicit_degree
from toricpatch.realmesh import chart_sample, export_obj, orthant_sample, parse_obj, real_part
from toricpatch.verify import (CUBIC_TERMS, HEXAGON_QUADRICS, PILLOW_TERMS, SEXTIC_SPOTS,
                               parse_quadric, segment, torus_samples, triangle)

SEXTIC_VALUES = (112, -240, 296, 216, -568, -50)


def _cli_json(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = toric([*argv, "--json"])
    return code, json.loads(buf.getvalue())


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def crit_hexagon_ideal():
    (code, doc), sec = _timed(lambda: _cli_json("ideal", "hexagon", "--quadratic"))
    labels = "".join(load_fixture("hexagon").labels)
    got = {frozenset((tuple(b["plus"]), tuple(b["minus"]))) for b in doc["binomials"]}
    want = {parse_quadric(q, labels) for q in HEXAGON_QUADRICS}
    ok = code == 0 and doc["count"] == 12 and got == want and sec < 1.0
    return ok, f"{doc['count']} binomials, list match {got == want}, {sec:.2f}s"


def crit_cusp():
    bins = binomials_from_kernel(ExponentSet.of([0, 2, 3]), 3)
    text = [b.format() for b in bins]
    return text == ["x0*x2^2 - x1^3"], f"{text}"


def crit_degrees():
    def run():
        return {"hexagon": implicit_degree(load_fixture("hexagon").A),
                "segment4": implicit_degree(segment(4)),
                "crosspoly": implicit_degree(load_fixture("crosspoly").A),
                "triangle3": implicit_degree(triangle(3))}
    got, sec = _timed(run)
    want = {"hexagon": 6, "segment4": 4, "crosspoly": 4, "triangle3": 9}
    return got == want and sec < 1.0, f"{got}, {sec:.3f}s"


def _fresh_zero(model, form, count=100):
    pts = sample_points(model.A, model.scheme, count, offset=3000)
    return residual_max(form, pts)


def _form_criterion(fixture, degree, terms, limit):
    m = load_fixture(fixture)
    forms, sec = _timed(lambda: implicitize(m.A, m.scheme, degree))
    if len(forms) != 1:
        return False, f"nullspace dimension {len(forms)}"
    ratio = forms[0].ratio_to(ImplicitForm.from_terms(m.scheme.k, degree, terms))
    res = _fresh_zero(m, forms[0])
    ok = ratio is not None and res == 0 and sec < limit
    return ok, f"1-dim, scale {ratio}, fresh residual {res}, {sec:.2f}s"


def crit_cubic():
    return _form_criterion("rnc3", 3, CUBIC_TERMS, 5.0)


def crit_pillow():
    return _form_criterion("pillow", 4, PILLOW_TERMS, 5.0)


def crit_sextic():
    m = load_fixture("hexsurf")
    forms, sec = _timed(lambda: implicitize(m.A, m.scheme, 6))
    if len(forms) != 1:
        return False, f"nullspace dimension {len(forms)}"
    f = forms[0]
    assert sorted(set(SEXTIC_SPOTS.values())) == sorted(set(SEXTIC_VALUES))
    scales = {Fraction(f.coefficient(mono), c) for mono, c in SEXTIC_SPOTS.items()}
    ok = f.term_count == 72 and len(scales) == 1 and 0 not in scales and sec < 60
    return ok, f"{f.term_count} terms, spot scales {sorted(map(str, scales))}, {sec:.2f}s"


def _precision(A):
    E = np.array(A.vectors, dtype=float)
    prec = trip = dsum = 0.0
    cells = interior_grid(A, 11)
    for _, u in cells:
        r = moment_inverse(MomentQuery(A, u, tol=1e-12))
        prec = max(prec, float(np.abs(r.values @ E - u).max()))
        trip = max(trip, float(np.abs(alpha_weighted(A, [1] * len(A), r.t) - u).max()))
        dsum = max(dsum, abs(float(r.values.sum()) - 1.0))
    return len(cells), prec, trip, dsum


def crit_linear_precision():
    (stats, sec) = _timed(lambda: [_precision(load_fixture("hexagon").A), _precision(triangle(2))])
    ok = all(p <= 1e-10 and t <= 1e-12 and s <= 1e-14 for _, p, t, s in stats) and sec < 5
    detail = "; ".join(f"{n} pts prec {p:.1e} trip {t:.1e} sum {s:.1e}" for n, p, t, s in stats)
    return ok, f"{detail}, {sec:.2f}s"


def crit_moment_image():
    worst = np.inf
    for A in (load_fixture("hexagon").A, triangle(2)):
        P = _hull(A)
        for t in torus_samples(A.n, 1000):
            x = monomial_param(A, list(t))
            for f in (moment_map, algebraic_moment):
                worst = min(worst, float(facet_distances(P, f(A, x)).min()))
    return worst >= -1e-12, f"min facet slack {worst:.2e} over 4000 images"


def crit_charts():
    m = load_fixture("pillow")
    cone, cyl = chart_sample(m.charts["cone"], 20), chart_sample(m.charts["cylinder"], 20)
    exact = all(isinstance(c, Fraction) for p in cone + cyl for c in p)
    r1 = {str(x * y - z * z) for x, y, z in cone}
    r2 = {str(x * y - 1) for x, y, _ in cyl}
    ok = exact and r1 == {"0"} and r2 == {"0"} and len(cone) == len(cyl) == 400
    return ok, f"{len(cone)}+{len(cyl)} rational samples, residual sets {r1} {r2}"


def crit_parabola():
    A, scheme = ExponentSet.of([0, 2]), ControlScheme.identity(2)
    pos = orthant_sample(A, scheme, (1,), 64).vertices
    neg = orthant_sample(A, scheme, (-1,), 64).vertices
    gap = float(np.abs(np.sort(pos[:, 0]) - np.sort(neg[:, 0])).max())
    return gap <= 1e-12, f"max gap {gap:.1e}"


def crit_properties():
    notes = []
    ok = True
    rng = np.random.default_rng(7)
    for name in FIXTURES:
        A = load_fixture(name).A
        L = lift(A)
        basis = integer_kernel_basis(L)
        ok &= all(not any(mat_vec(L, u)) for u in basis)
        for u in basis:
            plus, minus = pos_neg_split(u)
            ok &= tuple(a - b for a, b in zip(plus, minus)) == tuple(u)
            ok &= is_toric_binomial(A, plus, minus)
        bins = quadratic_binomials(A) or binomials_from_kernel(A, 3)
        for _ in range(25):
            t = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9))) * int(rng.choice([-1, 1]))
                 for _ in range(A.n)]
            ok &= all(residual_at(b, A, t) == 0 for b in bins)
        notes.append(f"{name}:{len(basis)}")
    pil = load_fixture("pillow")
    mesh = real_part(pil.A, pil.scheme, 20)
    back = parse_obj(export_obj(mesh))
    bit_exact = np.array_equal(back.vertices.view(np.uint64), mesh.vertices.view(np.uint64))
    ok &= bit_exact and np.array_equal(back.faces, mesh.faces)
    return bool(ok), f"kernel ranks {' '.join(notes)}; OBJ bit-exact {bit_exact}"


CRITERIA = [
    (1, "hexagon ideal", crit_hexagon_ideal),
    (2, "cuspidal cubic", crit_cusp),
    (3, "implicit degrees", crit_degrees),
    (4, "cubic curve implicitization", crit_cubic),
    (5, "double pillow quartic", crit_pillow),
    (6, "hexagon sextic", crit_sextic),
    (7, "linear precision", crit_linear_precision),
    (8, "moment image containment", crit_moment_image),
    (9, "chart identities", crit_charts),
    (10, "parabola double cover", crit_parabola),
    (11, "property suites", crit_properties),
]


def run_criterion(number, title, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not abort the sweep
        ok, detail = False, f"error {exc!r}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {title}: {detail}"
    return bool(ok), line


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn):
    ok, line = run_criterion(number, title, fn)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
