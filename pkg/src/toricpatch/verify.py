"""Reference fixtures and the checks behind ``toric verify``."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .ideal import binomials_from_kernel, quadratic_binomials
from .implicitize import ImplicitForm, implicitize, residual_max, sample_points
from .lattice import ExponentSet
from .models import load_fixture
from .moment import (MomentQuery, algebraic_moment, alpha_weighted, facet_distances,
                     interior_grid, moment_inverse, moment_map, _hull)
from .patch import ControlScheme, monomial_param
from .polytope import implicit_degree
from .realmesh import chart_sample, orthant_sample

# the twelve quadratic generators of the hexagon ideal, as unordered pairs of monomials
HEXAGON_QUADRICS = ["ab-cg", "ac-bd", "ad-ce", "ae-df", "af-ge", "ag-bf",
                    "aa-be", "aa-gd", "aa-cf", "be-cf", "be-gd", "cf-gd"]

# y^2(x-1) + 2yx + x^2 + x^3 homogenized with x = z1/z0, y = z2/z0  ([w, x, y] exponents)
CUBIC_TERMS = {(0, 1, 2): 1, (1, 0, 2): -1, (1, 1, 1): 2, (1, 2, 0): 1, (0, 3, 0): 1}

# (x^2 - y^2)^2 - 2x^2w^2 - 2y^2w^2 - 16z^2w^2 + w^4   ([w, x, y, z] exponents)
PILLOW_TERMS = {(0, 4, 0, 0): 1, (0, 2, 2, 0): -2, (0, 0, 4, 0): 1, (2, 2, 0, 0): -2,
                (2, 0, 2, 0): -2, (2, 0, 0, 2): -16, (4, 0, 0, 0): 1}

# known coefficients of the hexagonal sextic, spot-checked ([w, x, y, z] exponents)
SEXTIC_SPOTS = {(6, 0, 0, 0): 112, (5, 1, 0, 0): -240, (5, 0, 1, 0): -240, (5, 0, 0, 1): -240,
                (4, 1, 1, 0): 296, (4, 2, 0, 0): 216, (3, 1, 1, 1): -568, (0, 2, 2, 2): -50}
SEXTIC_TERMS = 72

DEGREES = {"hexagon": 6, "segment4": 4, "crosspoly": 4, "triangle3": 9}


def triangle(n: int) -> ExponentSet:
    return ExponentSet.of([(i, j) for i in range(n + 1) for j in range(n + 1 - i)])


def segment(n: int) -> ExponentSet:
    return ExponentSet.of(list(range(n + 1)))


def parse_quadric(text: str, labels: str) -> frozenset:
    """'ab-cg' -> {exponent vector of ab, exponent vector of cg}."""
    sides = []
    for side in text.split("-"):
        v = [0] * len(labels)
        for ch in side:
            v[labels.index(ch)] += 1
        sides.append(tuple(v))
    return frozenset(sides)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)


def check_hexagon_ideal() -> CheckResult:
    m = load_fixture("hexagon")
    labels = "".join(m.labels)
    got = {frozenset((b.plus, b.minus)) for b in quadratic_binomials(m.A)}
    want = {parse_quadric(q, labels) for q in HEXAGON_QUADRICS}
    ok = got == want and len(quadratic_binomials(m.A)) == 12
    return CheckResult("hexagon-ideal", ok, f"{len(got)} quadratic binomials, reference list matched: {got == want}")


def check_cusp() -> CheckResult:
    m = load_fixture("cusp")
    bins = binomials_from_kernel(m.A, 3)
    text = [b.format() for b in bins]
    return CheckResult("cusp", text == ["x0*x2^2 - x1^3"], f"binomials: {text}")


def check_degrees() -> CheckResult:
    got = {"hexagon": implicit_degree(load_fixture("hexagon").A),
           "segment4": implicit_degree(segment(4)),
           "crosspoly": implicit_degree(load_fixture("crosspoly").A),
           "triangle3": implicit_degree(triangle(3))}
    return CheckResult("degrees", got == DEGREES, ", ".join(f"{k}={v}" for k, v in got.items()), data=got)


def _fresh_residual(A, scheme, form, count=100) -> int:
    # offset far beyond the interpolation and check samples
    pts = sample_points(A, scheme, count, offset=2000)
    return residual_max(form, [p.integer_coords() for p in pts])


def _form_check(name, fixture, degree, terms, spots=None, term_count=None) -> CheckResult:
    m = load_fixture(fixture)
    forms = implicitize(m.A, m.scheme, degree)
    if len(forms) != 1:
        return CheckResult(name, False, f"nullspace dimension {len(forms)} at degree {degree}")
    form = forms[0]
    detail = [f"degree {degree}, {form.term_count} terms"]
    ok = True
    if terms is not None:
        ref = ImplicitForm.from_terms(m.scheme.k, degree, terms)
        ratio = form.ratio_to(ref)
        ok &= ratio is not None
        detail.append(f"scale to reference: {ratio}")
    if spots is not None:
        ratios = {Fraction(form.coefficient(mono), c) for mono, c in spots.items()}
        ok &= len(ratios) == 1
        detail.append(f"spot-check scales: {sorted(str(r) for r in ratios)}")
    if term_count is not None:
        ok &= form.term_count == term_count
    res = _fresh_residual(m.A, m.scheme, form)
    ok &= res == 0
    detail.append(f"fresh residual {res}")
    return CheckResult(name, ok, "; ".join(detail), data={"form": form})


def check_cubic() -> CheckResult:
    return _form_check("cubic-curve", "rnc3", 3, CUBIC_TERMS)


def check_pillow() -> CheckResult:
    return _form_check("pillow", "pillow", 4, PILLOW_TERMS)


def check_sextic() -> CheckResult:
    return _form_check("hexagon-sextic", "hexsurf", 6, None, SEXTIC_SPOTS, SEXTIC_TERMS)


def precision_stats(A: ExponentSet, grid: int = 11, tol: float = 1e-12) -> dict:
    E = np.array(A.vectors, dtype=float)
    worst_prec = worst_trip = worst_sum = 0.0
    cells = interior_grid(A, grid)
    for _, u in cells:
        r = moment_inverse(MomentQuery(A, u, tol=tol))
        worst_prec = max(worst_prec, float(np.abs(r.values @ E - u).max()))
        worst_trip = max(worst_trip, float(np.abs(alpha_weighted(A, [1] * len(A), r.t) - u).max()))
        worst_sum = max(worst_sum, abs(float(r.values.sum()) - 1.0))
    return {"points": len(cells), "precision": worst_prec, "round_trip": worst_trip, "sum": worst_sum}


def check_linear_precision() -> CheckResult:
    stats = {"hexagon": precision_stats(load_fixture("hexagon").A), "triangle2": precision_stats(triangle(2))}
    ok = all(s["precision"] <= 1e-10 and s["round_trip"] <= 1e-12 and s["sum"] <= 1e-14
             for s in stats.values())
    detail = "; ".join(f"{k}: {s['points']} pts, max residual {s['precision']:.1e}, "
                       f"round trip {s['round_trip']:.1e}" for k, s in stats.items())
    return CheckResult("linear-precision", ok, detail, data=stats)


def torus_samples(n: int, count: int = 1000, seed: int = 20061) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.exp(rng.uniform(-3, 3, size=(count, n))) * rng.choice([-1.0, 1.0], size=(count, n))


def check_moment_image() -> CheckResult:
    worst = np.inf
    for A in (load_fixture("hexagon").A, triangle(2)):
        P = _hull(A)
        for t in torus_samples(A.n):
            x = monomial_param(A, list(t))
            for f in (moment_map, algebraic_moment):
                worst = min(worst, facet_distances(P, f(A, x)).min())
    return CheckResult("moment-image", worst >= -1e-12, f"min facet slack {worst:.2e}")


def check_charts() -> CheckResult:
    m = load_fixture("pillow")
    cone = chart_sample(m.charts["cone"], 20)
    cyl = chart_sample(m.charts["cylinder"], 20)
    r1 = max(abs(x * y - z * z) for x, y, z in cone)
    r2 = max(abs(x * y - 1) for x, y, _ in cyl)
    return CheckResult("charts", r1 == 0 and r2 == 0 and len(cone) == len(cyl) == 400,
                       f"cone max|xy-z^2| = {r1}, cylinder max|xy-1| = {r2}")


def check_parabola() -> CheckResult:
    A = ExponentSet.of([0, 2])
    scheme = ControlScheme.identity(2)
    pos = orthant_sample(A, scheme, (1,), 50).vertices
    neg = orthant_sample(A, scheme, (-1,), 50).vertices
    gap = max(np.abs(np.sort(pos[:, 0]) - np.sort(neg[:, 0])).max(), 0.0)
    ok = bool(gap <= 1e-12 and pos[:, 0].min() > 0)
    return CheckResult("parabola-double-cover", ok, f"max gap between orthant images {gap:.1e}")


CHECKS: list[Callable[[], CheckResult]] = [
    check_hexagon_ideal, check_cusp, check_degrees, check_cubic, check_pillow,
    check_sextic, check_linear_precision, check_moment_image, check_charts, check_parabola,
]


def run_all(checks=None) -> list[CheckResult]:
    out = []
    for check in checks or CHECKS:
        start = time.perf_counter()
        try:
            res = check()
        except Exception as exc:  # a crashing fixture is a failing fixture
            res = CheckResult(check.__name__.removeprefix("check_"), False, f"error: {exc!r}")
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out
