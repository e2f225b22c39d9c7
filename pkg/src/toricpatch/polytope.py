"""Exact convex geometry of conv(A) for lattice point sets in dimension <= 3."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

from .lattice import ExponentSet, Vector, integer_kernel_basis, rank, solve_rational


class DimensionDeficient(ValueError):
    """The affine span of the input has dimension below the ambient one."""


class NotInterior(ValueError):
    """A point is a vertex of, or lies outside, the polytope."""


@dataclass(frozen=True)
class Facet:
    normal: Vector
    offset: int

    def slack(self, x) -> Fraction:
        """offset - <normal, x>; nonnegative exactly when x satisfies the inequality."""
        return self.offset - sum(a * b for a, b in zip(self.normal, x))


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope {x : <normal, x> <= offset for all facets}.

    For n = 2 the vertices are counterclockwise starting at the
    lexicographic minimum; otherwise they are sorted lexicographically.
    """

    n: int
    vertices: tuple[Vector, ...]
    facets: tuple[Facet, ...]

    def contains(self, x, margin=0) -> bool:
        return all(f.slack(x) >= margin for f in self.facets)

    def bounding_box(self) -> tuple[Vector, Vector]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.n))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.n))
        return lo, hi


def _primitive_int(v) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)


def _cross2(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def affine_dimension(points) -> int:
    points = [tuple(p) for p in points]
    if len(points) == 1:
        return 0
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def _hull_1d(pts) -> LatticePolytope:
    lo, hi = min(pts), max(pts)
    facets = (Facet((-1,), -lo[0]), Facet((1,), hi[0]))
    return LatticePolytope(1, (lo, hi), facets)


def _hull_2d(pts) -> LatticePolytope:
    # Andrew's monotone chain; collinear points are discarded
    pts = sorted(set(pts))
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    verts = lower[:-1] + upper[:-1]
    facets = []
    for a, b in zip(verts, verts[1:] + verts[:1]):
        normal = _primitive_int((b[1] - a[1], a[0] - b[0]))
        facets.append(Facet(normal, normal[0] * a[0] + normal[1] * a[1]))
    return LatticePolytope(2, tuple(verts), tuple(facets))


def _hull_3d(pts) -> LatticePolytope:
    # every supporting plane through three affinely independent input points
    pts = sorted(set(pts))
    facets = {}
    for a, b, c in itertools.combinations(pts, 3):
        u = [b[i] - a[i] for i in range(3)]
        v = [c[i] - a[i] for i in range(3)]
        normal = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if not any(normal):
            continue
        normal = _primitive_int(normal)
        off = sum(x * y for x, y in zip(normal, a))
        vals = [sum(x * y for x, y in zip(normal, p)) for p in pts]
        if all(val <= off for val in vals):
            facets[normal] = off
        elif all(val >= off for val in vals):
            facets[tuple(-x for x in normal)] = -off
    facet_list = tuple(Facet(nm, off) for nm, off in sorted(facets.items()))
    verts = []
    for p in pts:
        tight = [f.normal for f in facet_list if f.slack(p) == 0]
        if len(tight) >= 3 and rank(tight) == 3:
            verts.append(p)
    return LatticePolytope(3, tuple(verts), facet_list)


def convex_hull(A: ExponentSet | list) -> LatticePolytope:
    """Convex hull with exact integer predicates (1 <= n <= 3)."""
    if not isinstance(A, ExponentSet):
        A = ExponentSet.of(A)
    if not 1 <= A.n <= 3:
        raise ValueError(f"convex_hull supports 1 <= n <= 3, got n = {A.n}")
    if affine_dimension(A.vectors) < A.n:
        raise DimensionDeficient(
            f"affine span of the points has dimension {affine_dimension(A.vectors)} < {A.n}")
    return {1: _hull_1d, 2: _hull_2d, 3: _hull_3d}[A.n](list(A.vectors))


def lattice_points(P: LatticePolytope) -> ExponentSet:
    """All integer points of P, scanning the bounding box in lexicographic order."""
    lo, hi = P.bounding_box()
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    pts = [p for p in itertools.product(*ranges) if P.contains(p)]
    return ExponentSet(P.n, tuple(pts))


def _facet_vertices_ordered(P: LatticePolytope, f: Facet):
    """Vertices on facet f in cyclic order inside the facet plane."""
    on = [v for v in P.vertices if f.slack(v) == 0]
    drop = max(range(3), key=lambda i: abs(f.normal[i]))
    keep = [i for i in range(3) if i != drop]
    flat = {v: (v[keep[0]], v[keep[1]]) for v in on}
    hull = _hull_2d(list(flat.values())).vertices
    back = {flat[v]: v for v in on}
    return [back[p] for p in hull]


def volume(P: LatticePolytope) -> Fraction:
    """Exact Euclidean volume of a full-dimensional polytope."""
    if P.n == 1:
        return Fraction(P.vertices[1][0] - P.vertices[0][0])
    if P.n == 2:
        vs = P.vertices
        twice = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(vs, vs[1:] + vs[:1]))
        return Fraction(abs(twice), 2)
    apex = P.vertices[0]
    total = 0
    for f in P.facets:
        if f.slack(apex) == 0:
            continue
        ring = _facet_vertices_ordered(P, f)
        a0 = ring[0]
        for b, c in zip(ring[1:], ring[2:]):
            u = [b[i] - a0[i] for i in range(3)]
            v = [c[i] - a0[i] for i in range(3)]
            w = [apex[i] - a0[i] for i in range(3)]
            det = (u[0] * (v[1] * w[2] - v[2] * w[1])
                   - u[1] * (v[0] * w[2] - v[2] * w[0])
                   + u[2] * (v[0] * w[1] - v[1] * w[0]))
            total += abs(det)
    return Fraction(total, 6)


def project_to_span(A: ExponentSet) -> ExponentSet:
    """Coordinates of A in a Z-basis of the saturated lattice of its affine span.

    The span lattice is the integer kernel of the integer kernel of the
    difference vectors, so lattice volume is measured in the ambient lattice
    Z^n restricted to the span.
    """
    base = A.vectors[0]
    diffs = [tuple(a - b for a, b in zip(v, base)) for v in A.vectors]
    d = affine_dimension(A.vectors)
    if d == A.n:
        return A
    if d == 0:
        raise DimensionDeficient("a single point has no positive-dimensional hull")
    # orthogonal complement of the span, then its orthogonal complement again
    nonzero = [v for v in diffs if any(v)]
    complement = integer_kernel_basis(nonzero)
    basis = integer_kernel_basis(complement)
    bt = [list(col) for col in zip(*basis)]  # n x d, columns = basis vectors
    coords = []
    for v in diffs:
        c = solve_rational(bt, v)
        assert c is not None and all(x.denominator == 1 for x in c)
        coords.append(tuple(int(x) for x in c))
    return ExponentSet(d, tuple(coords))


def implicit_degree(A: ExponentSet | list) -> int:
    """Normalized volume n! Vol(conv A), measured inside the affine span of A."""
    if not isinstance(A, ExponentSet):
        A = ExponentSet.of(A)
    B = project_to_span(A)
    vol = volume(convex_hull(B)) * factorial(B.n)
    assert vol.denominator == 1
    return int(vol)


def vertex_decomposition(m, P: LatticePolytope) -> tuple[int, dict[Vector, int]]:
    """Positive integers with d_m * m = sum d_v * v and d_m = sum d_v.

    Among all vertex subsets whose relative interior contains ``m`` the one
    with the smallest common denominator is chosen (ties: fewest vertices,
    then vertex order), so the answer is deterministic and small.
    """
    m = tuple(m)
    if m in P.vertices or not P.contains(m):
        raise NotInterior(f"{m} is a vertex of the polytope or lies outside it")
    best = None
    verts = list(P.vertices)
    for size in range(2, P.n + 2):
        for subset in itertools.combinations(verts, size):
            # barycentric coordinates: sum l_i v_i = m, sum l_i = 1
            M = [[1] * size] + [[v[i] for v in subset] for i in range(P.n)]
            lam = solve_rational(M, (1,) + m)
            if lam is None or any(x <= 0 for x in lam):
                continue
            if rank([[v[i] - subset[0][i] for i in range(P.n)] for v in subset[1:]]) != size - 1:
                continue
            den = 1
            for x in lam:
                den = den * x.denominator // gcd(den, x.denominator)
            key = (den, size)
            if best is None or key < best[0]:
                best = (key, den, {v: int(x * den) for v, x in zip(subset, lam)})
        if best is not None and best[0][0] == 2:
            break
    assert best is not None, "interior point must lie in some vertex simplex"
    return best[1], best[2]
