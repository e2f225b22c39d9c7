"""Monomial parametrizations and their linear projections (toric patches).

Exact mode (ints / Fractions in, Fractions out) is used on verification
paths; float mode is used for sampling meshes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .lattice import ExponentSet


class BasepointHit(ValueError):
    """The projected vector is zero: the point lies on the center of projection."""


class AtInfinity(ValueError):
    """The projected point has z0 = 0 and no affine representative."""


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


def _as_number(x):
    if isinstance(x, str):
        return Fraction(x)
    if _is_exact(x):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Point of projective space; equality is equality up to a nonzero scalar."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(_as_number(c) for c in self.coords)
        if not coords or all(c == 0 for c in coords):
            raise ValueError("projective point cannot have all coordinates zero")
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)

    def normalized(self) -> tuple:
        """Coordinates divided by the first nonzero one."""
        lead = next(c for c in self.coords if c != 0)
        return tuple(c / lead for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return len(self) == len(other) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def affine(self) -> tuple:
        """(z1/z0, ..., zk/z0) in the principal affine chart."""
        z0 = self.coords[0]
        if z0 == 0:
            raise AtInfinity("point lies on the hyperplane z0 = 0")
        return tuple(c / z0 for c in self.coords[1:])

    def integer_coords(self) -> tuple[int, ...]:
        """Primitive integer representative (exact points only)."""
        from .lattice import primitive
        return primitive(self.coords)

    def __repr__(self):
        return "[" + ", ".join(str(c) for c in self.coords) + "]"


@dataclass(frozen=True)
class ControlScheme:
    """Vectors p_0, ..., p_l in Q^{1+k} defining x -> sum x_i p_i."""

    points: tuple[tuple, ...]

    def __post_init__(self):
        pts = tuple(tuple(_as_number(c) for c in p) for p in self.points)
        if not pts:
            raise ValueError("control scheme needs at least one vector")
        width = len(pts[0])
        if width == 0 or any(len(p) != width for p in pts):
            raise ValueError("all projection vectors must have the same positive length")
        if all(c == 0 for p in pts for c in p):
            raise ValueError("at least one projection vector must be nonzero")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_weighted(cls, weights: Sequence, control_points: Sequence[Sequence]) -> "ControlScheme":
        """p_i = w_i (1, b_i) from positive weights and affine control points."""
        if len(weights) != len(control_points):
            raise ValueError("need one weight per control point")
        pts = []
        for w, b in zip(weights, control_points):
            w = _as_number(w)
            if not w > 0:
                raise ValueError("weights must be positive")
            pts.append((w,) + tuple(w * _as_number(c) for c in b))
        return cls(tuple(pts))

    @classmethod
    def identity(cls, size: int) -> "ControlScheme":
        return cls(tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def forgetting(cls, size: int, keep: Sequence[int]) -> "ControlScheme":
        """Coordinate projection keeping only the listed indices, in order."""
        keep = list(keep)
        return cls(tuple(tuple(int(keep[j] == i) for j in range(len(keep)))
                         for i in range(size)))

    def __len__(self):
        return len(self.points)

    @property
    def k(self) -> int:
        """Dimension of the target projective space."""
        return len(self.points[0]) - 1

    def control_points(self) -> list[tuple]:
        """Affine images b_i = p_i[1:]/p_i[0]; None where p_i[0] = 0."""
        return [tuple(c / p[0] for c in p[1:]) if p[0] != 0 else None for p in self.points]

    def matrix(self) -> np.ndarray:
        """(1+k) x (1+l) float matrix whose columns are the p_i."""
        return np.array([[float(c) for c in p] for p in self.points]).T


def monomial_param(A: ExponentSet, t: Sequence) -> ProjectivePoint:
    """[t^m_0, ..., t^m_l]; exact for rational t, float otherwise."""
    t = [_as_number(x) for x in t]
    if len(t) != A.n:
        raise ValueError(f"torus point must have {A.n} coordinates, got {len(t)}")
    if any(x == 0 for x in t):
        raise ValueError("torus point has a zero coordinate")
    coords = []
    for m in A:
        val = Fraction(1) if all(_is_exact(x) for x in t) else 1.0
        for ti, e in zip(t, m):
            if e:
                val *= ti ** e
        coords.append(val)
    return ProjectivePoint(tuple(coords))


def project_vector(x: Sequence, scheme: ControlScheme) -> tuple:
    """sum x_i p_i, before projectivization (may be the zero vector)."""
    if len(x) != len(scheme):
        raise ValueError(f"point has {len(x)} coordinates but scheme has {len(scheme)} vectors")
    out = [0] * (scheme.k + 1)
    for xi, p in zip(x, scheme.points):
        if xi == 0:
            continue
        for r, c in enumerate(p):
            out[r] += xi * c
    return tuple(out)


def project(x: ProjectivePoint, scheme: ControlScheme) -> ProjectivePoint:
    z = project_vector(x.coords, scheme)
    if all(c == 0 for c in z):
        raise BasepointHit(f"{x!r} lies on the center of projection")
    return ProjectivePoint(z)


def patch_point(A: ExponentSet, scheme: ControlScheme, t: Sequence) -> ProjectivePoint:
    """Projective image of the torus point t."""
    return project(monomial_param(A, t), scheme)


def patch_eval(A: ExponentSet, scheme: ControlScheme, t: Sequence) -> tuple:
    """Affine image (z1/z0, ..., zk/z0) of the torus point t."""
    return patch_point(A, scheme, t).affine()


def patch_eval_many(A: ExponentSet, scheme: ControlScheme, T: np.ndarray) -> np.ndarray:
    """Vectorized float evaluation; returns homogeneous rows (N x (1+k)).

    Rows at basepoints come out as zero vectors; callers decide what to do.
    """
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if T.shape[1] != A.n:
        raise ValueError(f"parameter array must have {A.n} columns")
    E = np.array(A.vectors, dtype=float)            # (l+1) x n
    X = np.prod(T[:, None, :] ** E[None, :, :], axis=2)
    return X @ scheme.matrix().T


# univariate polynomials over Q, coefficient lists low -> high degree

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(a, b):
    a = _trim(a)
    b = _trim(b)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a = _trim(a)
    return a


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


@dataclass(frozen=True)
class BasepointReport:
    """gcd of the homogeneous components: s^s_power * h(s, t) with h from ``t_coefficients``."""

    t_coefficients: tuple[Fraction, ...]   # monic, low -> high degree in t (with s = 1)
    s_power: int
    degree: int                             # degree of every component
    gcd_degree: int

    @property
    def has_basepoints(self) -> bool:
        return self.gcd_degree > 0

    @property
    def reduced_degree(self) -> int:
        return self.degree - self.gcd_degree

    def format(self) -> str:
        """Human-readable homogeneous gcd, e.g. ``s*(t^2 + 1)``."""
        terms = []
        h = self.t_coefficients
        dh = len(h) - 1
        for i in range(dh, -1, -1):
            c = h[i]
            if c == 0:
                continue
            mono = "*".join(x for x in (_pow("s", dh - i), _pow("t", i)) if x)
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "1"
        if self.s_power:
            prefix = _pow("s", self.s_power)
            return prefix if body == "1" else f"{prefix}*({body})"
        return body


def _pow(v, e):
    return "" if e == 0 else (v if e == 1 else f"{v}^{e}")


def curve_basepoints(A: ExponentSet, scheme: ControlScheme) -> BasepointReport:
    """gcd of the 1+k binary forms parametrizing a rational curve.

    A nontrivial gcd means the projection has basepoints on the curve, and
    the image degree drops by the gcd degree.
    """
    if A.n != 1:
        raise ValueError("curve_basepoints needs a one-dimensional exponent set")
    if len(scheme) != len(A):
        raise ValueError("scheme length must equal the number of exponents")
    exps = [m[0] for m in A]
    lo = min(exps)
    degree = max(exps) - lo
    comps = []
    for r in range(scheme.k + 1):
        g = [Fraction(0)] * (degree + 1)
        for e, p in zip(exps, scheme.points):
            g[e - lo] += Fraction(p[r])
        comps.append(_trim(g))
    nonzero = [c for c in comps if c]
    if not nonzero:
        raise ValueError("every component of the parametrization vanishes")
    h = nonzero[0]
    for c in nonzero[1:]:
        h = _poly_gcd(h, c)
    h = _poly_gcd(h, h)  # monic
    s_power = min(degree - (len(c) - 1) for c in nonzero)
    gdeg = len(h) - 1 + s_power
    return BasepointReport(tuple(h), s_power, degree, gdeg)
