"""Moment map, algebraic moment map, and inversion of the latter on int(conv A).

The (weighted) algebraic moment map on the positive orthant,

    alpha_w(t) = sum_m w_m t^m m / sum_m w_m t^m,

is the gradient in theta = log t of the strictly convex log-partition
function  log sum_m w_m exp(<m, theta>).  Inverting it therefore means
minimizing  log sum_m w_m exp(<m, theta>) - <u, theta>,  which we do by
damped Newton iteration.  The coordinates f_m(u) = w_m t^m / sum w t^m
of the inverse are the linear-precision basis functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .lattice import ExponentSet
from .patch import BasepointHit, ProjectivePoint, _as_number
from .polytope import LatticePolytope, convex_hull

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100


class OnBoundary(ValueError):
    """Target point lies within tol of the boundary of conv(A)."""


class OutsidePolytope(ValueError):
    """Target point violates a facet inequality of conv(A)."""


class NoConvergence(RuntimeError):
    def __init__(self, message, residual, t):
        super().__init__(message)
        self.residual = residual
        self.t = t


def _coords(x) -> tuple:
    if isinstance(x, ProjectivePoint):
        return x.coords
    return tuple(_as_number(c) for c in x)


def _weighted_average(A: ExponentSet, weights) -> tuple:
    total = sum(weights)
    if total == 0:
        raise ValueError("point has all coordinates zero")
    return tuple(sum(w * m[i] for w, m in zip(weights, A)) / total for i in range(A.n))


def moment_map(A: ExponentSet, x) -> tuple:
    """sum |x_m|^2 m / sum |x_m|^2 (exact for rational x)."""
    return _weighted_average(A, [abs(c) ** 2 for c in _coords(x)])


def algebraic_moment(A: ExponentSet, x) -> tuple:
    """sum |x_m| m / sum |x_m| (exact for rational x)."""
    return _weighted_average(A, [abs(c) for c in _coords(x)])


def lifted_projection(A: ExponentSet, x) -> ProjectivePoint:
    """[sum x_i, sum x_i m_i]: the projection defined by the lifted points (1, m_i)."""
    xs = _coords(x)
    if len(xs) != len(A):
        raise ValueError(f"point must have {len(A)} coordinates")
    z = (sum(xs),) + tuple(sum(c * m[i] for c, m in zip(xs, A)) for i in range(A.n))
    if all(c == 0 for c in z):
        raise BasepointHit("both sum x_i and sum x_i m_i vanish")
    return ProjectivePoint(z)


@dataclass
class MomentQuery:
    A: ExponentSet
    u: Sequence[float]
    weights: Sequence | None = None
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.weights is None:
            self.weights = [1] * len(self.A)
        if len(self.weights) != len(self.A):
            raise ValueError("need one weight per exponent")
        if any(not _as_number(w) > 0 for w in self.weights):
            raise ValueError("weights must be strictly positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if len(self.u) != self.A.n:
            raise ValueError(f"target point must have {self.A.n} coordinates")


@dataclass
class BasisValues:
    values: np.ndarray          # f_m(u), indexed like A
    t: np.ndarray               # positive torus point with alpha_w(t) = u
    iterations: int = 0
    residual: float = 0.0
    u: np.ndarray = field(default=None, repr=False)


@lru_cache(maxsize=64)
def _hull(A: ExponentSet) -> LatticePolytope:
    return convex_hull(A)


def facet_distances(P: LatticePolytope, u) -> np.ndarray:
    """Signed Euclidean distance from u to each facet hyperplane (positive inside)."""
    N = np.array([f.normal for f in P.facets], dtype=float)
    off = np.array([f.offset for f in P.facets], dtype=float)
    return (off - N @ np.asarray(u, dtype=float)) / np.linalg.norm(N, axis=1)


def _log_partition_stats(E, logw, theta):
    z = E @ theta + logw
    z -= z.max()
    p = np.exp(z)
    p /= p.sum()
    mean = p @ E
    D = E - mean
    cov = D.T @ (p[:, None] * D)
    return p, mean, cov


def alpha_weighted(A: ExponentSet, weights, t) -> np.ndarray:
    """alpha_w(t) for a positive torus point t (floats)."""
    E = np.array(A.vectors, dtype=float)
    logw = np.log([float(w) for w in weights])
    theta = np.log(np.asarray(t, dtype=float))
    return _log_partition_stats(E, logw, theta)[1]


def moment_inverse(q: MomentQuery) -> BasisValues:
    """Solve alpha_w(t) = u for t in the positive orthant.

    Damped Newton in theta = log t from theta = 0; each Newton step is
    halved until the residual norm decreases (the Newton direction is a
    descent direction for |alpha_w - u|^2, so this always terminates).
    """
    A = q.A
    u = np.asarray([float(c) for c in q.u])
    dist = facet_distances(_hull(A), u)
    if dist.min() < -q.tol:
        raise OutsidePolytope(f"u = ({', '.join(f'{c:g}' for c in u)}) violates a facet inequality of conv(A)")
    if dist.min() <= q.tol:
        raise OnBoundary(f"u = ({', '.join(f'{c:g}' for c in u)}) lies on the boundary of conv(A)")

    E = np.array(A.vectors, dtype=float)
    logw = np.log([float(w) for w in q.weights])
    theta = np.zeros(A.n)
    p, mean, cov = _log_partition_stats(E, logw, theta)
    g = mean - u
    it = 0
    while np.abs(g).max() > q.tol:
        if it >= q.max_iter:
            raise NoConvergence(
                f"no convergence after {q.max_iter} iterations (residual {np.abs(g).max():.3e})",
                float(np.abs(g).max()), np.exp(theta))
        it += 1
        delta = np.linalg.solve(cov, -g)
        norm = np.linalg.norm(g)
        step = 1.0
        for _ in range(60):
            cand = theta + step * delta
            p2, mean2, cov2 = _log_partition_stats(E, logw, cand)
            g2 = mean2 - u
            if np.linalg.norm(g2) < norm:
                break
            step *= 0.5
        else:
            raise NoConvergence(
                f"line search stalled (residual {np.abs(g).max():.3e})",
                float(np.abs(g).max()), np.exp(theta))
        theta, p, cov, g = cand, p2, cov2, g2
    return BasisValues(values=p, t=np.exp(theta), iterations=it,
                       residual=float(np.abs(g).max()), u=u)


def linear_precision_residual(A: ExponentSet, weights, u, tol: float = DEFAULT_TOL) -> float:
    """max |sum_m f_m(u) m - u| with f from the inverse algebraic moment map."""
    f = moment_inverse(MomentQuery(A, u, weights, tol)).values
    E = np.array(A.vectors, dtype=float)
    return float(np.abs(f @ E - np.asarray(u, dtype=float)).max())


def affine_precision_gap(A: ExponentSet, f, u, coeffs, const) -> float:
    """|Lambda(u) - sum_m Lambda(m) f_m(u)| for Lambda(x) = <coeffs, x> + const."""
    lam = lambda x: float(np.dot(coeffs, x)) + const
    return abs(lam(u) - sum(lam(m) * fm for m, fm in zip(A, f)))


def barycenter(A: ExponentSet, weights=None) -> tuple:
    """alpha_w(1, ..., 1), exact."""
    weights = [Fraction(w) for w in (weights or [1] * len(A))]
    return _weighted_average(A, weights)


def interior_grid(A: ExponentSet, k: int, tol: float = DEFAULT_TOL) -> list[tuple[tuple, tuple]]:
    """(index, point) pairs of a k^n grid over the bounding box of conv(A).

    Axis values are lo + (hi - lo)(i + 1)/(k + 1) for i < k; only points
    farther than tol from every facet are kept.
    """
    P = _hull(A)
    lo, hi = P.bounding_box()
    axes = [[lo[j] + (hi[j] - lo[j]) * (i + 1) / (k + 1) for i in range(k)] for j in range(A.n)]
    out = []
    for idx in np.ndindex(*([k] * A.n)):
        u = tuple(axes[j][idx[j]] for j in range(A.n))
        if facet_distances(P, u).min() > tol:
            out.append((idx, u))
    return out
