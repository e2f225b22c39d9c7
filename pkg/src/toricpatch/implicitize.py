"""Implicit equations of rational curves and surfaces by exact interpolation.

Sample the projected parametrization at rational torus points, evaluate all
degree-d monomials there, and take the rational nullspace of that matrix.
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Iterator, Sequence

from .lattice import ExponentSet, primitive, rational_nullspace
from .patch import BasepointHit, ControlScheme, ProjectivePoint, patch_point
from .polytope import implicit_degree

log = logging.getLogger(__name__)

EXTRA_SAMPLES = 10
CHECK_SAMPLES = 20
CHECK_OFFSET = 500
MAX_RETRIES = 4


class SamplingError(RuntimeError):
    """Not enough valid sample points could be produced."""


def monomials(k: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of all degree-d monomials in z0..zk, graded-lex (z0^d first)."""
    out = []
    for combo in itertools.combinations_with_replacement(range(k + 1), d):
        e = [0] * (k + 1)
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


@dataclass(frozen=True)
class ImplicitForm:
    """Primitive integer form of degree d in k+1 homogeneous variables."""

    k: int
    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != comb(self.d + self.k, self.k):
            raise ValueError("coefficient vector has the wrong length")
        if not any(self.coeffs):
            raise ValueError("implicit form cannot be identically zero")

    @classmethod
    def from_vector(cls, k: int, d: int, v: Sequence) -> "ImplicitForm":
        return cls(k, d, primitive(v))

    @classmethod
    def from_terms(cls, k: int, d: int, terms: dict) -> "ImplicitForm":
        mons = monomials(k, d)
        return cls.from_vector(k, d, [terms.get(m, 0) for m in mons])

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        return monomials(self.k, self.d)

    def terms(self) -> dict[tuple[int, ...], int]:
        return {m: c for m, c in zip(self.monomials, self.coeffs) if c}

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms().get(tuple(exps), 0)

    @property
    def term_count(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def evaluate(self, z: Sequence):
        return sum(c * prod(zi ** e for zi, e in zip(z, m) if e)
                   for m, c in zip(self.monomials, self.coeffs) if c)

    def ratio_to(self, other: "ImplicitForm") -> Fraction | None:
        """Scalar r with self = r * other, or None if not proportional."""
        if (self.k, self.d) != (other.k, other.d):
            return None
        r = None
        for a, b in zip(self.coeffs, other.coeffs):
            if (a == 0) != (b == 0):
                return None
            if a:
                q = Fraction(a, b)
                if r is None:
                    r = q
                elif q != r:
                    return None
        return r

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"z{i}" for i in range(self.k + 1)]
        parts = []
        for m, c in self.terms().items():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            mag = abs(c)
            body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _sequence_value(j: int) -> Fraction:
    # 3/2, 5/3, 7/4, 9/5, ...
    return Fraction(2 * j + 1, j + 1)


def _multi_indices(n: int) -> Iterator[tuple[int, ...]]:
    """All n-tuples of nonnegative integers, by total then lexicographically."""
    total = 0
    while True:
        for combo in itertools.product(range(total + 1), repeat=n):
            if sum(combo) == total:
                yield combo
        total += 1


def sample_parameters(n: int, count: int, offset: int = 0) -> list[tuple[Fraction, ...]]:
    """Deterministic rational torus points.

    Coordinate c of the sample with multi-index (i_1, ..., i_n) is the
    (i_c + c + offset + 1)-th term of 3/2, 5/3, 7/4, ...; multi-indices run
    over diagonals so the points fill a triangle of the parameter grid
    rather than a curve.
    """
    out = []
    for idx in itertools.islice(_multi_indices(n), count):
        out.append(tuple(_sequence_value(i + c + offset + 1) for c, i in enumerate(idx)))
    return out


def thread_count() -> int:
    """Worker cap from the TORIC_THREADS environment variable (default 1)."""
    try:
        return max(1, int(os.environ.get("TORIC_THREADS", "1")))
    except ValueError:
        return 1


def sample_points(A: ExponentSet, scheme: ControlScheme, count: int,
                  offset: int = 0) -> list[ProjectivePoint]:
    """``count`` projected sample points, skipping basepoints."""
    out = []
    attempts = 0
    batch = count
    while len(out) < count:
        params = sample_parameters(A.n, attempts + batch, offset)[attempts:]
        attempts += batch
        for t in params:
            try:
                out.append(patch_point(A, scheme, t))
            except BasepointHit:
                continue
            if len(out) == count:
                break
        if attempts > 10 * count + 100:
            raise SamplingError(f"only {len(out)} of {count} sample points avoid the basepoints")
    return out


def _monomial_row(z: tuple[int, ...], mons) -> list[int]:
    return [prod(zi ** e for zi, e in zip(z, m) if e) for m in mons]


def interpolation_matrix(points: Sequence[ProjectivePoint], mons) -> list[list[int]]:
    coords = [p.integer_coords() for p in points]
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda z: _monomial_row(z, mons), coords))
    return [_monomial_row(z, mons) for z in coords]


def implicitize(A: ExponentSet, scheme: ControlScheme, d: int) -> list[ImplicitForm]:
    """Basis of the degree-d forms vanishing on the image of the patch.

    An empty list means no form of degree d vanishes (degree too small).
    Every form is checked on fresh samples; if one fails, the sample set is
    enlarged and the nullspace recomputed.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    if len(scheme) != len(A):
        raise ValueError("scheme length must equal the number of exponents")
    k = scheme.k
    mons = monomials(k, d)
    count = len(mons) + EXTRA_SAMPLES
    checks = sample_points(A, scheme, CHECK_SAMPLES, offset=CHECK_OFFSET)
    for attempt in range(MAX_RETRIES):
        pts = sample_points(A, scheme, count)
        null = rational_nullspace(interpolation_matrix(pts, mons))
        forms = [ImplicitForm.from_vector(k, d, v) for v in null]
        if all(f.evaluate(p.integer_coords()) == 0 for f in forms for p in checks):
            return forms
        log.info("degree %d: nullspace of size %d failed fresh checks; resampling", d, len(forms))
        count += len(mons)
    raise SamplingError(f"interpolation at degree {d} did not stabilize")


def degree_search(A: ExponentSet, scheme: ControlScheme,
                  d_max: int | None = None) -> tuple[int | None, list[ImplicitForm]]:
    """Smallest degree <= d_max admitting a vanishing form; (None, []) if there is none."""
    if d_max is None:
        d_max = implicit_degree(A)
    for d in range(1, d_max + 1):
        forms = implicitize(A, scheme, d)
        if forms:
            return d, forms
    return None, []


def residual_max(form: ImplicitForm, points: Sequence):
    """Largest |form(p)| over the points (exact on rational points)."""
    worst = 0
    for p in points:
        z = p.coords if isinstance(p, ProjectivePoint) else tuple(p)
        if len(z) != form.k + 1:
            raise ValueError(f"point has {len(z)} coordinates, form expects {form.k + 1}")
        worst = max(worst, abs(form.evaluate(z)))
    return worst
