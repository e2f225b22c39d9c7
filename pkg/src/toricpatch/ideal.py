"""Binomials of the toric ideal I_A read off the kernel of the lifted matrix."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .lattice import (DEFAULT_CELL_LIMIT, ExponentSet, Vector, enumerate_kernel_vectors,
                      lift, mat_vec, pos_neg_split)
from .patch import monomial_param


@dataclass(frozen=True)
class Binomial:
    """x^plus - x^minus in the variables indexed by an exponent set."""

    plus: Vector
    minus: Vector

    def __post_init__(self):
        if len(self.plus) != len(self.minus):
            raise ValueError("plus and minus must have the same length")
        if any(a < 0 for a in self.plus) or any(b < 0 for b in self.minus):
            raise ValueError("binomial exponents must be nonnegative")
        if any(a and b for a, b in zip(self.plus, self.minus)):
            raise ValueError("plus and minus must have disjoint supports")
        if not any(self.plus) and not any(self.minus):
            raise ValueError("both sides of a binomial cannot be 1")

    @classmethod
    def from_kernel(cls, u: Sequence[int]) -> "Binomial":
        plus, minus = pos_neg_split(u)
        return cls(plus, minus).canonical()

    def canonical(self) -> "Binomial":
        """Put the lexicographically larger monomial first."""
        if self.minus > self.plus:
            return Binomial(self.minus, self.plus)
        return self

    @property
    def degree(self) -> int:
        return max(sum(self.plus), sum(self.minus))

    def kernel_vector(self) -> Vector:
        return tuple(a - b for a, b in zip(self.plus, self.minus))

    def sort_key(self):
        return (self.degree, tuple(-x for x in self.plus), tuple(-x for x in self.minus))

    def format(self, labels: Sequence[str] | None = None, style: str = "plain") -> str:
        """Render as text, e.g. ``x0*x2^2 - x1^3`` or ``ab - cg`` / ``a^2 - be`` in compact style."""
        return f"{_monomial(self.plus, labels, style)} - {_monomial(self.minus, labels, style)}"


def _monomial(exps, labels, style) -> str:
    names = labels or [f"x{i}" for i in range(len(exps))]
    compact = style == "compact"
    parts = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    if not parts:
        return "1"
    return "".join(parts) if compact else "*".join(parts)


def default_bound(A: ExponentSet) -> int:
    """Maximum coordinate spread of A; the default kernel search radius."""
    spreads = [max(v[i] for v in A) - min(v[i] for v in A) for i in range(A.n)]
    return max(1, max(spreads))


def binomials_from_kernel(A: ExponentSet, bound: int,
                          cell_limit: int = DEFAULT_CELL_LIMIT) -> list[Binomial]:
    """One binomial per kernel vector of lift(A) with max-norm <= bound.

    This is a bounded-degree slice of the ideal; it is not claimed to
    generate I_A.
    """
    vecs = enumerate_kernel_vectors(lift(A), bound, cell_limit=cell_limit)
    return sorted((Binomial.from_kernel(u) for u in vecs), key=Binomial.sort_key)


def quadratic_binomials(A: ExponentSet) -> list[Binomial]:
    """All x_a x_b - x_c x_d with a + b = c + d (coincident midpoints)."""
    k = len(A)
    by_sum = defaultdict(list)
    for i, j in combinations_with_replacement(range(k), 2):
        s = tuple(a + b for a, b in zip(A[i], A[j]))
        by_sum[s].append((i, j))
    out = []
    for pairs in by_sum.values():
        for (i, j), (p, q) in combinations(pairs, 2):
            u = [0] * k
            u[i] += 1
            u[j] += 1
            u[p] -= 1
            u[q] -= 1
            out.append(Binomial.from_kernel(u))
    return sorted(out, key=Binomial.sort_key)


def is_toric_binomial(A: ExponentSet, u: Sequence[int], v: Sequence[int]) -> bool:
    """True iff lift(A) u == lift(A) v."""
    if len(u) != len(A) or len(v) != len(A):
        raise ValueError(f"exponent vectors must have length {len(A)}")
    L = lift(A)
    return mat_vec(L, u) == mat_vec(L, v)


def residual_at(b: Binomial, A: ExponentSet, t: Sequence) -> Fraction:
    """Exact value of the binomial at the torus point phi_A(t)."""
    if len(t) != A.n:
        raise ValueError(f"torus point must have {A.n} coordinates")
    x = monomial_param(A, [Fraction(c) for c in t]).coords

    def mono(exps):
        val = Fraction(1)
        for xi, e in zip(x, exps):
            if e:
                val *= xi ** e
        return val

    return mono(b.plus) - mono(b.minus)
