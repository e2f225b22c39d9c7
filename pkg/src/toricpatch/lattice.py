"""Exact integer and rational linear algebra over exponent matrices.

Everything here works on plain lists of Python ints / ``Fraction`` so that
results are exact; nothing in this module touches floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = list[list[int]]
Vector = tuple[int, ...]

DEFAULT_CELL_LIMIT = 10**8


class EnumerationTooLarge(ValueError):
    """The requested search box exceeds the configured cell limit."""


@dataclass(frozen=True)
class ExponentSet:
    """Ordered list of distinct integer exponent vectors in Z^n."""

    n: int
    vectors: tuple[Vector, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient dimension n must be positive")
        if not self.vectors:
            raise ValueError("exponent set must be nonempty")
        vecs = tuple(tuple(int(c) for c in v) for v in self.vectors)
        for i, v in enumerate(vecs):
            if len(v) != self.n:
                raise ValueError(f"exponent {i} has {len(v)} entries, expected {self.n}")
        if len(set(vecs)) != len(vecs):
            raise ValueError("exponent vectors must be distinct")
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def of(cls, vectors: Iterable) -> "ExponentSet":
        """Build from vectors or bare integers (the latter meaning n = 1)."""
        vecs = [tuple(v) if isinstance(v, (tuple, list)) else (v,) for v in vectors]
        if not vecs:
            raise ValueError("exponent set must be nonempty")
        return cls(len(vecs[0]), tuple(vecs))

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def matrix(self) -> Matrix:
        """n x (l+1) matrix whose columns are the exponent vectors."""
        return [[v[r] for v in self.vectors] for r in range(self.n)]


def lift(A: ExponentSet) -> Matrix:
    """Prepend a row of ones to the column matrix of ``A``."""
    return [[1] * len(A)] + A.matrix()


def _check_matrix(M: Sequence[Sequence]) -> tuple[int, int]:
    if not M or not M[0]:
        raise ValueError("matrix must be nonempty")
    cols = len(M[0])
    if any(len(row) != cols for row in M):
        raise ValueError("ragged matrix")
    return len(M), cols


def _as_integer_rows(M) -> Matrix:
    """Scale each row of a rational matrix to integers (row space preserved)."""
    out = []
    for row in M:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def bareiss_echelon(M) -> tuple[Matrix, list[int]]:
    """Fraction-free (Bareiss) row echelon form.

    Returns the echelon rows (only the nonzero ones) and their pivot columns.
    Every intermediate entry is an exact integer minor of the input.
    """
    _check_matrix(M)
    A = [row[:] for row in _as_integer_rows(M)]
    nrows, ncols = len(A), len(A[0])
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        row_r = A[r]
        for i in range(r + 1, nrows):
            row_i = A[i]
            a = row_i[c]
            if a == 0:
                if p != prev:
                    for j in range(c + 1, ncols):
                        if row_i[j]:
                            row_i[j] = row_i[j] * p // prev
                continue
            for j in range(c + 1, ncols):
                row_i[j] = (row_i[j] * p - row_r[j] * a) // prev
            row_i[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M) -> int:
    """Rank over Q, by fraction-free elimination."""
    return len(bareiss_echelon(M)[1])


def primitive(v: Sequence) -> Vector:
    """Scale a rational vector to a primitive integer vector, first nonzero entry positive."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def rational_nullspace(M) -> list[tuple[Fraction, ...]]:
    """Basis of ker(M) over Q in reduced form (one vector per free column).

    The basis is the one read off the reduced row echelon form, so it depends
    only on the row space of ``M``.
    """
    _, ncols = _check_matrix(M)
    U, pivots = bareiss_echelon(M)
    # reduce the echelon rows to RREF over Q (only r rows, cheap)
    rows = [[Fraction(x) for x in row] for row in U]
    for i in range(len(rows) - 1, -1, -1):
        c = pivots[i]
        p = rows[i][c]
        rows[i] = [x / p for x in rows[i]]
        for k in range(i):
            f = rows[k][c]
            if f:
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][free]
        basis.append(tuple(v))
    return basis


def solve_rational(M, b) -> tuple[Fraction, ...] | None:
    """One exact solution of M x = b, or None if inconsistent."""
    rows, cols = _check_matrix(M)
    aug = [list(M[i]) + [b[i]] for i in range(rows)]
    U, pivots = bareiss_echelon(aug)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        s = Fraction(U[i][cols]) - sum(U[i][j] * x[j] for j in range(c + 1, cols))
        x[c] = s / U[i][c]
    return tuple(x)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``, so the result is a canonical basis of the row lattice.
    """
    if not rows:
        return []
    H = [list(map(int, r)) for r in rows]
    nrows, ncols = len(H), len(H[0])
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r + 1, nrows):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            ra, rb = H[r], H[i]
            H[r] = [x * p + y * q for p, q in zip(ra, rb)]
            H[i] = [(a // g) * q - (b // g) * p for p, q in zip(ra, rb)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
        p = H[r][c]
        for k in range(r):
            q = H[k][c] // p
            if q:
                H[k] = [a - q * b for a, b in zip(H[k], H[r])]
        r += 1
    return [row for row in H[:r] if any(row)]


def integer_kernel_basis(M) -> list[Vector]:
    """Z-basis of ker(M) ∩ Z^cols.

    Integer column operations bring ``M`` to column echelon form while the
    same operations are tracked on an identity matrix; the transform columns
    that end up opposite zero columns span the saturated kernel lattice.
    The basis is then canonicalized by Hermite normal form and sorted.
    """
    nrows, ncols = _check_matrix(M)
    cols = [[int(M[i][j]) for i in range(nrows)] for j in range(ncols)]
    trans = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    p = 0
    for i in range(nrows):
        if p == ncols:
            break
        for j in range(p + 1, ncols):
            if cols[j][i] == 0:
                continue
            a, b = cols[p][i], cols[j][i]
            g, x, y = _xgcd(a, b)
            cp, cj = cols[p], cols[j]
            tp, tj = trans[p], trans[j]
            cols[p] = [x * s + y * t for s, t in zip(cp, cj)]
            cols[j] = [(a // g) * t - (b // g) * s for s, t in zip(cp, cj)]
            trans[p] = [x * s + y * t for s, t in zip(tp, tj)]
            trans[j] = [(a // g) * t - (b // g) * s for s, t in zip(tp, tj)]
        if cols[p][i] != 0:
            p += 1
    kernel = trans[p:]
    return sorted(tuple(r) for r in hermite_normal_form(kernel))


def mat_vec(M, v) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def _canonical_sign(v: Vector) -> Vector:
    lead = next((x for x in v if x != 0), 0)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


def enumerate_kernel_vectors(M, bound: int, cell_limit: int = DEFAULT_CELL_LIMIT) -> list[Vector]:
    """All nonzero u in ker(M) with max|u_i| <= bound, one per ± pair.

    Depth-first search over the box with pruning: after fixing a prefix of
    coordinates, the remaining columns can change each row sum by at most
    ``bound * sum |M[r][j]|``. Output is sorted lexicographically, each
    vector with its first nonzero entry positive.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    nrows, ncols = _check_matrix(M)
    cells = (2 * bound + 1) ** ncols
    if cells > cell_limit:
        raise EnumerationTooLarge(
            f"search box has {cells} cells, above the limit of {cell_limit}")
    colsM = [[int(M[r][j]) for r in range(nrows)] for j in range(ncols)]
    # slack[j][r]: max change in row r achievable by columns j..end
    slack = [[0] * nrows for _ in range(ncols + 1)]
    for j in range(ncols - 1, -1, -1):
        slack[j] = [slack[j + 1][r] + bound * abs(colsM[j][r]) for r in range(nrows)]

    found = []
    u = [0] * ncols
    values = range(-bound, bound + 1)

    def dfs(j, sums, leading):
        if j == ncols:
            if leading and not any(sums):
                found.append(tuple(u))
            return
        rest = slack[j + 1]
        col = colsM[j]
        # first nonzero entry positive: skip negatives until something is nonzero
        for x in (values if leading else range(0, bound + 1)):
            new = [s + x * c for s, c in zip(sums, col)]
            if any(abs(s) > rest[r] for r, s in enumerate(new)):
                continue
            u[j] = x
            dfs(j + 1, new, leading or x != 0)
        u[j] = 0

    dfs(0, [0] * nrows, False)
    return sorted(found)


def pos_neg_split(u: Sequence[int]) -> tuple[Vector, Vector]:
    """Write ``u = u_plus - u_minus`` with nonnegative, disjointly supported parts."""
    plus = tuple(x if x > 0 else 0 for x in u)
    minus = tuple(-x if x < 0 else 0 for x in u)
    return plus, minus


def brute_force_kernel(M, bound: int) -> list[Vector]:
    """Reference enumeration over the full box; used as a test oracle."""
    _, ncols = _check_matrix(M)
    out = set()
    for u in itertools.product(range(-bound, bound + 1), repeat=ncols):
        if any(u) and not any(mat_vec(M, u)):
            out.add(_canonical_sign(u))
    return sorted(out)
