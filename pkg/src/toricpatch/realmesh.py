"""Triangle meshes of real toric patches, affine chart samples, OBJ/CSV export."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .lattice import ExponentSet
from .moment import MomentQuery, barycenter, interior_grid, moment_inverse
from .patch import ControlScheme, patch_eval_many

GRID_LO = 1e-2
GRID_HI = 1e2
INFINITY_RTOL = 1e-12
MIN_FACE_AREA = 1e-14


@dataclass
class Mesh:
    vertices: np.ndarray                      # (N, 3) float
    faces: np.ndarray                         # (M, 3) int, 0-based
    signs: np.ndarray | None = None           # (N, n) orthant sign per vertex
    params: np.ndarray | None = None          # (N, n) torus parameter per vertex
    dropped: int = 0                          # samples at infinity or at basepoints
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    @classmethod
    def empty(cls) -> "Mesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))

    def __len__(self):
        return len(self.vertices)

    def face_areas(self) -> np.ndarray:
        if not len(self.faces):
            return np.zeros(0)
        a, b, c = (self.vertices[self.faces[:, i]] for i in range(3))
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def merge(meshes: Sequence[Mesh]) -> Mesh:
    """Disjoint union of meshes (tags kept when every part has them)."""
    verts, faces, signs, params = [], [], [], []
    base = 0
    for m in meshes:
        verts.append(m.vertices)
        faces.append(m.faces + base)
        signs.append(m.signs)
        params.append(m.params)
        base += len(m.vertices)
    tags = all(s is not None for s in signs) and meshes
    return Mesh(np.vstack(verts) if verts else np.zeros((0, 3)),
                np.vstack(faces) if faces else np.zeros((0, 3), dtype=np.int64),
                np.vstack(signs) if tags else None,
                np.vstack(params) if tags else None,
                sum(m.dropped for m in meshes))


def _to_affine3(Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dehomogenize rows; returns (points padded to 3 columns, keep mask)."""
    k = Z.shape[1] - 1
    if k > 3:
        raise ValueError(f"meshes live in R^3; the scheme maps to P^{k}")
    scale = np.abs(Z).max(axis=1)
    keep = (scale > 0) & (np.abs(Z[:, 0]) > INFINITY_RTOL * scale)
    pts = np.zeros((len(Z), 3))
    with np.errstate(divide="ignore", invalid="ignore"):
        pts[:, :k] = Z[:, 1:] / Z[:, :1]
    return pts, keep


def _grid_mesh(points, keep, shape, signs, params, info) -> Mesh:
    """Triangulate a structured grid of samples, skipping dropped vertices."""
    index = -np.ones(len(points), dtype=np.int64)
    index[keep] = np.arange(int(keep.sum()))
    faces = []
    if len(shape) == 2:
        rows, cols = shape
        flat = lambda i, j: i * cols + j
        for i in range(rows - 1):
            for j in range(cols - 1):
                a, b, c, d = flat(i, j), flat(i + 1, j), flat(i + 1, j + 1), flat(i, j + 1)
                for tri in ((a, b, c), (a, c, d)):
                    if all(keep[v] for v in tri):
                        faces.append([index[v] for v in tri])
    mesh = Mesh(points[keep], np.array(faces, dtype=np.int64).reshape(-1, 3),
                signs[keep] if signs is not None else None,
                params[keep] if params is not None else None,
                dropped=int((~keep).sum()), info=info)
    if len(mesh.faces):
        mesh.faces = mesh.faces[mesh.face_areas() > MIN_FACE_AREA]
    return mesh


def log_axis(grid: int) -> np.ndarray:
    return np.logspace(np.log10(GRID_LO), np.log10(GRID_HI), grid)


def orthant_sample(A: ExponentSet, scheme: ControlScheme, eps: Sequence[int], grid: int) -> Mesh:
    """Image of a log-uniform grid in the orthant eps * R_>^n.

    Samples at infinity (z0 = 0 up to relative 1e-12) or at basepoints are
    dropped and counted in ``Mesh.dropped``.
    """
    if A.n not in (1, 2):
        raise ValueError("orthant_sample supports n = 1 or 2")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    eps = np.asarray(eps, dtype=int)
    if eps.shape != (A.n,) or not np.all(np.abs(eps) == 1):
        raise ValueError(f"sign vector must have {A.n} entries equal to +1 or -1")
    axis = log_axis(grid)
    if A.n == 1:
        T = (eps[0] * axis)[:, None]
        shape = (grid,)
    else:
        S, U = np.meshgrid(eps[0] * axis, eps[1] * axis, indexing="ij")
        T = np.column_stack([S.ravel(), U.ravel()])
        shape = (grid, grid)
    Z = patch_eval_many(A, scheme, T)
    pts, keep = _to_affine3(Z)
    signs = np.tile(eps, (len(T), 1))
    return _grid_mesh(pts, keep, shape, signs, T, {"eps": eps.tolist(), "grid": grid})


def all_orthants(n: int) -> list[tuple[int, ...]]:
    return list(itertools.product((1, -1), repeat=n))


def real_part(A: ExponentSet, scheme: ControlScheme, grid: int) -> Mesh:
    """Union of the orthant sheets over all 2^n sign vectors."""
    return merge([orthant_sample(A, scheme, eps, grid) for eps in all_orthants(A.n)])


def nonneg_patch_via_moment(A: ExponentSet, scheme: ControlScheme, grid: int,
                            weights: Sequence | None = None) -> Mesh:
    """Patch parametrized by conv(A) itself through the inverse algebraic moment map.

    Interior grid points u of the polytope are pulled back to torus points
    t with alpha_w(t) = u and pushed through the patch; points on the
    boundary are omitted.
    """
    if A.n not in (1, 2):
        raise ValueError("nonneg_patch_via_moment supports n = 1 or 2")
    weights = list(weights) if weights is not None else [1] * len(A)
    if grid == 1:
        cells = [((0,) * A.n, tuple(float(c) for c in barycenter(A, weights)))]
    else:
        cells = interior_grid(A, grid)
    T = np.array([moment_inverse(MomentQuery(A, u, weights)).t for _, u in cells])
    T = T.reshape(-1, A.n)
    Z = patch_eval_many(A, scheme, T)
    pts_c, keep_c = _to_affine3(Z)
    # scatter onto the full grid so adjacency is by grid index
    size = max(grid, 1)
    shape = (size,) * A.n
    total = size ** A.n
    pts = np.zeros((total, 3))
    keep = np.zeros(total, dtype=bool)
    params = np.ones((total, A.n))
    for (idx, _), p, ok, t in zip(cells, pts_c, keep_c, T):
        flat = int(np.ravel_multi_index(idx, shape))
        pts[flat], keep[flat], params[flat] = p, ok, t
    mesh = _grid_mesh(pts, keep, shape, np.ones((total, A.n), dtype=int), params,
                      {"grid": grid, "via": "moment"})
    mesh.dropped = int(len(cells) - keep_c.sum())
    return mesh


def _rational_axis(grid: int) -> list[Fraction]:
    """``grid`` distinct nonzero rationals of both signs: ±1/h, ±2/h, ..."""
    half = (grid + 1) // 2
    vals = []
    for j in range(1, half + 1):
        vals += [Fraction(j, max(1, half // 2)), Fraction(-j, max(1, half // 2))]
    return sorted(vals[:grid])


def chart_sample(generators: Sequence[Sequence[int]], grid: int, exact: bool = True) -> list[tuple]:
    """Points (t^m_1, ..., t^m_l) of an affine chart over a grid in the real torus.

    Generators of the semigroup are supplied by the caller.
    """
    gens = [tuple(int(c) for c in g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators must all have the same length")
    axis = _rational_axis(grid) if exact else [float(v) for v in _rational_axis(grid)]
    out = []
    for t in itertools.product(axis, repeat=n):
        if any(ti == 0 for ti in t):
            raise ValueError("zero parameter")
        point = []
        for g in gens:
            val = Fraction(1) if exact else 1.0
            for ti, e in zip(t, g):
                if e:
                    val *= ti ** e
            point.append(val)
        out.append(tuple(point))
    return out


def export_obj(mesh: Mesh, destination=None) -> bytes:
    """Wavefront OBJ text (``v`` lines then 1-based ``f`` lines, LF endings).

    Floats use ``repr`` (shortest round-tripping form, at most 17 digits).
    Writes to ``destination`` (path or binary file object) when given.
    """
    buf = io.StringIO()
    for x, y, z in mesh.vertices.tolist():
        buf.write(f"v {x!r} {y!r} {z!r}\n")
    for i, j, k in mesh.faces.tolist():
        buf.write(f"f {i + 1} {j + 1} {k + 1}\n")
    data = buf.getvalue().encode("ascii")
    _write(data, destination)
    return data


def parse_obj(data: bytes | str) -> Mesh:
    """Read back ``v`` and triangular ``f`` records."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    verts, faces = [], []
    for line in data.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return Mesh(np.array(verts).reshape(-1, 3), np.array(faces, dtype=np.int64).reshape(-1, 3))


def export_csv(mesh: Mesh, destination=None) -> bytes:
    """Point dump with header ``x,y,z,eps,s,t``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["x", "y", "z", "eps", "s", "t"])
    for i, (x, y, z) in enumerate(mesh.vertices.tolist()):
        eps = ",".join(str(int(e)) for e in mesh.signs[i]) if mesh.signs is not None else ""
        par = [repr(float(p)) for p in mesh.params[i]] if mesh.params is not None else []
        par = (par + ["", ""])[:2]
        w.writerow([repr(x), repr(y), repr(z), eps] + par)
    data = buf.getvalue().encode("utf-8")
    _write(data, destination)
    return data


def _write(data: bytes, destination):
    if destination is None:
        return
    if isinstance(destination, (str, Path)):
        Path(destination).write_bytes(data)
    else:
        destination.write(data)


def max_nearest_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest distance from a point of ``a`` to its nearest neighbour in ``b``."""
    if not len(a):
        return 0.0
    d, _ = cKDTree(np.asarray(b)).query(np.asarray(a))
    return float(d.max())


def surface_residuals(mesh: Mesh, form) -> np.ndarray:
    """|F(1, x, y, z)| at each vertex for an implicit form in [w, x, y, z]."""
    Z = np.column_stack([np.ones(len(mesh.vertices)), mesh.vertices[:, :form.k]])
    out = np.zeros(len(Z))
    for m, c in form.terms().items():
        out += c * np.prod(Z ** np.array(m), axis=1)
    return np.abs(out)
