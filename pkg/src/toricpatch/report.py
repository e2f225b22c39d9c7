"""Matplotlib figures written next to the CSV/OBJ outputs of the CLI."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lattice import ExponentSet  # noqa: E402
from .moment import MomentQuery, interior_grid, moment_inverse  # noqa: E402
from .patch import ControlScheme, patch_eval_many  # noqa: E402
from .realmesh import Mesh  # noqa: E402

plt.rcParams.update({
    "figure.dpi": 110,
    "savefig.bbox": "tight",
    "axes.titlesize": 11,
    "axes.labelsize": 10,
    "font.size": 9,
})


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_mesh(mesh: Mesh, path, title: str = "", control_points: Sequence | None = None,
              max_extent: float | None = 6.0):
    """Shaded triangle mesh; vertices beyond ``max_extent`` are clipped from view."""
    fig = plt.figure(figsize=(5.5, 5))
    ax = fig.add_subplot(projection="3d")
    V, F = mesh.vertices, mesh.faces
    if max_extent is not None and len(F):
        F = F[np.all(np.abs(V[F]).max(axis=2) <= max_extent, axis=1)]
    if len(F):
        ax.plot_trisurf(V[:, 0], V[:, 1], V[:, 2], triangles=F, cmap="viridis",
                        linewidth=0.1, edgecolor="none", alpha=0.9)
    elif len(V):
        ax.scatter(V[:, 0], V[:, 1], V[:, 2], s=2)
    if control_points:
        cp = np.array([[float(c) for c in (list(b) + [0, 0, 0])[:3]] for b in control_points if b is not None])
        if len(cp):
            ax.scatter(cp[:, 0], cp[:, 1], cp[:, 2], color="crimson", s=25, depthshade=False)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(title)
    return _save(fig, path)


def plot_plane_curve(A: ExponentSet, scheme: ControlScheme, path, title: str = "",
                     samples: int = 2000, clip: float = 8.0):
    """Affine picture of a rational plane curve with its control polygon."""
    s = np.tan(np.linspace(-np.pi / 2, np.pi / 2, samples + 2)[1:-1])
    s = s[s != 0]
    Z = patch_eval_many(A, scheme, s[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        xy = Z[:, 1:3] / Z[:, :1]
    xy[np.abs(xy).max(axis=1) > clip] = np.nan
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(xy[:, 0], xy[:, 1], lw=1.5)
    cps = [b for b in scheme.control_points() if b is not None]
    if cps:
        cp = np.array([[float(c) for c in b[:2]] for b in cps])
        ax.plot(cp[:, 0], cp[:, 1], "o--", color="crimson", lw=0.8, ms=4)
        for i, (x, y) in enumerate(cp):
            ax.annotate(f"b{i}", (x, y), textcoords="offset points", xytext=(4, 4))
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title)
    return _save(fig, path)


def plot_basis_functions(A: ExponentSet, path, weights=None, samples: int = 200, title: str = ""):
    """The linear-precision functions f_m on a segment (n = 1)."""
    if A.n != 1:
        raise ValueError("basis-function plot needs a one-dimensional exponent set")
    lo, hi = min(m[0] for m in A), max(m[0] for m in A)
    us = np.linspace(lo, hi, samples + 2)[1:-1]
    vals = np.array([moment_inverse(MomentQuery(A, [u], weights)).values for u in us])
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for j, m in enumerate(A):
        ax.plot(us, vals[:, j], label=f"f[{m[0]}]")
    ax.set_xlabel("u")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title(title)
    return _save(fig, path)


def plot_precision_residuals(A: ExponentSet, path, grid: int = 11, weights=None, title: str = ""):
    """Scatter of |sum f_m(u) m - u| over an interior grid of conv(A) (n = 2)."""
    E = np.array(A.vectors, dtype=float)
    pts, res = [], []
    for _, u in interior_grid(A, grid):
        f = moment_inverse(MomentQuery(A, u, weights)).values
        pts.append(u)
        res.append(max(float(np.abs(f @ E - u).max()), 1e-18))
    pts = np.array(pts)
    fig, ax = plt.subplots(figsize=(5, 4))
    sc = ax.scatter(pts[:, 0], pts[:, 1], c=np.log10(res), cmap="magma", s=30)
    fig.colorbar(sc, ax=ax, label="log10 residual")
    ax.scatter(E[:, 0], E[:, 1], marker="s", color="k", s=15)
    ax.set_aspect("equal")
    ax.set_title(title)
    return _save(fig, path)


def write_rows(rows: Sequence[dict], path):
    """Delimited (CSV) table; columns follow the first row's keys."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        if not rows:
            return path
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return path
