import csv
import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricpatch.implicitize import implicitize
from toricpatch.lattice import ExponentSet
from toricpatch.models import load_fixture
from toricpatch.patch import ControlScheme
from toricpatch.realmesh import (Mesh, chart_sample, export_csv, export_obj, max_nearest_distance,
                                 nonneg_patch_via_moment, orthant_sample, parse_obj, real_part,
                                 surface_residuals)


@pytest.fixture(scope="module")
def hexsurf():
    m = load_fixture("hexsurf")
    return m, implicitize(m.A, m.scheme, 6)[0]


def test_single_triangle_obj():
    mesh = Mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    text = export_obj(mesh).decode()
    assert text.count("\nv ") + text.startswith("v ") == 3
    assert text.endswith("f 1 2 3\n") and "\r" not in text


def test_empty_mesh(tmp_path):
    p = tmp_path / "e.obj"
    assert export_obj(Mesh.empty(), p) == b""
    assert p.read_bytes() == b""


def test_bad_faces_rejected():
    with pytest.raises(ValueError):
        Mesh([[0, 0, 0]], [[0, 1, 2]])


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite, finite), min_size=3, max_size=30))
def test_obj_round_trip_bit_exact(verts):
    n = len(verts)
    faces = [[i, (i + 1) % n, (i + 2) % n] for i in range(n - 2)]
    mesh = Mesh(np.array(verts), faces)
    back = parse_obj(export_obj(mesh))
    assert np.array_equal(back.vertices.view(np.uint64), mesh.vertices.view(np.uint64))
    assert np.array_equal(back.faces, mesh.faces)


def test_obj_significant_digits():
    text = export_obj(Mesh([[1 / 3, 2 / 3, np.pi]], [])).decode()
    for tok in text.split()[1:]:
        assert len(tok.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 17


def test_pillow_sheets(tmp_path):
    m = load_fixture("pillow")
    quartic = implicitize(m.A, m.scheme, 4)[0]
    mesh = real_part(m.A, m.scheme, 25)
    assert surface_residuals(mesh, quartic).max() <= 1e-8
    assert set(map(tuple, mesh.signs.tolist())) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert (mesh.face_areas() > 1e-14).all()
    back = parse_obj(export_obj(mesh, tmp_path / "p.obj"))
    assert np.array_equal(back.vertices, mesh.vertices)


def test_csv_dump():
    m = load_fixture("pillow")
    mesh = orthant_sample(m.A, m.scheme, (1, -1), 4)
    rows = list(csv.reader(io.StringIO(export_csv(mesh).decode())))
    assert rows[0] == ["x", "y", "z", "eps", "s", "t"]
    assert len(rows) == 1 + len(mesh.vertices)
    assert rows[1][3] == "1,-1" and float(rows[1][5]) < 0
    assert b'"1,-1"' in export_csv(mesh)


def test_hexagon_orthant_on_sextic(hexsurf):
    m, sextic = hexsurf
    mesh = orthant_sample(m.A, m.scheme, (1, 1), 30)
    assert surface_residuals(mesh, sextic).max() <= 1e-6


def test_moment_patch_on_sextic(hexsurf):
    m, sextic = hexsurf
    mesh = nonneg_patch_via_moment(m.A, m.scheme, 20)
    assert len(mesh.faces) > 0 and surface_residuals(mesh, sextic).max() <= 1e-6


def test_moment_patch_and_orthant_sample_agree(hexsurf):
    m, _ = hexsurf
    coarse_moment = nonneg_patch_via_moment(m.A, m.scheme, 15)
    fine_orthant = orthant_sample(m.A, m.scheme, (1, 1), 400)
    assert max_nearest_distance(coarse_moment.vertices, fine_orthant.vertices) <= 1e-2
    coarse_orthant = orthant_sample(m.A, m.scheme, (1, 1), 8)
    fine_moment = nonneg_patch_via_moment(m.A, m.scheme, 150)
    assert max_nearest_distance(coarse_orthant.vertices, fine_moment.vertices) <= 1e-2


def test_barycenter_grid():
    m = load_fixture("hexsurf")
    mesh = nonneg_patch_via_moment(m.A, m.scheme, 1)
    assert len(mesh.vertices) == 1 and len(mesh.faces) == 0
    w, x, y, z = 1 + 6, -1 + 3, -1 + 3, -1 + 3
    assert np.allclose(mesh.vertices[0], [x / w, y / w, z / w])


def test_segment_and_parabola():
    A = ExponentSet.of([0, 1])
    seg = orthant_sample(A, ControlScheme.identity(2), (1,), 10)
    assert np.all((seg.vertices[:, 0] > 0) & (seg.vertices[:, 1] == 0))
    P = ExponentSet.of([0, 2])
    a = orthant_sample(P, ControlScheme.identity(2), (1,), 20).vertices
    b = orthant_sample(P, ControlScheme.identity(2), (-1,), 20).vertices
    assert np.abs(np.sort(a, axis=0) - np.sort(b, axis=0)).max() <= 1e-12


def test_points_at_infinity_dropped():
    # z0 = 1 - t vanishes at t = 1, which is on the log grid when it has an odd size
    mesh = orthant_sample(ExponentSet.of([0, 1]), ControlScheme(((1, 0), (-1, 1))), (1,), 5)
    assert mesh.dropped == 1 and len(mesh.vertices) == 4


def test_orthant_validation():
    A = ExponentSet.of([0, 1])
    with pytest.raises(ValueError):
        orthant_sample(A, ControlScheme.identity(2), (1,), 1)
    with pytest.raises(ValueError):
        orthant_sample(A, ControlScheme.identity(2), (2,), 5)


def test_charts_exact():
    m = load_fixture("pillow")
    cone = chart_sample(m.charts["cone"], 20)
    assert len(cone) == 400 and all(x * y == z * z for x, y, z in cone)
    assert all(x * y == 1 for x, y, _ in chart_sample(m.charts["cylinder"], 20))
    line = chart_sample([(1,)], 6)
    assert len(line) == 6 and len({p[0] for p in line}) == 6
