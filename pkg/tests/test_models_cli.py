import json
import subprocess
import sys
from fractions import Fraction

import pytest

from toricpatch.cli import main
from toricpatch.models import FIXTURES, ModelError, load_fixture, parse_model


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_load(name):
    m = load_fixture(name)
    assert len(m.A) >= 2
    if m.scheme is not None:
        assert len(m.scheme) == len(m.A)


def test_model_parsing_rationals_and_big_ints():
    m = parse_model({"n": 1, "exponents": [[0], ["123456789012345678901234567890"]],
                     "weights": ["1/2", 3]})
    assert m.A[1] == (123456789012345678901234567890,)
    assert m.weights == [Fraction(1, 2), 3]


def test_control_points_become_weighted_scheme():
    m = parse_model({"n": 1, "exponents": [[0], [1]],
                     "control_points": {"points": [[0, 0], ["1/2", 1]], "weights": [1, 2]}})
    assert m.scheme.points == ((1, 0, 0), (2, 1, 2))


@pytest.mark.parametrize("doc,field", [
    ({"exponents": [[0]]}, "n"),
    ({"n": 2, "exponents": [[0, 0], [0]]}, "exponents[1]"),
    ({"n": 1, "exponents": [[0], [0]]}, "exponents[1]"),
    ({"n": 1, "exponents": [[0], [1]], "weights": [1, 0]}, "weights[1]"),
    ({"n": 1, "exponents": [[0], [1]], "weights": [1, "x"]}, "weights[1]"),
    ({"n": 1, "exponents": [[0], [1]], "colour": 1}, "colour"),
    ({"n": 1, "exponents": [[0], [1]], "projection": [[1], [1, 2]]}, "projection[1]"),
    ({"n": 1, "exponents": [[0], [1]], "labels": ["a", "a"]}, "labels"),
    ({"n": 1, "exponents": []}, "exponents"),
])
def test_model_rejections_name_the_field(doc, field):
    with pytest.raises(ModelError) as info:
        parse_model(doc)
    assert info.value.field == field
    assert str(info.value).startswith(field)


def test_ideal_quadratic(capsys):
    code, out, _ = run(capsys, "ideal", "hexagon", "--quadratic")
    assert code == 0 and len(out.splitlines()) == 12 and "ab - cg" in out


def test_ideal_cusp(capsys):
    code, out, _ = run(capsys, "ideal", "cusp", "--bound", "3")
    assert (code, out) == (0, "x0*x2^2 - x1^3\n")


def test_ideal_two_points(tmp_path, capsys):
    p = tmp_path / "two.json"
    p.write_text(json.dumps({"n": 1, "exponents": [[0], [1]]}))
    assert run(capsys, "ideal", str(p))[:2] == (0, "(no binomials)\n")


def test_degree(capsys):
    code, out, _ = run(capsys, "degree", "hexagon", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["degree"] == 6 and doc["volume"] == "3"


def test_eval_exact(capsys):
    code, out, _ = run(capsys, "eval", "cusp", "--at", "1/2", "--json")
    assert code == 0 and json.loads(out)["homogeneous"] == ["1", "1/4", "1/8"]


def test_invert_center(capsys):
    code, out, _ = run(capsys, "invert", "hexagon", "--at", "0,0", "--json")
    assert code == 0 and json.loads(out)["t"] == [1.0, 1.0]


def test_invert_boundary_is_usage_error(capsys):
    code, _, err = run(capsys, "invert", "hexagon", "--at", "1,1")
    assert code == 2 and "boundary" in err


def test_precision_check(tmp_path, capsys):
    csv_path, fig = tmp_path / "p.csv", tmp_path / "p.png"
    code, out, _ = run(capsys, "precision-check", "hexagon", "--csv", str(csv_path), "--figure", str(fig))
    assert code == 0 and out.startswith("PASS")
    assert csv_path.read_text().startswith("u,precision") and fig.stat().st_size > 0


def test_implicitize_pillow(capsys):
    code, out, _ = run(capsys, "implicitize", "pillow", "--degree", "4", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["dimension"] == 1
    coeffs = sorted(c["c"] for c in doc["forms"][0]["coefficients"])
    assert coeffs == [-16, -2, -2, -2, 1, 1, 1]


def test_mesh_outputs(tmp_path, capsys):
    obj, csvp, fig = tmp_path / "m.obj", tmp_path / "m.csv", tmp_path / "m.png"
    code, out, _ = run(capsys, "mesh", "pillow", "--grid", "8", "--out", str(obj),
                       "--csv", str(csvp), "--figure", str(fig))
    assert code == 0 and "vertices" in out
    assert obj.read_bytes().startswith(b"v ")
    assert csvp.read_bytes().startswith(b"x,y,z,eps,s,t\r\n")
    assert fig.stat().st_size > 0


def test_mesh_bad_eps(capsys):
    assert run(capsys, "mesh", "pillow", "--eps", "1,0")[0] == 2


def test_chart(capsys):
    code, out, _ = run(capsys, "chart", "pillow", "--name", "cone", "--json")
    pts = json.loads(out)["charts"]["cone"]["points"]
    assert code == 0 and len(pts) == 400
    for x, y, z in pts:
        assert Fraction(x) * Fraction(y) == Fraction(z) ** 2


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "degree", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "exponents": [[0], [0]]}')
    code, _, err = run(capsys, "degree", str(bad))
    assert code == 2 and "exponents[1]" in err
    assert run(capsys, "eval", "hexagon", "--at", "1,1")[0] == 2   # no projection
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "eval", "cusp", "--at", "a")[0] == 2


def test_verify_subset_and_report(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--only", "cusp,degrees", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and [c["name"] for c in doc["checks"]] == ["cusp", "degrees"]


def test_verify_failure_exit_code(monkeypatch, capsys):
    from toricpatch import verify
    monkeypatch.setattr(verify, "CHECKS", [lambda: verify.CheckResult("broken", False, "forced")])
    assert run(capsys, "verify")[0] == 1


@pytest.mark.parametrize("argv", [
    ["ideal", "hexagon", "--quadratic"],
    ["invert", "hexagon", "--at", "1/3,1/5"],
    ["implicitize", "rnc3"],
    ["mesh", "hexsurf", "--grid", "6", "--eps", "1,1"],
])
def test_json_byte_identical_across_processes(argv):
    cmd = [sys.executable, "-m", "toricpatch.cli", *argv, "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)


def test_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "ideal.json"
    code, stdout, _ = run(capsys, "ideal", "cusp", "--bound", "3", "--json", "--out", str(out))
    assert code == 0 and stdout == "" and json.loads(out.read_text())["count"] == 1


def test_report_figures(tmp_path):
    from toricpatch.report import plot_basis_functions, write_rows
    from toricpatch.verify import segment
    assert plot_basis_functions(segment(3), tmp_path / "b.png", samples=20).stat().st_size > 0
    write_rows([{"a": 1, "b": "x,y"}], tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_bytes() == b'a,b\r\n1,"x,y"\r\n'


def test_top_level_weights_feed_control_points():
    m = parse_model({"n": 1, "exponents": [[0], [1]], "weights": ["1/2", 2],
                     "control_points": {"points": [[0], [1]]}})
    assert m.scheme.points == ((Fraction(1, 2), 0), (2, 2))
