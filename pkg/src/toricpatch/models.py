"""JSON model files: exponent sets, weights, projections and chart generators.

Integers may be JSON numbers or decimal strings (for values beyond 64
bits); rationals are "p/q" strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .lattice import ExponentSet
from .patch import ControlScheme

FIXTURES = ("hexagon", "cusp", "rnc3", "pillow", "hexsurf", "crosspoly", "quartic")


class ModelError(ValueError):
    """A model file failed validation; the message names the field."""

    def __init__(self, path: str, problem: str):
        super().__init__(f"{path}: {problem}")
        self.field = path
        self.problem = problem


@dataclass
class Model:
    name: str
    A: ExponentSet
    labels: list[str] | None = None
    weights: list[Fraction] | None = None
    scheme: ControlScheme | None = None
    variables: list[str] | None = None
    charts: dict[str, list[tuple[int, ...]]] = field(default_factory=dict)
    description: str = ""

    def variable_names(self) -> list[str] | None:
        if self.variables:
            return self.variables
        if self.scheme is not None:
            return [f"z{i}" for i in range(self.scheme.k + 1)]
        return None


def _integer(value, path: str) -> int:
    if isinstance(value, bool):
        raise ModelError(path, "expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ModelError(path, f"expected an integer, got {value!r}")


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ModelError(path, "expected a rational, got a boolean")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ModelError(path, f"expected a rational number or 'p/q' string, got {value!r}")


def _list(value, path: str, length: int | None = None) -> list:
    if not isinstance(value, list):
        raise ModelError(path, f"expected a list, got {type(value).__name__}")
    if length is not None and len(value) != length:
        raise ModelError(path, f"expected {length} entries, got {len(value)}")
    return value


def parse_model(doc: dict, name: str = "model") -> Model:
    """Validate a decoded JSON document and build a Model."""
    if not isinstance(doc, dict):
        raise ModelError("$", "model file must be a JSON object")
    known = {"name", "description", "n", "exponents", "labels", "weights",
             "projection", "control_points", "variables", "charts"}
    for key in doc:
        if key not in known:
            raise ModelError(key, "unknown field")
    if "n" not in doc:
        raise ModelError("n", "required field is missing")
    n = _integer(doc["n"], "n")
    if not 1 <= n:
        raise ModelError("n", "must be a positive integer")
    if "exponents" not in doc:
        raise ModelError("exponents", "required field is missing")
    raw = _list(doc["exponents"], "exponents")
    if not raw:
        raise ModelError("exponents", "must be nonempty")
    vecs = []
    for i, v in enumerate(raw):
        p = f"exponents[{i}]"
        vec = tuple(_integer(c, f"{p}[{j}]") for j, c in enumerate(_list(v, p, n)))
        if vec in vecs:
            raise ModelError(p, f"duplicate exponent vector {list(vec)}")
        vecs.append(vec)
    A = ExponentSet(n, tuple(vecs))
    size = len(vecs)

    labels = None
    if "labels" in doc:
        labels = [str(s) for s in _list(doc["labels"], "labels", size)]
        if len(set(labels)) != size:
            raise ModelError("labels", "labels must be distinct")

    weights = None
    if "weights" in doc:
        weights = [_rational(w, f"weights[{i}]") for i, w in enumerate(_list(doc["weights"], "weights", size))]
        for i, w in enumerate(weights):
            if w <= 0:
                raise ModelError(f"weights[{i}]", "weights must be positive")

    if "projection" in doc and "control_points" in doc:
        raise ModelError("projection", "give either 'projection' or 'control_points', not both")
    scheme = None
    if "projection" in doc:
        rows = _list(doc["projection"], "projection", size)
        pts = []
        width = None
        for i, p in enumerate(rows):
            vec = _list(p, f"projection[{i}]", width)
            width = len(vec)
            if width == 0:
                raise ModelError(f"projection[{i}]", "projection vectors must be nonempty")
            pts.append(tuple(_rational(c, f"projection[{i}][{j}]") for j, c in enumerate(vec)))
        if all(c == 0 for p in pts for c in p):
            raise ModelError("projection", "at least one projection vector must be nonzero")
        scheme = ControlScheme(tuple(pts))
    elif "control_points" in doc:
        cp = doc["control_points"]
        if not isinstance(cp, dict) or "points" not in cp:
            raise ModelError("control_points", "expected an object with 'points' (and optional 'weights')")
        pts = _list(cp["points"], "control_points.points", size)
        ws = cp.get("weights", weights or [1] * size)
        ws = [_rational(w, f"control_points.weights[{i}]")
              for i, w in enumerate(_list(ws, "control_points.weights", size))]
        for i, w in enumerate(ws):
            if w <= 0:
                raise ModelError(f"control_points.weights[{i}]", "weights must be positive")
        width = None
        bs = []
        for i, b in enumerate(pts):
            vec = _list(b, f"control_points.points[{i}]", width)
            width = len(vec)
            bs.append([_rational(c, f"control_points.points[{i}][{j}]") for j, c in enumerate(vec)])
        scheme = ControlScheme.from_weighted(ws, bs)

    variables = None
    if "variables" in doc:
        variables = [str(s) for s in _list(doc["variables"], "variables")]
        if scheme is None:
            raise ModelError("variables", "variable names need a projection")
        if len(variables) != scheme.k + 1:
            raise ModelError("variables", f"expected {scheme.k + 1} names, got {len(variables)}")

    charts = {}
    if "charts" in doc:
        ch = doc["charts"]
        if not isinstance(ch, dict):
            raise ModelError("charts", "expected an object mapping chart names to generator lists")
        for cname, gens in ch.items():
            p = f"charts.{cname}"
            gl = _list(gens, p)
            if not gl:
                raise ModelError(p, "needs at least one generator")
            charts[cname] = [tuple(_integer(c, f"{p}[{i}][{j}]") for j, c in enumerate(_list(g, f"{p}[{i}]", n)))
                             for i, g in enumerate(gl)]

    desc = doc.get("description", "")
    return Model(str(doc.get("name", name)), A, labels, weights, scheme, variables, charts, str(desc))


def load_model(path) -> Model:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError("$", f"invalid JSON ({exc})") from None
    return parse_model(doc, name=path.stem)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("toricpatch") / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> Model:
    return load_model(fixture_path(name))


def resolve_model(ref: str) -> Model:
    """A path to a model file, or the bare name of a shipped fixture."""
    p = Path(ref)
    if p.exists():
        return load_model(p)
    stem = p.stem if p.suffix == ".json" else ref
    if stem in FIXTURES and not p.parent.name:
        return load_fixture(stem)
    raise FileNotFoundError(ref)
