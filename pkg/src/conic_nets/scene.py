"""JSON scenes: named geometric objects with cross-references by name.

Exact scalars are written as ``"p/q"`` strings, approximate ones as JSON
numbers; a scene declares which through its ``backend`` field and may not
mix the two.  Point and line triples may also be given as one comma
separated string such as ``"1/2,1/3,1"``.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .billiards import BilliardTrajectory, reflection_step, tangency_residual
from .conics import Conic
from .errors import ParseError, SceneReferenceError
from .grids import ChainSpec, LineGrid
from .inscribed import Quadrilateral
from .nets import QNet, TouchingAssignment
from .projective import ProjLine, ProjPoint, join
from .scalar import APPROX, EXACT, format_scalar

SECTIONS = (
    "points",
    "lines",
    "conics",
    "quads",
    "nets",
    "grids",
    "assignments",
    "trajectories",
    "icnets",
    "families",
)


@dataclass
class Scene:
    backend: str = EXACT
    metadata: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)
    conics: dict = field(default_factory=dict)
    quads: dict = field(default_factory=dict)
    nets: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    assignments: dict = field(default_factory=dict)
    trajectories: dict = field(default_factory=dict)
    icnets: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)

    # --- resolution ---------------------------------------------------
    def _get(self, section: str, name: str, where: str):
        table = getattr(self, section)
        if name not in table:
            raise SceneReferenceError(name, where)
        return table[name]

    def point(self, name, where="") -> ProjPoint:
        return self._get("points", name, where)

    def line(self, name, where="") -> ProjLine:
        return self._get("lines", name, where)

    def conic(self, name, where="") -> Conic:
        return self._get("conics", name, where)

    def quad(self, name) -> Quadrilateral:
        return Quadrilateral(*(self.point(p, f"quads.{name}") for p in self.quads[name]))

    def qnet(self, name) -> QNet:
        return QNet(self.nets[name])

    def grid(self, name) -> LineGrid:
        entry = self.grids[name]
        where = f"grids.{name}"
        return LineGrid([self.line(x, where) for x in entry["k"]], [self.line(x, where) for x in entry["l"]])

    def chain_spec(self, name) -> ChainSpec | None:
        entry = self.grids[name]
        chains = entry.get("chains")
        if not chains or entry.get("conic") is None:
            return None
        where = f"grids.{name}.chains"
        return ChainSpec(
            self.conic(entry["conic"], where),
            [self.point(x, where) for x in chains["p"]],
            [self.point(x, where) for x in chains["q"]],
            bool(chains.get("merged", False)),
        )

    def assignment(self, name) -> tuple[LineGrid, TouchingAssignment]:
        entry = self.assignments[name]
        grid = self.grid(entry["grid"])
        out = TouchingAssignment(grid.net)
        out.edges = dict(entry["edges"])
        return grid, out

    def trajectory(self, name) -> BilliardTrajectory:
        entry = self.trajectories[name]
        where = f"trajectories.{name}"
        return trajectory_from_points(
            self.conic(entry["boundary"], where), self.conic(entry["caustic"], where), entry["points"]
        )

    def validate(self) -> None:
        """Raise :class:`SceneReferenceError` on the first dangling name."""
        for name, verts in self.quads.items():
            for p in verts:
                self.point(p, f"quads.{name}")
        for name, entry in self.grids.items():
            where = f"grids.{name}"
            for x in list(entry["k"]) + list(entry["l"]):
                self.line(x, where)
            if entry.get("conic") is not None:
                self.conic(entry["conic"], where)
            chains = entry.get("chains")
            if chains:
                for x in list(chains["p"]) + list(chains["q"]):
                    self.point(x, where + ".chains")
        for name, entry in self.assignments.items():
            self._get("grids", entry["grid"], f"assignments.{name}")
        for name, entry in self.trajectories.items():
            self.conic(entry["boundary"], f"trajectories.{name}")
            self.conic(entry["caustic"], f"trajectories.{name}")
        for name, entry in self.icnets.items():
            self._get("trajectories", entry["a"], f"icnets.{name}")
            self._get("trajectories", entry["b"], f"icnets.{name}")
        for name, entry in self.families.items():
            self._get("quads", entry["quad"], f"families.{name}")

    # --- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        def edge_name(key):
            (a, b), (c, d) = key
            return f"{a},{b}-{c},{d}"

        out = {"backend": self.backend, "metadata": self.metadata}
        out["points"] = {k: v.to_json() for k, v in self.points.items()}
        out["lines"] = {k: v.to_json() for k, v in self.lines.items()}
        out["conics"] = {k: v.to_json() for k, v in self.conics.items()}
        out["quads"] = {k: list(v) for k, v in self.quads.items()}
        out["nets"] = {k: [[p.to_json() for p in col] for col in v] for k, v in self.nets.items()}
        out["grids"] = self.grids
        out["assignments"] = {
            k: {"grid": v["grid"], "edges": {edge_name(e): p.to_json() for e, p in v["edges"].items()}}
            for k, v in self.assignments.items()
        }
        out["trajectories"] = {
            k: {"boundary": v["boundary"], "caustic": v["caustic"], "points": [p.to_json() for p in v["points"]]}
            for k, v in self.trajectories.items()
        }
        out["icnets"] = self.icnets
        out["families"] = {
            k: {
                "quad": v["quad"],
                "lambda": format_scalar(v["lambda"]),
                "conic": v["conic"].to_json(),
                "tangency": {e: p.to_json() for e, p in v["tangency"].items()},
            }
            for k, v in self.families.items()
        }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def trajectory_from_points(boundary: Conic, caustic: Conic, points) -> BilliardTrajectory:
    """Rebuild a trajectory's diagnostics from stored bounce points."""
    points = tuple(p.approx() for p in points)
    residual = max(
        (tangency_residual(caustic.approx(), join(points[i - 1], points[i])) for i in range(1, len(points))),
        default=0.0,
    )
    gap = 0.0
    for i in range(2, len(points)):
        predicted = reflection_step(boundary, points[i - 2], points[i - 1]).affine()
        actual = points[i].affine()
        gap = max(gap, abs(predicted[0] - actual[0]) + abs(predicted[1] - actual[1]))
    first, last = points[0].affine(), points[-1].affine()
    closed = len(points) > 1 and abs(first[0] - last[0]) + abs(first[1] - last[1]) <= 1e-9
    return BilliardTrajectory(boundary.approx(), caustic.approx(), points, closed, residual, gap)


# --- parsing --------------------------------------------------------------

class _Parser:
    def __init__(self, backend: str):
        self.backend = backend

    def scalar(self, value, where: str):
        if self.backend == EXACT:
            if isinstance(value, str):
                try:
                    return Fraction(value.strip())
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad rational {value!r}", where) from exc
            if isinstance(value, int) and not isinstance(value, bool):
                return Fraction(value)
            raise ParseError(f"exact scene holds non-rational scalar {value!r}", where)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"approx scene holds non-numeric scalar {value!r}", where)
        return float(value)

    def triple(self, value, where: str) -> tuple:
        if isinstance(value, str):
            value = value.split(",")
        if not isinstance(value, list) or len(value) != 3:
            raise ParseError("expected three homogeneous coordinates", where)
        return tuple(self.scalar(v, f"{where}[{n}]") for n, v in enumerate(value))

    def point(self, value, where: str) -> ProjPoint:
        try:
            return ProjPoint(*self.triple(value, where))
        except ValueError as exc:
            raise ParseError(str(exc), where) from exc

    def line(self, value, where: str) -> ProjLine:
        try:
            return ProjLine(*self.triple(value, where))
        except ValueError as exc:
            raise ParseError(str(exc), where) from exc

    def conic(self, value, where: str) -> Conic:
        if isinstance(value, str):
            value = value.split(",")
        if not isinstance(value, list) or len(value) != 6:
            raise ParseError("expected six conic coefficients", where)
        coeffs = [self.scalar(v, f"{where}[{n}]") for n, v in enumerate(value)]
        try:
            return Conic.from_coefficients(coeffs)
        except ValueError as exc:
            raise ParseError(str(exc), where) from exc


def _parse_edge_key(text: str, where: str) -> tuple:
    try:
        a, b = text.split("-")
        i1, j1 = (int(x) for x in a.split(","))
        i2, j2 = (int(x) for x in b.split(","))
    except ValueError as exc:
        raise ParseError(f"bad edge key {text!r}", where) from exc
    return ((i1, j1), (i2, j2))


def _require(obj, kind, where):
    if not isinstance(obj, kind):
        raise ParseError(f"expected {kind.__name__}", where)
    return obj


def scene_from_dict(data) -> Scene:
    _require(data, dict, "$")
    backend = data.get("backend", EXACT)
    if backend not in (EXACT, APPROX):
        raise ParseError(f"unknown backend {backend!r}", "backend")
    unknown = set(data) - set(SECTIONS) - {"backend", "metadata"}
    if unknown:
        raise ParseError(f"unknown sections {sorted(unknown)}", "$")
    p = _Parser(backend)
    s = Scene(backend=backend, metadata=dict(_require(data.get("metadata", {}), dict, "metadata")))
    sec = {name: _require(data.get(name, {}), dict, name) for name in SECTIONS}
    s.points = {k: p.point(v, f"points.{k}") for k, v in sec["points"].items()}
    s.lines = {k: p.line(v, f"lines.{k}") for k, v in sec["lines"].items()}
    s.conics = {k: p.conic(v, f"conics.{k}") for k, v in sec["conics"].items()}
    for k, v in sec["quads"].items():
        _require(v, list, f"quads.{k}")
        if len(v) != 4 or not all(isinstance(x, str) for x in v):
            raise ParseError("a quad lists four point names", f"quads.{k}")
        s.quads[k] = tuple(v)
    for k, v in sec["nets"].items():
        _require(v, list, f"nets.{k}")
        s.nets[k] = [
            [p.point(pt, f"nets.{k}[{i}][{j}]") for j, pt in enumerate(_require(col, list, f"nets.{k}[{i}]"))]
            for i, col in enumerate(v)
        ]
    for k, v in sec["grids"].items():
        where = f"grids.{k}"
        _require(v, dict, where)
        if not isinstance(v.get("k"), list) or not isinstance(v.get("l"), list):
            raise ParseError("a grid needs line-name lists 'k' and 'l'", where)
        entry = {"k": list(v["k"]), "l": list(v["l"]), "conic": v.get("conic")}
        if v.get("chains") is not None:
            ch = _require(v["chains"], dict, where + ".chains")
            entry["chains"] = {"p": list(ch.get("p", [])), "q": list(ch.get("q", [])), "merged": bool(ch.get("merged", False))}
        else:
            entry["chains"] = None
        s.grids[k] = entry
    for k, v in sec["assignments"].items():
        where = f"assignments.{k}"
        _require(v, dict, where)
        edges = _require(v.get("edges", {}), dict, where + ".edges")
        s.assignments[k] = {
            "grid": v.get("grid"),
            "edges": {_parse_edge_key(e, where): p.point(pt, f"{where}.edges.{e}") for e, pt in edges.items()},
        }
    for k, v in sec["trajectories"].items():
        where = f"trajectories.{k}"
        _require(v, dict, where)
        pts = _require(v.get("points", []), list, where + ".points")
        s.trajectories[k] = {
            "boundary": v.get("boundary"),
            "caustic": v.get("caustic"),
            "points": [p.point(pt, f"{where}.points[{n}]") for n, pt in enumerate(pts)],
        }
    for k, v in sec["icnets"].items():
        _require(v, dict, f"icnets.{k}")
        s.icnets[k] = {"a": v.get("a"), "b": v.get("b")}
    for k, v in sec["families"].items():
        where = f"families.{k}"
        _require(v, dict, where)
        s.families[k] = {
            "quad": v.get("quad"),
            "lambda": p.scalar(v.get("lambda"), where + ".lambda"),
            "conic": p.conic(v.get("conic"), where + ".conic"),
            "tangency": {e: p.point(pt, f"{where}.tangency.{e}") for e, pt in v.get("tangency", {}).items()},
        }
    s.validate()
    return s


def loads_scene(text: str) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return scene_from_dict(data)


def load_scene(path) -> Scene:
    if str(path) == "-":
        return loads_scene(sys.stdin.read())
    return loads_scene(Path(path).read_text())


def save_scene(scene: Scene, path) -> None:
    text = scene.dumps()
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
