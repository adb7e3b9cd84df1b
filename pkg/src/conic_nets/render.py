"""Deterministic SVG drawings of scenes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .billiards import ic_net_build
from .conics import DOUBLE_LINE, PAIR_OF_LINES, Conic, classify
from .errors import EmptyViewport, GeometryError
from .projective import ProjLine, ProjPoint
from .scene import Scene

STYLE = {
    "conic": 'fill="none" stroke="#1f4e9a" stroke-width="1.5"',
    "line": 'stroke="#222222" stroke-width="1"',
    "chain": 'stroke="#777777" stroke-width="1" stroke-dasharray="4 3"',
    "edge": 'stroke="#444444" stroke-width="1"',
    "trajectory": 'fill="none" stroke="#b05a00" stroke-width="1"',
    "point": 'fill="#222222"',
    "tangency": 'fill="#d62728" stroke="#ffffff" stroke-width="0.5"',
    "incircle": 'fill="none" stroke="#2ca02c" stroke-width="1"',
}


@dataclass(frozen=True)
class RenderSpec:
    """Affine window ``(xmin, ymin, xmax, ymax)``; ``None`` fits the scene."""

    viewport: tuple | None = None
    width: int = 600
    density: int = 256
    precision: int = 2

    def __post_init__(self):
        if self.density < 16:
            raise ValueError("conic sampling density must be at least 16")


def _finite(p: ProjPoint):
    a = p.affine()
    return None if a is None else (float(a[0]), float(a[1]))


def _scene_points(scene: Scene) -> list:
    pts = list(scene.points.values())
    for net in scene.nets.values():
        pts += [p for col in net for p in col]
    for entry in scene.trajectories.values():
        pts += entry["points"]
    for entry in scene.assignments.values():
        pts += list(entry["edges"].values())
    for name in scene.grids:
        try:
            grid = scene.grid(name)
        except GeometryError:
            continue
        pts += [p for col in grid.net.points for p in col]
    return [a for a in (_finite(p) for p in pts) if a is not None]


def fit_viewport(scene: Scene) -> tuple:
    pts = _scene_points(scene)
    if not pts:
        return (-1.0, -1.0, 1.0, 1.0)
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-6)
    pad = 0.1 * span
    return (x0 - pad, y0 - pad, x1 + pad, y1 + pad)


class _Canvas:
    def __init__(self, viewport, spec: RenderSpec):
        x0, y0, x1, y1 = (float(v) for v in viewport)
        if not (x1 > x0 and y1 > y0):
            raise EmptyViewport(f"viewport {viewport} has no area")
        self.box = (x0, y0, x1, y1)
        self.scale = spec.width / (x1 - x0)
        self.height = round((y1 - y0) * self.scale)
        self.width = spec.width
        self.fmt = f"{{:.{spec.precision}f}}"
        self.items: list[str] = []

    def xy(self, p) -> tuple:
        x0, _, _, y1 = self.box
        return self.fmt.format((p[0] - x0) * self.scale), self.fmt.format((y1 - p[1]) * self.scale)

    def inside(self, p, margin=0.0) -> bool:
        x0, y0, x1, y1 = self.box
        mx, my = margin * (x1 - x0), margin * (y1 - y0)
        return x0 - mx <= p[0] <= x1 + mx and y0 - my <= p[1] <= y1 + my

    def clip_line(self, l: ProjLine):
        a, b, c = (float(v) for v in l.coords)
        x0, y0, x1, y1 = self.box
        hits = []
        if abs(b) > 1e-15:
            for x in (x0, x1):
                y = -(a * x + c) / b
                if y0 - 1e-12 <= y <= y1 + 1e-12:
                    hits.append((x, y))
        if abs(a) > 1e-15:
            for y in (y0, y1):
                x = -(b * y + c) / a
                if x0 - 1e-12 <= x <= x1 + 1e-12:
                    hits.append((x, y))
        if len(hits) < 2:
            return None
        hits.sort()
        return hits[0], hits[-1]

    def line(self, l: ProjLine, style: str, label: str) -> None:
        seg = self.clip_line(l)
        if seg is None:
            return
        (ax, ay), (bx, by) = self.xy(seg[0]), self.xy(seg[1])
        self.items.append(f'<line class="{label}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" {STYLE[style]}/>')

    def segment(self, p, q, style: str, label: str) -> None:
        (ax, ay), (bx, by) = self.xy(p), self.xy(q)
        self.items.append(f'<line class="{label}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" {STYLE[style]}/>')

    def dot(self, p, style: str, label: str, radius: float = 3.0) -> None:
        if not self.inside(p):
            return
        x, y = self.xy(p)
        self.items.append(f'<circle class="{label}" cx="{x}" cy="{y}" r="{radius}" {STYLE[style]}/>')

    def circle(self, centre, radius: float, label: str) -> None:
        x, y = self.xy(centre)
        r = self.fmt.format(radius * self.scale)
        self.items.append(f'<circle class="{label}" cx="{x}" cy="{y}" r="{r}" {STYLE["incircle"]}/>')

    def path(self, runs: list, style: str, label: str) -> None:
        parts = []
        for run in runs:
            if len(run) < 2:
                continue
            coords = [self.xy(p) for p in run]
            parts.append("M" + " L".join(f"{x} {y}" for x, y in coords))
        if parts:
            self.items.append(f'<path class="{label}" d="{" ".join(parts)}" {STYLE[style]}/>')

    def svg(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
        )
        body = "".join(f"  {item}\n" for item in self.items)
        return head + body + "</svg>\n"


def conic_samples(c: Conic, density: int) -> list:
    """Sample a real non-degenerate conic through a projective parametrization.

    Diagonalizing the form gives ``Q diag(e) Q^T``; with ``e1, e2`` of one
    sign and ``e3`` of the other, ``theta -> Q (cos/sqrt|e1|, sin/sqrt|e2|,
    1/sqrt|e3|)`` traces the conic.  Returns homogeneous float triples, or an
    empty list for a conic without real points.
    """
    a = np.asarray(c.matrix, dtype=float)
    a = a / np.linalg.norm(a)
    e, q = np.linalg.eigh(a)
    for k in range(3):
        pivot = next(x for x in q[:, k] if abs(x) > 1e-12)
        if pivot < 0:
            q[:, k] = -q[:, k]
    signs = np.sign(e)
    if abs(signs.sum()) == 3:
        return []
    odd = int(np.where(signs == (-1 if signs.sum() > 0 else 1))[0][0])
    pair = [k for k in range(3) if k != odd]
    out = []
    for t in range(density + 1):
        th = 2 * math.pi * t / density
        v = (
            q[:, pair[0]] * math.cos(th) / math.sqrt(abs(e[pair[0]]))
            + q[:, pair[1]] * math.sin(th) / math.sqrt(abs(e[pair[1]]))
            + q[:, odd] / math.sqrt(abs(e[odd]))
        )
        out.append(tuple(float(x) for x in v))
    return out


def _conic_runs(canvas: _Canvas, samples: list) -> list:
    runs, current = [], []
    prev_sign = None
    for x, y, z in samples:
        sign = z > 0
        finite = abs(z) > 1e-12
        if not finite or (prev_sign is not None and sign != prev_sign):
            if current:
                runs.append(current)
            current = []
        if finite:
            p = (x / z, y / z)
            if canvas.inside(p, margin=2.0):
                current.append(p)
            else:
                if current:
                    runs.append(current)
                current = []
        prev_sign = sign
    if current:
        runs.append(current)
    return runs


def _draw_conic(canvas: _Canvas, c: Conic, spec: RenderSpec, label: str) -> None:
    cls = classify(c)
    if cls.kind in (DOUBLE_LINE, PAIR_OF_LINES):
        for l in cls.lines:
            canvas.line(l.approx(), "conic", label)
        return
    canvas.path(_conic_runs(canvas, conic_samples(c, spec.density)), "conic", label)


def render_svg(scene: Scene, spec: RenderSpec | None = None, path=None) -> str:
    spec = spec or RenderSpec()
    canvas = _Canvas(spec.viewport or fit_viewport(scene), spec)
    for name in sorted(scene.conics):
        _draw_conic(canvas, scene.conics[name], spec, f"conic {name}")
    for name in sorted(scene.lines):
        canvas.line(scene.lines[name], "line", f"line {name}")
    for name in sorted(scene.grids):
        chains = scene.chain_spec(name)
        if chains is not None:
            for l in chains.polygon_edges():
                canvas.line(l, "chain", f"chain {name}")
    for name in sorted(scene.nets):
        net = scene.nets[name]
        for i, col in enumerate(net):
            for j, p in enumerate(col):
                a = _finite(p)
                for nb in ((i + 1, j), (i, j + 1)):
                    if nb[0] < len(net) and nb[1] < len(col):
                        b = _finite(net[nb[0]][nb[1]])
                        if a is not None and b is not None:
                            canvas.segment(a, b, "edge", f"net {name}")
    for name in sorted(scene.trajectories):
        pts = [_finite(p) for p in scene.trajectories[name]["points"]]
        canvas.path([[p for p in pts if p is not None]], "trajectory", f"trajectory {name}")
    for name in sorted(scene.icnets):
        entry = scene.icnets[name]
        try:
            net = ic_net_build(scene.trajectory(entry["a"]), scene.trajectory(entry["b"]))
        except GeometryError:
            continue
        for key in sorted(net.incircles):
            ic = net.incircles[key]
            canvas.circle(ic.center, ic.radius, f"incircle {name}")
    for name in sorted(scene.families):
        fam = scene.families[name]
        _draw_conic(canvas, fam["conic"], spec, f"family {name}")
    for name in sorted(scene.points):
        a = _finite(scene.points[name])
        if a is not None:
            canvas.dot(a, "point", f"point {name}")
    for name in sorted(scene.assignments):
        for key in sorted(scene.assignments[name]["edges"]):
            a = _finite(scene.assignments[name]["edges"][key])
            if a is not None:
                canvas.dot(a, "tangency", f"tangency {name}", 2.5)
    for name in sorted(scene.families):
        for e in sorted(scene.families[name]["tangency"]):
            a = _finite(scene.families[name]["tangency"][e])
            if a is not None:
                canvas.dot(a, "tangency", f"tangency {name}", 2.5)
    text = canvas.svg()
    if path is not None:
        Path(path).write_text(text)
    return text
