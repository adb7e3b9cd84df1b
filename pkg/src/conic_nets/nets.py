"""Nets of planar quadrilaterals, touching inscribed conics and loop monodromy."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ChartFailure, ClosureFailure, InvalidLoop, NonGenericQuadrilateral
from .inscribed import EDGES, InscribedConic, Quadrilateral, diagonal_intersection, inscribed_through
from .projective import (
    LineProjectivity,
    ProjPoint,
    central_projection,
    choose_chart,
    harmonic_conjugate,
    join,
    length_ratio,
)
from .scalar import close, format_scalar


class QNet:
    """Points ``f[i][j]`` for ``0 <= i <= M``, ``0 <= j <= N``.

    Cell ``(i, j)`` (``0 <= i < M``, ``0 <= j < N``) is the quadrilateral
    ``(f[i][j], f[i+1][j], f[i+1][j+1], f[i][j+1])``.
    """

    def __init__(self, points: Sequence[Sequence[ProjPoint]]):
        self.points = tuple(tuple(col) for col in points)
        self.M = len(self.points) - 1
        if self.M < 1 or any(len(col) != len(self.points[0]) for col in self.points):
            raise ValueError("a net needs a rectangular array of at least 2x2 points")
        self.N = len(self.points[0]) - 1
        if self.N < 1:
            raise ValueError("a net needs a rectangular array of at least 2x2 points")
        self._cells = {}
        for i in range(self.M):
            for j in range(self.N):
                try:
                    self._cells[(i, j)] = Quadrilateral(*(self.f(a, b) for a, b in cell_vertices(i, j)))
                except NonGenericQuadrilateral as exc:
                    raise NonGenericQuadrilateral(f"cell {(i, j)}: {exc}") from exc

    def f(self, i: int, j: int) -> ProjPoint:
        return self.points[i][j]

    def cell(self, i: int, j: int) -> Quadrilateral:
        return self._cells[(i, j)]

    def cells(self):
        return sorted(self._cells)

    def interior_vertices(self) -> list:
        return [(i, j) for j in range(1, self.N) for i in range(1, self.M)]

    def to_json(self) -> list:
        return [[p.to_json() for p in col] for col in self.points]


def cell_vertices(i: int, j: int) -> tuple:
    return ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))


def edge_key(i: int, j: int, edge: str) -> tuple:
    """Vertex-index pair of an edge of cell ``(i, j)``, sorted."""
    u, v, w, x = cell_vertices(i, j)
    pairs = {"uv": (u, v), "vw": (v, w), "wx": (x, w), "xu": (u, x)}
    return pairs[edge]


# --- the Koenigs multi-ratio ---------------------------------------------

@dataclass(frozen=True)
class KoenigsReport:
    ok: bool
    residuals: dict
    failing: tuple
    method: str = "multi-ratio"

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "method": self.method,
            "failing_vertices": [list(v) for v in self.failing],
            "products": {f"{i},{j}": format_scalar(p) for (i, j), p in self.residuals.items()},
        }

    def __bool__(self):
        return self.ok


def koenigs_product(net: QNet, i: int, j: int, chart=None):
    """The four-factor product of signed length ratios around vertex ``(i, j)``."""
    f = net.f
    m = {c: diagonal_intersection(net.cell(*c)) for c in ((i, j), (i - 1, j), (i - 1, j - 1), (i, j - 1))}
    if chart is None:
        chart = choose_chart(list(m.values()) + [f(i + 1, j), f(i, j + 1), f(i - 1, j), f(i, j - 1)])
    return (
        length_ratio(m[(i, j)], f(i + 1, j), f(i, j + 1), chart)
        * length_ratio(m[(i - 1, j)], f(i, j + 1), f(i - 1, j), chart)
        * length_ratio(m[(i - 1, j - 1)], f(i - 1, j), f(i, j - 1), chart)
        * length_ratio(m[(i, j - 1)], f(i, j - 1), f(i + 1, j), chart)
    )


def koenigs_check(net: QNet) -> KoenigsReport:
    """Evaluate the multi-ratio condition at every interior vertex.

    A single affine chart keeps all vertices and diagonal points finite; if
    none exists the verdict falls back to the chart-free local monodromy.
    """
    pts = [p for col in net.points for p in col]
    pts += [diagonal_intersection(net.cell(*c)) for c in net.cells()]
    try:
        chart = choose_chart(pts)
    except ChartFailure:
        failing = tuple(v for v in net.interior_vertices() if not vertex_loop(net, *v).monodromy().is_identity())
        return KoenigsReport(not failing, {}, failing, method="monodromy")
    residuals = {v: koenigs_product(net, *v, chart=chart) for v in net.interior_vertices()}
    failing = tuple(v for v, p in residuals.items() if not close(p, 1))
    return KoenigsReport(not failing, residuals, failing)


# --- loops of quadrilaterals ---------------------------------------------

def _shared_vertices(a: Quadrilateral, b: Quadrilateral) -> list:
    return [p for p in a.vertices if p in b.vertices]


def _edge_with(q: Quadrilateral, pair) -> str:
    for e in EDGES:
        ends = q.edge_endpoints(e)
        if (ends[0] == pair[0] and ends[1] == pair[1]) or (ends[0] == pair[1] and ends[1] == pair[0]):
            return e
    raise InvalidLoop("shared vertices do not span an edge")


class QuadLoop:
    """A cyclic sequence of quadrilaterals, consecutive ones glued along an edge.

    ``lines[k]`` is the edge-line shared by ``quads[k-1]`` and ``quads[k]``
    (indices mod ``n``), so the monodromy acts on ``lines[0]``.
    """

    def __init__(self, quads: Sequence[Quadrilateral]):
        self.quads = tuple(quads)
        n = len(self.quads)
        if n < 2:
            raise InvalidLoop("a loop needs at least two quadrilaterals")
        self.shared = []
        self.lines = []
        for k in range(n):
            prev, cur = self.quads[k - 1], self.quads[k]
            common = _shared_vertices(prev, cur)
            if len(common) != 2:
                raise InvalidLoop(f"quadrilaterals {(k - 1) % n} and {k} share {len(common)} vertices, need 2")
            e_prev, e_cur = _edge_with(prev, common), _edge_with(cur, common)
            self.shared.append((tuple(common), e_prev, e_cur))
            self.lines.append(cur.edge_line(e_cur))
        for k in range(n):
            if self.shared[k][2] == _edge_with(self.quads[k], self.shared[(k + 1) % n][0]):
                raise InvalidLoop(f"quadrilateral {k} is entered and left through the same edge")
        self.coloring, self.odd_cycle = _two_coloring(self.quads)

    @property
    def bipartite(self) -> bool:
        return self.coloring is not None

    def step_center(self, k: int) -> ProjPoint:
        """Centre of the projection through ``quads[k]``: the diagonal point
        when the entry and exit edges are opposite, otherwise its harmonic
        conjugate on the diagonal avoiding their common vertex."""
        q = self.quads[k]
        entry = self.shared[k][2]
        exit_ = _edge_with(q, self.shared[(k + 1) % len(self.quads)][0])
        r = diagonal_intersection(q)
        common = set(entry) & set(exit_)
        if not common:
            return r
        (c,) = common
        opposite = {"u": "w", "w": "u", "v": "x", "x": "v"}
        neighbours = [ch for ch in (entry + exit_) if ch != c]
        a, b = getattr(q, neighbours[0]), getattr(q, neighbours[1])
        if opposite[neighbours[0]] != neighbours[1]:
            raise InvalidLoop("entry and exit edges are not adjacent")
        return harmonic_conjugate(a, b, r)

    def step(self, k: int) -> LineProjectivity:
        n = len(self.quads)
        return central_projection(self.step_center(k), self.lines[k], self.lines[(k + 1) % n])

    def monodromy(self) -> LineProjectivity:
        f = self.step(0)
        for k in range(1, len(self.quads)):
            f = self.step(k) @ f
        return f

    def transport(self, seed: ProjPoint) -> list:
        """Tangency points on ``lines[0..n]`` obtained by carrying ``seed`` around."""
        out = [seed]
        for k in range(len(self.quads)):
            out.append(self.step(k)(out[-1]))
        return out


def _two_coloring(quads) -> tuple:
    """Proper 2-colouring of the loop's vertex graph, or an odd cycle."""
    verts: list = []

    def index(p):
        for n, q in enumerate(verts):
            if q == p:
                return n
        verts.append(p)
        return len(verts) - 1

    adj: dict = {}
    for q in quads:
        ids = [index(p) for p in q.vertices]
        for a in range(4):
            s, t = ids[a], ids[(a + 1) % 4]
            adj.setdefault(s, set()).add(t)
            adj.setdefault(t, set()).add(s)
    colour = {0: 0}
    parent = {0: None}
    todo = deque([0])
    while todo:
        s = todo.popleft()
        for t in sorted(adj[s]):
            if t not in colour:
                colour[t] = 1 - colour[s]
                parent[t] = s
                todo.append(t)
            elif colour[t] == colour[s]:
                return None, _cycle_through(parent, s, t, verts)
    return {verts[k]: c for k, c in colour.items()}, None


def _cycle_through(parent, s, t, verts) -> tuple:
    def path(v):
        out = []
        while v is not None:
            out.append(v)
            v = parent[v]
        return out

    ps, pt = path(s), path(t)
    common = next(v for v in ps if v in pt)
    cycle = ps[: ps.index(common) + 1] + list(reversed(pt[: pt.index(common)]))
    return tuple(verts[v] for v in cycle)


def loop_monodromy(loop: QuadLoop) -> LineProjectivity:
    return loop.monodromy()


def porism_check(loop: QuadLoop, tangency: Sequence[ProjPoint] | None = None) -> bool:
    """Does the loop carry a one-parameter family of touching conics?

    Bipartite loops need identity monodromy; for non-bipartite loops the
    monodromy is an involution, so the doubled loop always closes.  If a
    touching instance (one point per shared line) is supplied it must also
    be consistent with the step maps.
    """
    f = loop.monodromy()
    ok = f.is_identity() if loop.bipartite else (f @ f).is_identity()
    if tangency is not None:
        tangency = list(tangency)
        n = len(loop.quads)
        if len(tangency) != n:
            raise ValueError("need one tangency point per shared line")
        for k in range(n):
            if loop.step(k)(tangency[k]) != tangency[(k + 1) % n]:
                return False
    return ok


def vertex_loop(net: QNet, i: int, j: int) -> QuadLoop:
    """The four cells around interior vertex ``(i, j)``, in cyclic order."""
    return QuadLoop([net.cell(i - 1, j - 1), net.cell(i, j - 1), net.cell(i, j), net.cell(i - 1, j)])


# --- touching assignments ------------------------------------------------

@dataclass
class TouchingAssignment:
    """Per-cell inscribed conics and the shared tangency point of every edge.

    ``edges`` maps a sorted vertex-index pair to the tangency point on that
    edge.
    """

    net: QNet
    conics: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)

    def add(self, i: int, j: int, ic: InscribedConic) -> None:
        self.conics[(i, j)] = ic
        for e in EDGES:
            self.edges.setdefault(edge_key(i, j, e), ic.tangency[e])

    def consistent(self) -> bool:
        for (i, j), ic in self.conics.items():
            for e in EDGES:
                if self.edges[edge_key(i, j, e)] != ic.tangency[e]:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "cells": {f"{i},{j}": ic.to_json() for (i, j), ic in sorted(self.conics.items())},
            "edges": {
                f"{a[0]},{a[1]}-{b[0]},{b[1]}": p.to_json() for (a, b), p in sorted(self.edges.items())
            },
        }


def non_closing_vertices(net: QNet) -> tuple:
    return tuple(v for v in net.interior_vertices() if not vertex_loop(net, *v).monodromy().is_identity())


def propagate_touching(net: QNet, seed: ProjPoint, seed_edge: str = "uv") -> TouchingAssignment:
    """Spread touching inscribed conics over the net from one tangency point.

    Cells are visited row by row (``j`` outer, ``i`` inner).  The first row
    is grown to the right, later rows upwards; whenever a cell closes an
    interior vertex the tangency point on its left edge must agree with the
    neighbour's, otherwise :class:`ClosureFailure` is raised.
    """
    out = TouchingAssignment(net)
    for j in range(net.N):
        for i in range(net.M):
            cell = net.cell(i, j)
            if (i, j) == (0, 0):
                ic = inscribed_through(cell, seed, seed_edge)
            elif j == 0:
                ic = inscribed_through(cell, out.edges[edge_key(i, j, "xu")], "xu")
            else:
                ic = inscribed_through(cell, out.edges[edge_key(i, j, "uv")], "uv")
                if i > 0 and ic.tangency["xu"] != out.edges[edge_key(i, j, "xu")]:
                    residual = vertex_loop(net, i, j).monodromy().normalized_matrix()
                    raise ClosureFailure((i, j), residual, non_closing_vertices(net))
            out.add(i, j, ic)
    return out
