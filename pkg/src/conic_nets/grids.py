"""Line grids, chains inscribed in a conic, and the six-line criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .conics import (
    Conic,
    DoubleContact,
    conic_line_intersection,
    conic_tangent_to_five_lines,
    conic_through,
    double_contact,
    fit_dual_conic,
    is_tangent,
    on_conic,
    polar,
    pole,
    rational_parametrization,
)
from .errors import (
    ClosureFailure,
    CoincidentLines,
    CoincidentPoints,
    DegenerateConic,
    DegenerateFamilyMember,
    DegenerateInput,
    ChainPointOffConic,
    InconsistentStrip,
    NoCommonConic,
    NonGenericChain,
    NonGenericLines,
    NonGenericQuadrilateral,
    PointOnWrongEdge,
)
from .inscribed import ceva_common_point_check, diagonal_intersection, inscribed_through
from .nets import QNet, TouchingAssignment, edge_key, propagate_touching, vertex_loop
from .projective import ProjLine, ProjPoint, collinear, concurrent, incident, is_generic, join, meet
from .scalar import is_exact, norm, vanishes


class LineGrid:
    """Lines ``k[0..m]`` and ``l[0..n]``; vertex ``(i, j)`` is ``k[i] ^ l[j]``.

    Cells are indexed 1-based as ``(i, j)`` for ``1 <= i <= m``,
    ``1 <= j <= n``; cell ``(i, j)`` is bounded by ``k[i-1], l[j-1], k[i],
    l[j]`` and coincides with cell ``(i-1, j-1)`` of :meth:`to_qnet`.
    With ``generic=False`` only the individual cells are validated, which
    admits the concurrent-pencil grids used as counterexamples.
    """

    def __init__(self, k: Sequence[ProjLine], l: Sequence[ProjLine], generic: bool = True):
        self.k = tuple(k)
        self.l = tuple(l)
        if len(self.k) < 2 or len(self.l) < 2:
            raise NonGenericLines("a grid needs at least two lines in each family")
        if generic and not is_generic(self.k + self.l):
            raise NonGenericLines("three of the grid lines are concurrent")
        try:
            self.net = QNet([[meet(ki, lj) for lj in self.l] for ki in self.k])
        except (CoincidentLines, NonGenericQuadrilateral) as exc:
            raise NonGenericLines(f"invalid grid cell: {exc}") from exc

    @property
    def m(self) -> int:
        return len(self.k) - 1

    @property
    def n(self) -> int:
        return len(self.l) - 1

    def to_qnet(self) -> QNet:
        return self.net

    def cell(self, i: int, j: int):
        return self.net.cell(i - 1, j - 1)

    def lines(self) -> list:
        return list(self.k + self.l)

    def to_json(self) -> dict:
        return {"k": [x.to_json() for x in self.k], "l": [x.to_json() for x in self.l]}


def diagonal_points(grid: LineGrid) -> dict:
    """``r[(i, j)]`` for the 1-based cells of the grid."""
    return {
        (i, j): diagonal_intersection(grid.cell(i, j))
        for i in range(1, grid.m + 1)
        for j in range(1, grid.n + 1)
    }


# --- rational conics and chains ------------------------------------------

def find_rational_point(c: Conic, bound: int = 12) -> ProjPoint:
    """Search a rational point of an exact conic on small vertical/horizontal lines."""
    probes = [(0, 0, 1)]
    for a in range(bound + 1):
        for t in sorted({a, -a}):
            probes += [(1, 0, -t), (0, 1, -t)]
    for h in probes:
        kind, pts = conic_line_intersection(c, ProjLine(*h))
        if kind == "real" and pts:
            return pts[0]
    raise DegenerateConic("no small rational point found; supply a base point")


def random_conic_through(rng, point: ProjPoint, size: int = 9) -> Conic:
    """A random exact non-degenerate conic passing through ``point``."""
    e = point.coords
    while True:
        entries = [Fraction(rng.randint(-size, size), rng.randint(1, 4)) for _ in range(6)]
        a = ((entries[0], entries[1], entries[2]), (entries[1], entries[3], entries[4]), (entries[2], entries[4], entries[5]))
        ee = la.dot(e, e)
        coef = la.dot(e, la.matvec(a, e)) / (ee * ee)
        m = tuple(tuple(a[i][j] - coef * e[i] * e[j] for j in range(3)) for i in range(3))
        if any(x != 0 for r in m for x in r):
            c = Conic(m)
            if c.rank == 3:
                return c


@dataclass(frozen=True)
class ChainSpec:
    """Two polygonal chains inscribed in a non-degenerate conic.

    ``merged`` marks chains that are consecutive arcs of a single inscribed
    polygon (``q[0]`` follows ``p[-1]`` and ``p[0]`` follows ``q[-1]``); it
    affects which polygon edges are drawn, not the construction.
    """

    conic: Conic
    p: tuple
    q: tuple
    merged: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "q", tuple(self.q))
        if self.conic.rank < 3:
            raise DegenerateConic("chains need a non-degenerate conic")
        if len(self.p) < 2 or len(self.q) < 2:
            raise NonGenericChain("each chain needs at least two points")
        for pt in self.p + self.q:
            if not on_conic(self.conic, pt):
                raise ChainPointOffConic(f"{pt} is not on the conic")
        pts = self.p + self.q
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if pts[a] == pts[b]:
                    raise NonGenericChain(f"chain point {pts[a]} is repeated")

    @classmethod
    def from_parameters(cls, conic: Conic, p_params, q_params, base: ProjPoint | None = None, merged=False):
        base = find_rational_point(conic) if base is None else base
        param = rational_parametrization(conic, base)
        return cls(conic, tuple(param(t) for t in p_params), tuple(param(t) for t in q_params), merged)

    def chain_lines(self) -> tuple:
        """The polygon edges ``(p[i-1], p[i])`` and ``(q[j-1], q[j])``."""
        kk = tuple(join(self.p[i - 1], self.p[i]) for i in range(1, len(self.p)))
        ll = tuple(join(self.q[j - 1], self.q[j]) for j in range(1, len(self.q)))
        return kk, ll

    def polygon_edges(self) -> tuple:
        kk, ll = self.chain_lines()
        if not self.merged:
            return kk + ll
        return kk + (join(self.p[-1], self.q[0]),) + ll + (join(self.q[-1], self.p[0]),)


def grid_from_chains(spec: ChainSpec) -> tuple[LineGrid, TouchingAssignment]:
    """Tangent lines at the chain points and the touching instance whose
    tangency points lie on the chain edge-lines."""
    c = spec.conic
    k = [polar(c, p) for p in spec.p]
    l = [polar(c, q) for q in spec.q]
    try:
        grid = LineGrid(k, l)
    except NonGenericLines as exc:
        raise NonGenericChain(str(exc)) from exc
    kk, ll = spec.chain_lines()
    assignment = TouchingAssignment(grid.net)
    for i in range(grid.m):
        for j in range(grid.n):
            cell = grid.net.cell(i, j)
            pts = {
                "uv": meet(kk[i], l[j]),
                "vw": meet(k[i + 1], ll[j]),
                "wx": meet(kk[i], l[j + 1]),
                "xu": meet(k[i], ll[j]),
            }
            if not ceva_common_point_check(cell, pts["uv"], pts["vw"], pts["wx"], pts["xu"]):
                raise AssertionError(f"chain tangency points of cell {(i, j)} fail the Ceva check")
            ic = inscribed_through(cell, pts["uv"], "uv")
            for e, pt in pts.items():
                if ic.tangency[e] != pt:
                    raise AssertionError(f"cell {(i, j)} edge {e} disagrees with the chain construction")
            assignment.add(i, j, ic)
    if not assignment.consistent():
        raise AssertionError("chain construction produced non-touching conics")
    return grid, assignment


# --- strips, cross-axes and the common conic -----------------------------

@dataclass(frozen=True)
class StripReport:
    """Per-strip verdicts (``None`` when a strip has fewer than two cells)."""

    k: tuple
    l: tuple

    @property
    def ok(self) -> bool:
        values = [v for v in self.k + self.l if v is not None]
        return bool(values) and all(values)

    def to_json(self) -> dict:
        return {"ok": self.ok, "k_strips": list(self.k), "l_strips": list(self.l)}


def _strip_ok(points: list, a: ProjLine, b: ProjLine):
    if len(points) < 2:
        return None
    if len(points) >= 3 and not collinear(points):
        return False
    try:
        axis = join(points[0], points[1])
    except CoincidentPoints:
        return False
    return not incident(meet(a, b), axis)


def strip_collinearity_check(grid: LineGrid) -> StripReport:
    r = diagonal_points(grid)
    ks = tuple(
        _strip_ok([r[(i, j)] for j in range(1, grid.n + 1)], grid.k[i - 1], grid.k[i]) for i in range(1, grid.m + 1)
    )
    ls = tuple(
        _strip_ok([r[(i, j)] for i in range(1, grid.m + 1)], grid.l[j - 1], grid.l[j]) for j in range(1, grid.n + 1)
    )
    return StripReport(ks, ls)


@dataclass(frozen=True)
class CommonConic:
    conic: Conic
    p: tuple
    q: tuple

    def to_json(self) -> dict:
        return {
            "conic": self.conic.to_json(),
            "p": [x.to_json() for x in self.p],
            "q": [x.to_json() for x in self.q],
        }


def common_tangent_conic(grid: LineGrid) -> CommonConic:
    """The conic touching every grid line, with tangency points computed both
    as poles and on the cross-axes of the strips."""
    lines = grid.lines()
    if len(lines) < 5:
        raise NonGenericLines("at least five grid lines are needed")
    try:
        dual = fit_dual_conic(lines[:5])
    except NonGenericLines as exc:
        raise NoCommonConic("the first five lines do not fix a dual conic") from exc
    if dual.rank < 3:
        raise NoCommonConic("the fitted dual conic is degenerate", detail="DegenerateConic")
    c = Conic(la.adj3(dual.matrix))
    for n, line in enumerate(lines):
        if not is_tangent(c, line):
            raise NoCommonConic(f"grid line {n} is not tangent to the conic through the first five")
    p = tuple(pole(c, x) for x in grid.k)
    q = tuple(pole(c, x) for x in grid.l)
    r = diagonal_points(grid)
    if grid.n >= 2:
        for i in range(1, grid.m + 1):
            axis = join(r[(i, 1)], r[(i, 2)])
            if meet(grid.k[i - 1], axis) != p[i - 1] or meet(grid.k[i], axis) != p[i]:
                raise AssertionError("pole and cross-axis tangency points disagree")
    if grid.m >= 2:
        for j in range(1, grid.n + 1):
            axis = join(r[(1, j)], r[(2, j)])
            if meet(grid.l[j - 1], axis) != q[j - 1] or meet(grid.l[j], axis) != q[j]:
                raise AssertionError("pole and cross-axis tangency points disagree")
    return CommonConic(c, p, q)


# --- the six-line criteria ------------------------------------------------

@dataclass(frozen=True)
class SixLineReport:
    tangent_conic: bool
    collinear_instance: bool
    touching_instance: bool
    touching_family: bool
    concurrent_l1: bool
    concurrent_k1: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def conditions(self) -> tuple:
        return (
            self.tangent_conic,
            self.collinear_instance,
            self.touching_instance,
            self.touching_family,
            self.concurrent_l1,
            self.concurrent_k1,
        )

    @property
    def consistent(self) -> bool:
        return len(set(self.conditions)) == 1

    @property
    def verdict(self) -> bool:
        return all(self.conditions)

    def to_json(self) -> dict:
        names = ("i", "ii", "iii", "iv", "v", "vi")
        return {
            "conditions": dict(zip(names, self.conditions)),
            "consistent": self.consistent,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
        }


def _seed_candidates(cell) -> list:
    """Deterministic non-vertex points on edge ``uv`` of a cell."""
    u, v = cell.u.normal_form(), cell.v.normal_form()
    weights = [1, 2, 3, Fraction(1, 2), -2, Fraction(1, 3), -3, 5, Fraction(-1, 3), 7]
    out = []
    for s in weights:
        s = s if is_exact(*u, *v) else float(s)
        out.append(ProjPoint(*la.add(u, la.scale(s, v))))
    return out


def _successful_propagations(net: QNet, wanted: int) -> list:
    found = []
    for seed in _seed_candidates(net.cell(0, 0)):
        try:
            found.append(propagate_touching(net, seed, "uv"))
        except ClosureFailure:
            return found
        except (DegenerateFamilyMember, DegenerateInput, PointOnWrongEdge):
            continue
        if len(found) == wanted:
            break
    return found


def six_line_report(k0, k1, k2, l0, l1, l2) -> SixLineReport:
    lines = [k0, k1, k2, l0, l1, l2]
    if not is_generic(lines):
        raise NonGenericLines("the six lines must be generic")
    grid = LineGrid([k0, k1, k2], [l0, l1, l2])
    r = diagonal_points(grid)

    # (i) the five-line conic also touches the sixth line
    c5 = conic_tangent_to_five_lines([k0, k1, k2, l0, l1])
    cond_i = is_tangent(c5, l2)

    # (ii) the instance with tangency points on the lines through the r-points
    cond_ii = True
    try:
        kk = (join(r[(1, 1)], r[(1, 2)]), join(r[(2, 1)], r[(2, 2)]))
        ll = (join(r[(1, 1)], r[(2, 1)]), join(r[(1, 2)], r[(2, 2)]))
        for i in range(2):
            for j in range(2):
                cell = grid.net.cell(i, j)
                pts = (
                    meet(kk[i], grid.l[j]),
                    meet(grid.k[i + 1], ll[j]),
                    meet(kk[i], grid.l[j + 1]),
                    meet(grid.k[i], ll[j]),
                )
                if not ceva_common_point_check(cell, *pts):
                    cond_ii = False
    except (CoincidentPoints, CoincidentLines, DegenerateInput, PointOnWrongEdge):
        cond_ii = False

    # (iii) and (iv) by propagation from deterministic seeds
    runs = _successful_propagations(grid.net, 2)
    cond_iii = bool(runs)
    cond_iv = len(runs) == 2 and vertex_loop(grid.net, 1, 1).monodromy().is_identity()

    # (v) and (vi) concurrency
    cond_v = concurrent([join(r[(1, 1)], r[(2, 1)]), join(r[(1, 2)], r[(2, 2)]), l1])
    cond_vi = concurrent([join(r[(1, 1)], r[(1, 2)]), join(r[(2, 1)], r[(2, 2)]), k1])

    witnesses = {"r": {f"{i},{j}": pt.to_json() for (i, j), pt in sorted(r.items())}}
    if cond_i:
        witnesses["conic"] = c5.to_json()
    return SixLineReport(cond_i, cond_ii, cond_iii, cond_iv, cond_v, cond_vi, witnesses)


def grid_six_line_reports(grid: LineGrid) -> dict:
    """:func:`six_line_report` on every 2x2 sub-grid."""
    out = {}
    for i in range(grid.m - 1):
        for j in range(grid.n - 1):
            out[(i, j)] = six_line_report(*grid.k[i: i + 3], *grid.l[j: j + 3])
    return out


# --- strip conics ---------------------------------------------------------

@dataclass(frozen=True)
class StripConics:
    a: tuple
    b: tuple
    a_contact: tuple
    b_contact: tuple

    def to_json(self) -> dict:
        def contact(dc: DoubleContact):
            return {"chord": dc.chord.to_json(), "real_contact": dc.real_contact}

        return {
            "A": [c.to_json() for c in self.a],
            "B": [c.to_json() for c in self.b],
            "A_rank": [c.rank for c in self.a],
            "B_rank": [c.rank for c in self.b],
            "A_contact": [contact(d) for d in self.a_contact],
            "B_contact": [contact(d) for d in self.b_contact],
        }


def _strip_conic(p0, p1, t0: ProjLine, t1: ProjLine, points: list, base: Conic) -> tuple:
    if collinear([p0, p1] + points):
        line = join(p0, p1)
        conic = Conic([[a * b for b in line.coords] for a in line.coords])
    else:
        try:
            conic = conic_through([p1, points[0], points[1]], [(p0, t0)])
        except DegenerateConic as exc:
            raise InconsistentStrip(f"strip conic not determined: {exc}") from exc
        for x in points[2:]:
            if not on_conic(conic, x):
                raise InconsistentStrip(f"{x} is off the strip conic")
        tangent = la.matvec(conic.matrix, p1.coords)
        if all(vanishes(v, conic.scale * norm(p1.coords)) for v in tangent) or ProjLine(*tangent) != t1:
            raise InconsistentStrip("strip conic is not tangent to the second strip line")
    contact = double_contact(conic, base)
    if contact is None:
        raise InconsistentStrip("strip conic has no double contact with the common conic")
    return conic, contact


def strip_conics(grid: LineGrid, assignment: TouchingAssignment, common: CommonConic) -> StripConics:
    a, ac, b, bc = [], [], [], []
    for i in range(1, grid.m + 1):
        pts = [assignment.edges[((i - 1, j), (i, j))] for j in range(grid.n + 1)]
        conic, contact = _strip_conic(common.p[i - 1], common.p[i], grid.k[i - 1], grid.k[i], pts, common.conic)
        a.append(conic)
        ac.append(contact)
    for j in range(1, grid.n + 1):
        pts = [assignment.edges[((i, j - 1), (i, j))] for i in range(grid.m + 1)]
        conic, contact = _strip_conic(common.q[j - 1], common.q[j], grid.l[j - 1], grid.l[j], pts, common.conic)
        b.append(conic)
        bc.append(contact)
    return StripConics(tuple(a), tuple(b), tuple(ac), tuple(bc))


def distinguished_assignment(grid: LineGrid, common: CommonConic) -> TouchingAssignment:
    """The touching instance whose strip conics are all double lines."""
    seed = meet(join(common.p[0], common.p[1]), grid.l[0])
    return propagate_touching(grid.net, seed, "uv")


__all__ = [
    "ChainSpec",
    "CommonConic",
    "LineGrid",
    "SixLineReport",
    "StripConics",
    "StripReport",
    "common_tangent_conic",
    "diagonal_points",
    "distinguished_assignment",
    "edge_key",
    "find_rational_point",
    "grid_from_chains",
    "grid_six_line_reports",
    "random_conic_through",
    "six_line_report",
    "strip_collinearity_check",
    "strip_conics",
]
