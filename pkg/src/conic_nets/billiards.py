"""Billiards in an ellipse with a confocal caustic and the incircular nets
formed by two such trajectories.  Everything here runs on floats."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _linalg as la
from .conics import Conic, ConfocalFamily, dual_value, is_tangent, on_conic, polar, tangent_lines_from_point
from .errors import NoIncircle, NotTangentChord, ParameterOutOfRange, TangentDegeneracy
from .grids import LineGrid
from .projective import ProjLine, ProjPoint, join, meet
from .scalar import get_eps, norm

INCIRCLE_TOL = 1e-8


def billiard_table(a2, b2, caustic_lam) -> tuple[Conic, Conic]:
    """Boundary (member 0) and caustic (member ``caustic_lam``) of one family."""
    fam = ConfocalFamily(float(a2), float(b2))
    lam = float(caustic_lam)
    if not 0 < lam < fam.b2:
        raise ParameterOutOfRange("the caustic parameter must lie strictly between 0 and b2")
    return fam.member(0.0), fam.member(lam)


def _affine(p: ProjPoint) -> tuple:
    a = p.affine()
    if a is None:
        raise ValueError(f"{p} is at infinity")
    return (float(a[0]), float(a[1]))


def _direction(l: ProjLine) -> tuple:
    a, b, _ = l.coords
    n = math.hypot(a, b)
    return (b / n, -a / n)


def _line_angle(l1: ProjLine, l2: ProjLine) -> float:
    d1, d2 = _direction(l1), _direction(l2)
    c = abs(d1[0] * d2[0] + d1[1] * d2[1])
    return math.acos(min(1.0, c))


def _second_intersection(d: Conic, p: tuple, direction: tuple) -> tuple:
    """The other point where the line ``p + mu*direction`` meets ``d``."""
    ph = (p[0], p[1], 1.0)
    dh = (direction[0], direction[1], 0.0)
    mu = -2 * d.form(ph, dh) / d.form(dh, dh)
    return (p[0] + mu * direction[0], p[1] + mu * direction[1])


def tangency_residual(c: Conic, l: ProjLine) -> float:
    """Scale-free size of the dual form on a line (zero iff tangent)."""
    dual_norm = la.frobenius(c.dual)
    return abs(float(dual_value(c, l))) / (dual_norm * norm(l.coords) ** 2)


def billiard_step(d: Conic, c: Conic, p_prev: ProjPoint, p: ProjPoint) -> ProjPoint:
    """Next bounce: leave ``p`` along the other tangent from ``p`` to the caustic."""
    d, c = d.approx(), c.approx()
    p_prev, p = p_prev.approx(), p.approx()
    incoming = join(p_prev, p)
    if tangency_residual(c, incoming) > 1e3 * get_eps():
        raise NotTangentChord("incoming chord is not tangent to the caustic")
    tangents = list(tangent_lines_from_point(c, p))
    if len(tangents) < 2 or _line_angle(tangents[0], tangents[1]) < 10 * get_eps():
        raise TangentDegeneracy(f"the two tangents from {p} to the caustic coincide")
    outgoing = max(tangents, key=lambda t: _line_angle(t, incoming))
    nxt = _second_intersection(d, _affine(p), _direction(outgoing))
    return ProjPoint(*nxt)


def reflection_step(d: Conic, p_prev: ProjPoint, p: ProjPoint) -> ProjPoint:
    """Next bounce by the reflection law at ``p``; independent of the caustic."""
    d = d.approx()
    a, b = _affine(p_prev.approx()), _affine(p.approx())
    v = (b[0] - a[0], b[1] - a[1])
    t = _direction(polar(d, p.approx()))
    s = v[0] * t[0] + v[1] * t[1]
    reflected = (2 * s * t[0] - v[0], 2 * s * t[1] - v[1])
    return ProjPoint(*_second_intersection(d, b, reflected))


@dataclass(frozen=True)
class BilliardTrajectory:
    boundary: Conic
    caustic: Conic
    points: tuple
    closed: bool
    max_tangency_residual: float
    max_stepper_gap: float

    @property
    def chords(self) -> tuple:
        return tuple(join(self.points[i - 1], self.points[i]) for i in range(1, len(self.points)))

    def to_json(self) -> dict:
        return {
            "boundary": self.boundary.to_json(),
            "caustic": self.caustic.to_json(),
            "points": [list(_affine(p)) for p in self.points],
            "closed": self.closed,
            "max_tangency_residual": self.max_tangency_residual,
            "max_stepper_gap": self.max_stepper_gap,
        }


def _point_gap(p: ProjPoint, q: ProjPoint) -> float:
    a, b = _affine(p), _affine(q)
    return math.hypot(a[0] - b[0], a[1] - b[1])


def trajectory(d: Conic, c: Conic, p0: ProjPoint, choice: int = 1, steps: int = 3, closure_tol: float = 1e-9) -> BilliardTrajectory:
    """Iterate :func:`billiard_step` from ``p0``.

    ``choice=+1`` starts along the tangent whose first bounce turns
    counter-clockwise about the origin, ``-1`` along the other one.
    """
    d, c, p0 = d.approx(), c.approx(), p0.approx()
    if not on_conic(d, p0):
        raise ValueError("the starting point must lie on the boundary")
    tangents = list(tangent_lines_from_point(c, p0))
    if len(tangents) < 2:
        raise TangentDegeneracy("starting point lies on the caustic")
    a0 = _affine(p0)
    candidates = []
    for t in tangents:
        q = _second_intersection(d, a0, _direction(t))
        turn = a0[0] * q[1] - a0[1] * q[0]
        candidates.append((turn, ProjPoint(*q)))
    candidates.sort(key=lambda item: item[0])
    pts = [p0, candidates[-1][1] if choice > 0 else candidates[0][1]]
    gap = 0.0
    for _ in range(steps - 1):
        nxt = billiard_step(d, c, pts[-2], pts[-1])
        gap = max(gap, _point_gap(nxt, reflection_step(d, pts[-2], pts[-1])))
        pts.append(nxt)
    residual = max(tangency_residual(c, join(pts[i - 1], pts[i])) for i in range(1, len(pts)))
    closed = _point_gap(pts[-1], pts[0]) <= closure_tol * max(1.0, norm(a0))
    return BilliardTrajectory(d, c, tuple(pts), closed, residual, gap)


def start_point(a2, b2, angle: float) -> ProjPoint:
    """The boundary point ``(a cos t, b sin t)``."""
    return ProjPoint(math.sqrt(float(a2)) * math.cos(angle), math.sqrt(float(b2)) * math.sin(angle))


# --- incircular nets ------------------------------------------------------

@dataclass(frozen=True)
class Incircle:
    center: tuple
    radius: float
    spread: float
    predicted: tuple
    center_error: float
    ambiguous: bool = False


@dataclass(frozen=True)
class ICNet:
    boundary: Conic
    caustic: Conic
    traj_a: BilliardTrajectory
    traj_b: BilliardTrajectory
    incircles: dict

    @property
    def a_lines(self) -> tuple:
        return self.traj_a.chords

    @property
    def b_lines(self) -> tuple:
        return self.traj_b.chords

    def max_spread(self) -> float:
        return max((ic.spread for ic in self.incircles.values()), default=0.0)

    def max_center_error(self) -> float:
        return max((ic.center_error for ic in self.incircles.values()), default=0.0)

    def to_json(self) -> dict:
        return {
            "cells": {
                f"{i},{j}": {
                    "center": list(ic.center),
                    "radius": ic.radius,
                    "spread": ic.spread,
                    "center_error": ic.center_error,
                    "ambiguous": ic.ambiguous,
                }
                for (i, j), ic in sorted(self.incircles.items())
            },
            "max_spread": self.max_spread(),
            "max_center_error": self.max_center_error(),
        }


def _unit_line(l: ProjLine) -> tuple:
    a, b, c = (float(x) for x in l.coords)
    n = math.hypot(a, b)
    return (a / n, b / n, c / n)


def _distance(l: tuple, p: tuple) -> float:
    return abs(l[0] * p[0] + l[1] * p[1] + l[2])


def _bisectors(l1: tuple, l2: tuple) -> list:
    return [la.add(l1, l2), la.sub(l1, l2)]


def incircle_candidates(lines: list) -> list:
    """Circles touching four lines, from intersections of angle bisectors.

    Returns ``(center, radius, spread)`` triples sorted by ``spread``, the
    relative excess ``max/min - 1`` of the four distances.
    """
    unit = [_unit_line(l) for l in lines]
    out = []
    for b1 in _bisectors(unit[0], unit[1]):
        for b2 in _bisectors(unit[2], unit[3]):
            h = la.cross(b1, b2)
            if abs(h[2]) <= 1e-14 * norm(h):
                continue
            centre = (h[0] / h[2], h[1] / h[2])
            dist = [_distance(u, centre) for u in unit]
            if min(dist) <= 0:
                continue
            out.append((centre, sum(dist) / 4, max(dist) / min(dist) - 1))
    return sorted(out, key=lambda c: c[2])


def incircle(lines: list, hint: tuple | None = None) -> tuple:
    """The circle touching four lines, as ``(center, radius, spread, ambiguous)``.

    Several candidates can be within :data:`INCIRCLE_TOL` (on a circular
    table the caustic touches every chord); then the one nearest ``hint`` is
    taken and ``ambiguous`` is set.
    """
    cands = incircle_candidates(lines)
    if not cands:
        raise NoIncircle("no finite bisector intersection")
    good = [c for c in cands if c[2] <= INCIRCLE_TOL]
    if len(good) < 2:
        return (*cands[0], False)
    if hint is not None:
        good.sort(key=lambda c: math.hypot(c[0][0] - hint[0], c[0][1] - hint[1]))
    return (*good[0], True)


def ic_net_build(traj_a: BilliardTrajectory, traj_b: BilliardTrajectory) -> ICNet:
    """Incircles of the cells bounded by consecutive chords of two trajectories.

    Cell ``(i, j)`` (``1 <= i < len(a)``, ``1 <= j < len(b)``) is bounded by
    chords ``a_i, a_{i+1}`` (meeting at ``p_i``) and ``b_j, b_{j+1}``.  Its
    incircle centre is compared with the intersection of the boundary
    tangents at ``p_i`` and ``q_j``.
    """
    if traj_a.boundary != traj_b.boundary or traj_a.caustic != traj_b.caustic:
        raise NoIncircle("trajectories do not share boundary and caustic")
    d = traj_a.boundary
    a, b = traj_a.chords, traj_b.chords
    cells = {}
    for i in range(1, len(a)):
        for j in range(1, len(b)):
            predicted = _affine(meet(polar(d, traj_a.points[i]), polar(d, traj_b.points[j])))
            centre, radius, spread, ambiguous = incircle([a[i - 1], a[i], b[j - 1], b[j]], predicted)
            if spread > INCIRCLE_TOL:
                raise NoIncircle(f"cell {(i, j)}: tangent distances differ by {spread:.3e}")
            err = math.hypot(centre[0] - predicted[0], centre[1] - predicted[1]) / max(1.0, math.hypot(*predicted))
            cells[(i, j)] = Incircle(centre, radius, spread, predicted, err, ambiguous)
    return ICNet(d, traj_a.caustic, traj_a, traj_b, cells)


def dual_touching_grid(net: ICNet, tol: float = INCIRCLE_TOL) -> LineGrid:
    """Boundary tangents at the interior bounce points; vertices are the incircle centres."""
    d = net.boundary
    k = [polar(d, p) for p in net.traj_a.points[1:-1]]
    l = [polar(d, q) for q in net.traj_b.points[1:-1]]
    for line in k + l:
        if not is_tangent(d, line):
            raise AssertionError("dual grid line is not tangent to the boundary")
    for (i, j), ic in net.incircles.items():
        vertex = _affine(meet(k[i - 1], l[j - 1]))
        if math.hypot(vertex[0] - ic.center[0], vertex[1] - ic.center[1]) > tol * max(1.0, math.hypot(*vertex)):
            raise AssertionError(f"dual grid vertex {(i, j)} misses the incircle centre")
    return LineGrid(k, l)
