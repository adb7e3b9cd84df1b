"""Quadrilaterals and the one-parameter family of their inscribed conics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import _linalg as la
from .conics import Conic
from .errors import (
    DegenerateFamilyMember,
    DegenerateInput,
    NonGenericQuadrilateral,
    PointAtVertex,
    PointNotOnEdge,
    ZeroGamma,
    ZeroLambda,
)
from .projective import (
    ProjLine,
    ProjPoint,
    ceva_check,
    ceva_complete,
    collinear,
    decompose,
    incident,
    is_generic,
    join,
    meet,
)
from .scalar import coerce, format_scalar, vanishes

EDGES = ("uv", "vw", "wx", "xu")


class Quadrilateral:
    """Four vertices ``u, v, w, x`` in cyclic order with generic edge-lines."""

    __slots__ = ("u", "v", "w", "x", "_lines")

    def __init__(self, u: ProjPoint, v: ProjPoint, w: ProjPoint, x: ProjPoint):
        verts = (u, v, w, x)
        for i in range(4):
            for j in range(i + 1, 4):
                if verts[i] == verts[j]:
                    raise NonGenericQuadrilateral("vertices must be distinct")
        lines = tuple(join(verts[i], verts[(i + 1) % 4]) for i in range(4))
        if not is_generic(lines):
            raise NonGenericQuadrilateral("three of the edge-lines are concurrent")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "_lines", dict(zip(EDGES, lines)))

    def __setattr__(self, name, value):
        raise AttributeError("Quadrilateral is immutable")

    def __eq__(self, other):
        if not isinstance(other, Quadrilateral):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Quadrilateral{self.vertices!r}"

    @property
    def vertices(self) -> tuple:
        return (self.u, self.v, self.w, self.x)

    def edge_line(self, edge: str) -> ProjLine:
        return self._lines[edge]

    def edge_endpoints(self, edge: str) -> tuple:
        a, b = edge
        return getattr(self, a), getattr(self, b)

    @property
    def edge_lines(self) -> dict:
        return dict(self._lines)

    def diagonals(self) -> tuple:
        return join(self.u, self.w), join(self.v, self.x)


def diagonal_intersection(q: Quadrilateral) -> ProjPoint:
    d1, d2 = q.diagonals()
    return meet(d1, d2)


@dataclass(frozen=True)
class NormalizedQuad:
    """Representative vectors with ``x = gamma*u - v + gamma*w``.

    ``u`` and ``v`` are the normal forms of the vertices; ``w`` and ``x`` are
    rescaled so that ``u + w`` and ``v + x`` both represent the diagonal
    point.
    """

    quad: Quadrilateral
    u: tuple
    v: tuple
    w: tuple
    x: tuple
    gamma: object
    r: ProjPoint

    def to_json(self) -> dict:
        return {
            "u": [format_scalar(c) for c in self.u],
            "v": [format_scalar(c) for c in self.v],
            "w": [format_scalar(c) for c in self.w],
            "x": [format_scalar(c) for c in self.x],
            "gamma": format_scalar(self.gamma),
        }


def normalize(q: Quadrilateral) -> NormalizedQuad:
    r = diagonal_intersection(q)
    u = q.u.normal_form()
    v = q.v.normal_form()
    w0 = q.w.normal_form()
    x0 = q.x.normal_form()
    alpha, beta = decompose(r, q.u, q.w, reps=(u, w0))
    mu, nu = decompose(r, q.v, q.x, reps=(v, x0))
    w = la.scale(beta / alpha, w0)
    x = la.scale(nu / mu, x0)
    gamma = alpha / mu
    return NormalizedQuad(q, u, v, w, x, gamma, r)


def rescaled(nq: NormalizedQuad, factor) -> NormalizedQuad:
    """Same quadrilateral with ``v`` and ``x`` multiplied by ``factor``.

    The relation becomes ``x' = gamma' u - v' + gamma' w`` with
    ``gamma' = factor * gamma``.
    """
    if factor == 0:
        raise ZeroLambda("rescaling factor must be nonzero")
    return NormalizedQuad(
        nq.quad, nq.u, la.scale(factor, nq.v), nq.w, la.scale(factor, nq.x), factor * nq.gamma, nq.r
    )


def degenerate_parameter(nq: NormalizedQuad):
    """The single ``lam`` whose family member collapses to a double line."""
    return -1 / nq.gamma


@dataclass(frozen=True)
class InscribedConic:
    """An inscribed conic with its tangency points keyed by edge label."""

    conic: Conic
    tangency: Mapping[str, ProjPoint]
    lam: object
    nq: NormalizedQuad = field(repr=False)

    @property
    def quad(self) -> Quadrilateral:
        return self.nq.quad

    def point(self, edge: str) -> ProjPoint:
        return self.tangency[edge]

    def to_json(self) -> dict:
        return {
            "conic": self.conic.to_json(),
            "tangency": {e: self.tangency[e].to_json() for e in EDGES},
            "lambda": format_scalar(self.lam),
        }


def family_tangency_points(nq: NormalizedQuad, lam) -> dict:
    u, v, w, x = nq.u, nq.v, nq.w, nq.x
    lv, lx = la.scale(lam, v), la.scale(lam, x)
    return {
        "uv": ProjPoint(*la.add(u, lv)),
        "vw": ProjPoint(*la.add(lv, w)),
        "wx": ProjPoint(*la.add(w, lx)),
        "xu": ProjPoint(*la.add(lx, u)),
    }


def _form_in_basis(basis_columns, gram) -> Conic:
    """The point form whose Gram matrix in the given basis is ``gram``."""
    b = la.transpose(basis_columns)
    inv = la.adj3(b)  # proportional to b^-1
    return Conic(la.matmul(la.matmul(la.transpose(inv), gram), inv))


def family_member(nq: NormalizedQuad, lam) -> InscribedConic:
    lam = coerce((lam,))[0]
    if vanishes(lam, 1.0):
        raise ZeroLambda("the family parameter must be nonzero")
    g_resc = lam * nq.gamma
    if vanishes(1 + g_resc, 1.0):
        raise DegenerateFamilyMember("tangency points are collinear; the member is a double line")
    g = -(g_resc + 2) / g_resc
    one = 1 + 0 * g
    gram = ((one, -one, g), (-one, one, -one), (g, -one, one))
    conic = _form_in_basis((nq.u, la.scale(lam, nq.v), nq.w), gram)
    if conic.rank < 3:
        raise DegenerateFamilyMember("inscribed conic is degenerate")
    return InscribedConic(conic, family_tangency_points(nq, lam), lam, nq)


def _parameter_from_point(nq: NormalizedQuad, t: ProjPoint, edge: str):
    q = nq.quad
    a_pt, b_pt = q.edge_endpoints(edge)
    if not incident(t, q.edge_line(edge)):
        raise PointNotOnEdge(f"{t} is not on edge-line {edge}")
    if t == a_pt or t == b_pt:
        raise PointAtVertex(f"{t} is a vertex of edge {edge}")
    reps = {"u": nq.u, "v": nq.v, "w": nq.w, "x": nq.x}
    a, b = decompose(t, a_pt, b_pt, reps=(reps[edge[0]], reps[edge[1]]))
    # uv and wx carry [first + lam*second]; vw and xu carry [lam*first + second]
    return b / a if edge in ("uv", "wx") else a / b


def ceva_chain(q: Quadrilateral, t_uv: ProjPoint, r: ProjPoint | None = None) -> dict:
    """Complete a tangency point on ``uv`` to four points via Ceva configurations
    through the diagonal point."""
    r = diagonal_intersection(q) if r is None else r
    u, v, w, x = q.vertices
    try:
        t_vw = ceva_complete((w, u, v), r, t_uv)
        t_wx = ceva_complete((x, v, w), r, t_vw)
        t_xu = ceva_complete((u, w, x), r, t_wx)
    except DegenerateInput as exc:
        raise DegenerateFamilyMember(f"Ceva chain degenerates: {exc}") from exc
    return {"uv": t_uv, "vw": t_vw, "wx": t_wx, "xu": t_xu}


def inscribed_through(q: Quadrilateral, t: ProjPoint, edge: str = "uv") -> InscribedConic:
    """The inscribed conic touching edge ``edge`` at ``t``."""
    nq = normalize(q)
    lam = _parameter_from_point(nq, t, edge)
    member = family_member(nq, lam)
    chain = ceva_chain(q, member.tangency["uv"], nq.r)
    for e in EDGES:
        if chain[e] != member.tangency[e]:
            raise AssertionError(f"Ceva chain and parametrization disagree on edge {e}")
    return member


def ceva_common_point_check(q: Quadrilateral, p_uv, p_vw, p_wx, p_xu) -> bool:
    r = diagonal_intersection(q)
    u, v, w, x = q.vertices
    return (
        ceva_check((u, v, w), p_uv, p_vw, r)
        and ceva_check((v, w, x), p_vw, p_wx, r)
        and ceva_check((w, x, u), p_wx, p_xu, r)
        and ceva_check((x, u, v), p_xu, p_uv, r)
    )


def involution(ic: InscribedConic) -> InscribedConic:
    """The partner member ``-lam``, cross-checked against its line construction."""
    nq, q = ic.nq, ic.quad
    image = family_member(nq, -ic.lam)
    r = nq.r
    through_q = join(ic.tangency["xu"], r)
    through_p = join(ic.tangency["uv"], r)
    expected = {
        "uv": meet(through_q, q.edge_line("uv")),
        "wx": meet(through_q, q.edge_line("wx")),
        "xu": meet(through_p, q.edge_line("xu")),
        "vw": meet(through_p, q.edge_line("vw")),
    }
    for e in EDGES:
        if expected[e] != image.tangency[e]:
            raise AssertionError(f"involution construction disagrees on edge {e}")
    return image


def _psi_gram(lam, gamma) -> tuple:
    l2 = lam * lam
    uu, vv, ww = 1 + 0 * l2, 1 / l2, 1 + 0 * l2
    uv = -1 / lam
    uw = -(l2 + 2 * l2 * gamma + 2 * lam + 1) / (2 * l2 * gamma)
    vw = -(l2 + 1) / (2 * l2)
    return ((uu, uv, uw), (uv, vv, vw), (uw, vw, ww))


def second_tangent_conic(nq: NormalizedQuad, lam, target: str = "uv_wx") -> Conic:
    """Conic through two opposite tangency points of member ``lam`` and two
    points of the partner configuration, tangent to two opposite edge-lines.

    ``target="uv_wx"`` passes through ``[u+lam v]``, ``[w+lam x]``,
    ``[x+u]``, ``[v+w]`` and touches edge-lines ``uv`` and ``wx``;
    ``target="vw_xu"`` is the same construction after relabelling
    ``(u, v, w, x) -> (w, v, u, x)``.
    """
    lam = coerce((lam,))[0]
    if vanishes(lam, 1.0):
        raise ZeroLambda("the family parameter must be nonzero")
    if vanishes(nq.gamma, 1.0):
        raise ZeroGamma("gamma must be nonzero")
    if target == "uv_wx":
        basis = (nq.u, nq.v, nq.w)
    elif target == "vw_xu":
        basis = (nq.w, nq.v, nq.u)
    else:
        raise ValueError(f"unknown target {target!r}")
    return _form_in_basis(basis, _psi_gram(lam, nq.gamma))


def second_tangent_points(nq: NormalizedQuad, lam, target: str = "uv_wx") -> tuple:
    """The four points and two edge labels that define :func:`second_tangent_conic`."""
    u, v, w, x = nq.u, nq.v, nq.w, nq.x
    if target == "vw_xu":
        u, w = w, u
        edges = ("vw", "xu")
    else:
        edges = ("uv", "wx")
    pts = (
        ProjPoint(*la.add(u, la.scale(lam, v))),
        ProjPoint(*la.add(w, la.scale(lam, x))),
        ProjPoint(*la.add(x, u)),
        ProjPoint(*la.add(v, w)),
    )
    return pts, edges


def tangency_residuals(ic: InscribedConic) -> list:
    """Residuals of the eight defining identities: each point on the conic and
    each polar equal to its edge-line (cross product of coefficient vectors)."""
    out = []
    for e in EDGES:
        p = ic.tangency[e]
        out.append(ic.conic.form(p.coords, p.coords))
        polar_coeffs = la.matvec(ic.conic.matrix, p.coords)
        out.extend(la.cross(polar_coeffs, ic.quad.edge_line(e).coords))
    return out


def is_vertex_free(ic: InscribedConic) -> bool:
    return all(
        ic.tangency[e] not in ic.quad.edge_endpoints(e) and collinear([*ic.quad.edge_endpoints(e), ic.tangency[e]])
        for e in EDGES
    )
