"""Homogeneous-coordinate primitives of the real projective plane.

Points and lines are triples up to a nonzero factor.  Equality is projective
(vanishing 2x2 minors), never "normalize then compare", so everything works
at infinity and without division.  Oriented-length products (cross ratios,
Ceva/Menelaus products) are evaluated in an affine chart chosen on the fly so
that every participating point is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from .errors import (
    CenterOnLine,
    ChartFailure,
    CoincidentLines,
    CoincidentPoints,
    DegenerateCrossRatio,
    DegenerateInput,
    NotAnEndomorphism,
    NotCollinear,
    PointAtVertex,
    PointOnWrongEdge,
)
from .scalar import close, coerce, exact_sqrt, format_scalar, get_eps, is_exact, norm, vanishes


def _primitive(coords: tuple) -> tuple:
    """Rescale rational coordinates to coprime integers (keeps the numbers small)."""
    den = math.lcm(*(c.denominator for c in coords))
    ints = [c.numerator * (den // c.denominator) for c in coords]
    g = math.gcd(*ints)
    if g == 0:
        return tuple(coords)
    return tuple(Fraction(v // g) for v in ints)


class _Homogeneous:
    __slots__ = ("coords",)

    def __init__(self, x, y=None, z=1):
        if y is None:
            values = tuple(x)
        else:
            values = (x, y, z)
        if len(values) != 3:
            raise ValueError("homogeneous coordinates need exactly three entries")
        coords = coerce(values)
        if all(c == 0 for c in coords):
            raise ValueError("homogeneous coordinates may not all vanish")
        if is_exact(*coords):
            coords = _primitive(coords)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return 3

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return proportional(self.coords, other.coords)

    def __hash__(self):
        return hash((type(self).__name__, self.normal_form()))

    def __repr__(self):
        inner = ", ".join(str(c) for c in self.normal_form())
        return f"{type(self).__name__}({inner})"

    @property
    def is_exact(self) -> bool:
        return is_exact(*self.coords)

    def normal_form(self) -> tuple:
        """Scale so the last nonzero coordinate equals 1."""
        scale = norm(self.coords)
        for c in reversed(self.coords):
            if not vanishes(c, scale):
                return tuple(x / c for x in self.coords)
        raise AssertionError("unreachable: zero coordinates")

    def to_json(self) -> list:
        return [format_scalar(c) for c in self.normal_form()]

    def approx(self):
        return type(self)(*(float(c) for c in self.coords))


class ProjPoint(_Homogeneous):
    """A point ``[x:y:z]``; ``ProjPoint(x, y)`` is the affine point ``(x, y)``."""

    __slots__ = ()

    def affine(self) -> tuple | None:
        """Affine coordinates in the standard chart, or ``None`` at infinity."""
        x, y, z = self.coords
        if vanishes(z, norm(self.coords)):
            return None
        return (x / z, y / z)


class ProjLine(_Homogeneous):
    """A line ``a x + b y + c z = 0`` given by its coefficients ``(a, b, c)``."""

    __slots__ = ()

    def contains(self, p: ProjPoint) -> bool:
        return incident(p, self)


def proportional(a: Sequence, b: Sequence) -> bool:
    """True iff the vectors are parallel (all 2x2 minors vanish)."""
    pairs = [(i, j) for i in range(len(a)) for j in range(i + 1, len(a))]
    if is_exact(*a, *b):
        return all(a[i] * b[j] == a[j] * b[i] for i, j in pairs)
    s = norm(a) * norm(b)
    return all(vanishes(a[i] * b[j] - a[j] * b[i], s) for i, j in pairs)


def incident(p: ProjPoint, l: ProjLine) -> bool:
    if p.is_exact and l.is_exact:
        return la.dot(p.coords, l.coords) == 0
    return vanishes(la.dot(p.coords, l.coords), norm(p.coords) * norm(l.coords))


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    if p == q:
        raise CoincidentPoints(f"{p} and {q} coincide")
    return ProjLine(*la.cross(p.coords, q.coords))


def meet(l: ProjLine, m: ProjLine) -> ProjPoint:
    if l == m:
        raise CoincidentLines(f"{l} and {m} coincide")
    return ProjPoint(*la.cross(l.coords, m.coords))


def _triple_vanishes(a, b, c) -> bool:
    if a.is_exact and b.is_exact and c.is_exact:
        return la.det3(a.coords, b.coords, c.coords) == 0
    return vanishes(la.det3(a.coords, b.coords, c.coords), norm(a.coords) * norm(b.coords) * norm(c.coords))


def collinear(points: Sequence[ProjPoint]) -> bool:
    """Every triple of the points has vanishing determinant."""
    points = list(points)
    if len(points) < 3:
        raise ValueError("collinearity needs at least three points")
    n = len(points)
    return all(
        _triple_vanishes(points[i], points[j], points[k])
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
    )


def concurrent(lines: Sequence[ProjLine]) -> bool:
    lines = list(lines)
    if len(lines) < 3:
        raise ValueError("concurrency needs at least three lines")
    return collinear(lines)  # same determinant test in the dual plane


def is_generic(lines: Sequence[ProjLine]) -> bool:
    """No three of the lines concurrent (coincident lines count as concurrent)."""
    lines = list(lines)
    n = len(lines)
    for i in range(n):
        for j in range(i + 1, n):
            if lines[i] == lines[j]:
                return False
            for k in range(j + 1, n):
                if _triple_vanishes(lines[i], lines[j], lines[k]):
                    return False
    return True


# --- affine charts -------------------------------------------------------

def _chart_candidates(count: int) -> Iterable[tuple]:
    yield (0, 0, 1)
    for t in range(count):
        yield (1, t, t * t)


def choose_chart(points: Sequence[ProjPoint]) -> tuple:
    """A line at infinity missing every point.

    Candidates are ``z = 0`` followed by ``(1, t, t^2)``; a point kills at most
    two candidates of the second kind, so ``2n + 1`` of them always suffice
    over the reals.  On floats the first chart keeping every point well away
    from infinity wins, falling back to the best one available.
    """
    points = list(points)
    exact = all(p.is_exact for p in points)
    best, best_score = None, -1.0
    for h in _chart_candidates(2 * len(points) + 1):
        if exact:
            if all(la.dot(h, p.coords) != 0 for p in points):
                return tuple(h)
            continue
        score = min(abs(la.dot(h, p.coords)) / (norm(h) * norm(p.coords)) for p in points)
        if score > 1e-3:
            return tuple(float(x) for x in h)
        if score > best_score:
            best, best_score = h, score
    if exact or best is None or best_score <= get_eps():
        raise ChartFailure("no affine chart renders all points finite")
    return tuple(float(x) for x in best)


def chart_coords(p: ProjPoint, chart: Sequence) -> tuple:
    """The representative of ``p`` lying on the affine plane ``<chart, .> = 1``."""
    w = la.dot(chart, p.coords)
    return tuple(c / w for c in p.coords)


def parallel_ratio(d1: Sequence, d2: Sequence):
    """``d1 / d2`` for parallel vectors."""
    return la.dot(d1, d2) / la.dot(d2, d2)


def length_ratio(m: ProjPoint, x: ProjPoint, y: ProjPoint, chart) -> object:
    """``l(M, X) / l(M, Y)`` for three collinear points in the given chart."""
    mc, xc, yc = (chart_coords(p, chart) for p in (m, x, y))
    return parallel_ratio(la.sub(xc, mc), la.sub(yc, mc))


def segment_ratio(a: ProjPoint, p: ProjPoint, b: ProjPoint, chart) -> object:
    """``l(A, P) / l(P, B)`` for three collinear points in the given chart."""
    ac, pc, bc = (chart_coords(q, chart) for q in (a, p, b))
    return parallel_ratio(la.sub(pc, ac), la.sub(bc, pc))


def cross_ratio(a: ProjPoint, p: ProjPoint, b: ProjPoint, q: ProjPoint):
    """``cr(A, P, B, Q) = l(A,P)/l(P,B) * l(B,Q)/l(Q,A)``."""
    if not collinear([a, p, b, q]):
        raise NotCollinear("cross ratio needs four collinear points")
    if p == b or q == a:
        raise DegenerateCrossRatio("a denominator of the cross ratio vanishes")
    chart = choose_chart([a, p, b, q])
    return segment_ratio(a, p, b, chart) * segment_ratio(b, q, a, chart)


def decompose(p: ProjPoint, a: ProjPoint, b: ProjPoint, reps: tuple | None = None) -> tuple:
    """Coefficients ``(alpha, beta)`` with ``p = alpha*a + beta*b``.

    ``reps`` optionally supplies the representative vectors of ``a`` and
    ``b`` to decompose against (defaults to their stored coordinates).
    """
    va, vb = reps if reps is not None else (a.coords, b.coords)
    return _decompose_vector(p.coords, va, vb, f"{p} is not on the line through {a} and {b}")


def _decompose_vector(pv, va, vb, message: str) -> tuple:
    n = la.cross(va, vb)
    nn = la.dot(n, n)
    if vanishes(nn, (norm(va) * norm(vb)) ** 2):
        raise CoincidentPoints("basis points coincide")
    alpha = la.dot(la.cross(pv, vb), n) / nn
    beta = la.dot(la.cross(va, pv), n) / nn
    residual = la.sub(pv, la.add(la.scale(alpha, va), la.scale(beta, vb)))
    if not all(vanishes(r, norm(pv)) for r in residual):
        raise NotCollinear(message)
    return alpha, beta


def harmonic_conjugate(a: ProjPoint, b: ProjPoint, p: ProjPoint) -> ProjPoint:
    """The point ``Q`` on line ``(A, B)`` with ``cr(A, P, B, Q) = -1``."""
    if a == b:
        raise CoincidentPoints("A and B coincide")
    if p == a or p == b:
        raise DegenerateInput("P coincides with A or B")
    alpha, beta = decompose(p, a, b)
    return ProjPoint(*la.sub(la.scale(alpha, a.coords), la.scale(beta, b.coords)))


# --- Ceva and Menelaus ------------------------------------------------------

def _check_edge_point(p, a, b, label):
    if not collinear([a, b, p]):
        raise PointOnWrongEdge(f"{label}={p} is not on the edge-line through {a} and {b}")
    if p == a or p == b:
        raise PointAtVertex(f"{label}={p} coincides with a vertex")


def ceva_menelaus_product(triangle: Sequence[ProjPoint], p12, p23, p31):
    """The oriented-length product shared by the theorems of Ceva and Menelaus."""
    a1, a2, a3 = triangle
    if collinear([a1, a2, a3]):
        raise DegenerateInput("triangle vertices are collinear")
    _check_edge_point(p12, a1, a2, "P12")
    _check_edge_point(p23, a2, a3, "P23")
    _check_edge_point(p31, a3, a1, "P31")
    chart = choose_chart([a1, a2, a3, p12, p23, p31])
    return (
        segment_ratio(a1, p12, a2, chart)
        * segment_ratio(a2, p23, a3, chart)
        * segment_ratio(a3, p31, a1, chart)
    )


def ceva_check(triangle, p12, p23, p31) -> bool:
    return close(ceva_menelaus_product(triangle, p12, p23, p31), 1)


def menelaus_check(triangle, p12, p23, p31) -> bool:
    return close(ceva_menelaus_product(triangle, p12, p23, p31), -1)


def ceva_complete(triangle, p12, p23) -> ProjPoint:
    """The point on edge ``(A3, A1)`` completing a Ceva configuration."""
    a1, a2, a3 = triangle
    for p, a, b, label in ((p12, a1, a2, "P12"), (p23, a2, a3, "P23")):
        try:
            _check_edge_point(p, a, b, label)
        except PointOnWrongEdge as exc:
            raise DegenerateInput(str(exc)) from exc
    try:
        centre = meet(join(a3, p12), join(a1, p23))
        return meet(join(a2, centre), join(a3, a1))
    except (CoincidentPoints, CoincidentLines) as exc:
        raise DegenerateInput("the cevians do not determine a Ceva point") from exc


# --- projectivities between lines ----------------------------------------

def line_basis(l: ProjLine) -> tuple[tuple, tuple]:
    """Two canonical points spanning ``l``: an origin and a direction.

    For an affine line the origin is the foot of the perpendicular from
    ``(0, 0)`` and the direction its point at infinity; the line at infinity
    uses ``(1:0:0)`` and ``(0:1:0)``.  Both are returned in normal form, so
    the basis only depends on the line, not on its coefficient scale.
    """
    a, b, c = l.coords
    scale = norm(l.coords)
    if vanishes(a, scale) and vanishes(b, scale):
        one, zero = (1, 0) if is_exact(a, b, c) else (1.0, 0.0)
        return (one, zero, zero), (zero, one, zero)
    origin = ProjPoint(-a * c, -b * c, a * a + b * b).normal_form()
    direction = ProjPoint(b, -a, 0 * a).normal_form()
    return origin, direction


def line_coordinates(l: ProjLine, p: ProjPoint) -> tuple:
    """Coordinates ``(s, t)`` of ``p`` in the canonical basis of ``l``."""
    b0, b1 = line_basis(l)
    return decompose(p, ProjPoint(*b0), ProjPoint(*b1), reps=(b0, b1))


def point_on_line(l: ProjLine, s, t) -> ProjPoint:
    b0, b1 = line_basis(l)
    return ProjPoint(*la.add(la.scale(s, b0), la.scale(t, b1)))


@dataclass(frozen=True)
class LineProjectivity:
    """A projective map ``source -> target`` as a 2x2 matrix on canonical bases."""

    source: ProjLine
    target: ProjLine
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.matrix)
        if is_exact(*m[0], *m[1]):
            flat = _primitive(m[0] + m[1])
            m = (flat[:2], flat[2:])
        object.__setattr__(self, "matrix", m)
        if vanishes(la.det(m), la.frobenius(m) ** 2):
            raise DegenerateInput("projectivity matrix is singular")

    @classmethod
    def identity(cls, line: ProjLine) -> "LineProjectivity":
        one, zero = (1, 0) if line.is_exact else (1.0, 0.0)
        return cls(line, line, ((one, zero), (zero, one)))

    def __call__(self, p: ProjPoint) -> ProjPoint:
        if not incident(p, self.source):
            raise NotCollinear(f"{p} is not on the source line")
        s, t = line_coordinates(self.source, p)
        s2, t2 = la.matvec(self.matrix, (s, t))
        return point_on_line(self.target, s2, t2)

    def __matmul__(self, other: "LineProjectivity") -> "LineProjectivity":
        """``self @ other`` is the composition ``self after other``."""
        if other.target != self.source:
            raise DegenerateInput("cannot compose: target and source lines differ")
        return LineProjectivity(other.source, self.target, la.matmul(self.matrix, other.matrix))

    def inverse(self) -> "LineProjectivity":
        (a, b), (c, d) = self.matrix
        return LineProjectivity(self.target, self.source, ((d, -b), (-c, a)))

    def is_identity(self) -> bool:
        (a, b), (c, d) = self.matrix
        if self.source != self.target:
            return False
        s = la.frobenius(self.matrix)
        return vanishes(b, s) and vanishes(c, s) and vanishes(a - d, s)

    def same_map(self, other: "LineProjectivity") -> bool:
        flat_a = [x for row in self.matrix for x in row]
        flat_b = [x for row in other.matrix for x in row]
        return self.source == other.source and self.target == other.target and proportional(flat_a, flat_b)

    def normalized_matrix(self) -> tuple:
        flat = [x for row in self.matrix for x in row]
        s = la.frobenius(self.matrix)
        pivot = next(x for x in reversed(flat) if not vanishes(x, s))
        return tuple(tuple(x / pivot for x in row) for row in self.matrix)


def projectivity_from_linear_map(src: ProjLine, dst: ProjLine, image) -> LineProjectivity:
    """Matrix of a map given by a linear function on homogeneous vectors."""
    b0, b1 = line_basis(src)
    d0, d1 = line_basis(dst)
    columns = []
    for b in (b0, b1):
        # the scale of the image vector matters, so decompose the raw vector
        columns.append(_decompose_vector(image(b), d0, d1, "image is not on the target line"))
    return LineProjectivity(src, dst, la.transpose(columns))


def central_projection(center: ProjPoint, src: ProjLine, dst: ProjLine) -> LineProjectivity:
    """Project ``src`` onto ``dst`` through ``center``."""
    if incident(center, src) or incident(center, dst):
        raise CenterOnLine(f"centre {center} lies on a source or target line")
    c, d = center.coords, dst.coords
    return projectivity_from_linear_map(src, dst, lambda p: la.cross(la.cross(c, p), d))


@dataclass(frozen=True)
class FixedPoints:
    """Fixed points of an endomorphism of a line.

    ``kind`` is ``"identity"`` (every point fixed), ``"points"`` (0, 1 or 2
    real fixed points listed in ``points``), ``"irrational"`` (exact backend,
    fixed points are real but irrational) or ``"complex"``.  ``quadratic``
    holds the coefficients ``(c2, c1, c0)`` of the binary form
    ``c2 s^2 + c1 s t + c0 t^2`` whose roots are the fixed points in the
    canonical line coordinates.
    """

    kind: str
    points: tuple = ()
    quadratic: tuple | None = None


def fixed_points(f: LineProjectivity) -> FixedPoints:
    if f.source != f.target:
        raise NotAnEndomorphism("source and target lines differ")
    if f.is_identity():
        return FixedPoints("identity")
    (a, b), (c, d) = f.matrix
    line = f.source
    # M(s,t) ~ (s,t)  <=>  c s^2 + (d - a) s t - b t^2 = 0
    q2, q1, q0 = c, d - a, -b
    scale = la.frobenius(f.matrix)
    disc = q1 * q1 - 4 * q2 * q0
    exact = is_exact(a, b, c, d)

    def point(s, t):
        return point_on_line(line, s, t)

    if vanishes(q2, scale):
        pts = [point(1, 0 * a)]
        if not vanishes(q1, scale):
            pts.append(point(-q0, q1))
        return FixedPoints("points", tuple(pts), (q2, q1, q0))
    if vanishes(disc, scale * scale):
        return FixedPoints("points", (point(-q1, 2 * q2),), (q2, q1, q0))
    if disc < 0:
        return FixedPoints("complex", (), (q2, q1, q0))
    root = exact_sqrt(disc) if exact else disc ** 0.5
    if root is None:
        return FixedPoints("irrational", (), (q2, q1, q0))
    return FixedPoints(
        "points",
        (point(-q1 + root, 2 * q2), point(-q1 - root, 2 * q2)),
        (q2, q1, q0),
    )
