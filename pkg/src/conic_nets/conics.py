"""Conics as symmetric bilinear forms on homogeneous coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _linalg as la
from .errors import (
    DegenerateBase,
    DegenerateConic,
    DegenerateInput,
    NonGenericLines,
    NotTangent,
    ParameterOutOfRange,
    PointInsideConic,
)
from .projective import ProjLine, ProjPoint, incident, is_generic, join, line_basis, point_on_line, proportional
from .scalar import coerce, exact_sqrt, format_scalar, is_exact, norm, vanishes

NON_DEGENERATE = "NonDegenerate"
PAIR_OF_LINES = "PairOfLines"
DOUBLE_LINE = "DoubleLine"

_COEFF_INDEX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class Conic:
    """A conic ``p^T A p = 0`` with ``A`` symmetric and nonzero.

    Rank and the adjugate (dual form) are computed lazily and cached.
    """

    __slots__ = ("matrix", "_rank", "_dual")

    def __init__(self, matrix: Sequence[Sequence]):
        rows = [list(r) for r in matrix]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("a conic needs a 3x3 matrix")
        flat = coerce(x for r in rows for x in r)
        m = tuple(tuple(flat[3 * i: 3 * i + 3]) for i in range(3))
        scale = la.frobenius(m)
        for i in range(3):
            for j in range(i + 1, 3):
                if not vanishes(m[i][j] - m[j][i], scale):
                    raise ValueError("conic matrix must be symmetric")
        if all(x == 0 for x in flat):
            raise ValueError("the zero form is not a conic")
        self.matrix = m
        self._rank = None
        self._dual = None

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> "Conic":
        """From ``[xx, xy, xz, yy, yz, zz]`` of ``xx*x^2 + xy*x*y + ...``.

        Mixed-term coefficients are halved to obtain the symmetric matrix.
        """
        if len(coeffs) != 6:
            raise ValueError("a conic needs six coefficients")
        xx, xy, xz, yy, yz, zz = coerce(coeffs)
        return cls(((xx, xy / 2, xz / 2), (xy / 2, yy, yz / 2), (xz / 2, yz / 2, zz)))

    @classmethod
    def diagonal(cls, a, b, c) -> "Conic":
        zero = 0 * coerce((a, b, c))[0]
        a, b, c = coerce((a, b, c))
        return cls(((a, zero, zero), (zero, b, zero), (zero, zero, c)))

    def coefficients(self) -> tuple:
        """Polynomial coefficients, first nonzero one scaled to 1."""
        raw = [self.matrix[i][j] * (1 if i == j else 2) for i, j in _COEFF_INDEX]
        s = norm(raw)
        pivot = next(c for c in raw if not vanishes(c, s))
        return tuple(c / pivot for c in raw)

    def to_json(self) -> list:
        return [format_scalar(c) for c in self.coefficients()]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(*r) for r in self.matrix)

    def approx(self) -> "Conic":
        return Conic([[float(x) for x in r] for r in self.matrix])

    def __eq__(self, other):
        if not isinstance(other, Conic):
            return NotImplemented
        return proportional([x for r in self.matrix for x in r], [x for r in other.matrix for x in r])

    def __hash__(self):
        return hash(self.coefficients()) if self.is_exact else hash(type(self))

    def __repr__(self):
        return f"Conic({list(self.coefficients())})"

    @property
    def rank(self) -> int:
        if self._rank is None:
            object.__setattr__(self, "_rank", la.rank(self.matrix))
        return self._rank

    @property
    def dual(self) -> tuple:
        """Adjugate of the form; acts on line coordinates."""
        if self._dual is None:
            object.__setattr__(self, "_dual", la.adj3(self.matrix))
        return self._dual

    @property
    def scale(self) -> float:
        return la.frobenius(self.matrix)

    def form(self, p: Sequence, q: Sequence):
        return la.dot(p, la.matvec(self.matrix, q))


def evaluate(c: Conic, p: ProjPoint):
    return c.form(p.coords, p.coords)


def on_conic(c: Conic, p: ProjPoint) -> bool:
    return vanishes(evaluate(c, p), c.scale * norm(p.coords) ** 2)


def polar(c: Conic, p: ProjPoint) -> ProjLine:
    coeffs = la.matvec(c.matrix, p.coords)
    if all(vanishes(x, c.scale * norm(p.coords)) for x in coeffs):
        raise DegenerateConic(f"{p} is a singular point of the conic")
    return ProjLine(*coeffs)


def pole(c: Conic, l: ProjLine) -> ProjPoint:
    if c.rank < 3:
        raise DegenerateConic("pole needs a non-degenerate conic")
    return ProjPoint(*la.matvec(c.dual, l.coords))


def dual_value(c: Conic, l: ProjLine):
    return la.dot(l.coords, la.matvec(c.dual, l.coords))


def is_tangent(c: Conic, l: ProjLine) -> bool:
    if c.rank < 3:
        raise DegenerateConic("tangency test needs a non-degenerate conic")
    return vanishes(dual_value(c, l), c.scale ** 2 * norm(l.coords) ** 2)


def tangency_point(c: Conic, l: ProjLine) -> ProjPoint:
    if not is_tangent(c, l):
        raise NotTangent(f"{l} is not tangent to the conic")
    return pole(c, l)


# --- classification -------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    """``kind`` plus, for degenerate conics, the component lines.

    ``real`` is False for a pair of complex-conjugate lines (then ``lines``
    is empty); ``singular_point`` is the vertex of a line pair.
    """

    kind: str
    lines: tuple = ()
    real: bool = True
    singular_point: ProjPoint | None = None


def _singular_point(c: Conic) -> ProjPoint:
    kernel = la.nullspace(c.matrix)
    return ProjPoint(*kernel[0])


def conic_line_intersection(c: Conic, l: ProjLine) -> tuple[str, list]:
    """Intersect a conic with a line.

    Returns ``(kind, points)`` with kind one of ``"contained"``, ``"real"``
    (one or two points), ``"complex"`` or ``"irrational"`` (exact input with
    real but irrational intersections; the points are then floats).
    """
    b0, b1 = line_basis(l)
    alpha = c.form(b0, b0)
    beta = c.form(b0, b1)
    gamma = c.form(b1, b1)
    s = c.scale
    if all(vanishes(x, s) for x in (alpha, beta, gamma)):
        return "contained", []
    # alpha s^2 + 2 beta s t + gamma t^2 = 0
    disc = beta * beta - alpha * gamma
    if vanishes(disc, s * s):
        if vanishes(alpha, s):
            return "real", [point_on_line(l, 1, 0 * beta)]
        return "real", [point_on_line(l, -beta, alpha)]
    if disc < 0:
        return "complex", []
    root = exact_sqrt(disc) if is_exact(disc) else float(disc) ** 0.5
    kind = "real"
    if root is None:
        kind = "irrational"
        alpha, beta, gamma = float(alpha), float(beta), float(gamma)
        root = float(disc) ** 0.5
        b0 = tuple(float(x) for x in b0)
        b1 = tuple(float(x) for x in b1)
    pts = []
    if not vanishes(gamma, s):
        for r in (root, -root):
            pts.append(ProjPoint(*la.add(la.scale(gamma, b0), la.scale(-beta + r, b1))))
    else:
        pts.append(ProjPoint(*b1))
        pts.append(ProjPoint(*la.add(la.scale(alpha, b1), la.scale(-2 * beta, b0))))
    return kind, pts


def classify(c: Conic) -> Classification:
    r = c.rank
    if r == 3:
        return Classification(NON_DEGENERATE)
    if r == 1:
        m = c.matrix
        s = c.scale
        i = max(range(3), key=lambda k: abs(m[k][k]))
        if vanishes(m[i][i], s):
            raise AssertionError("rank-1 symmetric matrix with zero diagonal")
        return Classification(DOUBLE_LINE, (ProjLine(*m[i]),))
    vertex = _singular_point(c)
    # a rank-2 form is a real line pair iff its adjugate is negative semidefinite
    trace = sum(c.dual[k][k] for k in range(3))
    if trace > 0 and not vanishes(trace, c.scale ** 2):
        return Classification(PAIR_OF_LINES, (), False, vertex)
    # intersect with a line that misses the vertex
    for h in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        probe = ProjLine(*h) if c.is_exact else ProjLine(*(float(x) for x in h))
        if not incident(vertex, probe):
            break
    kind, pts = conic_line_intersection(c, probe)
    if kind == "irrational":
        vertex_f = vertex.approx()
        return Classification(PAIR_OF_LINES, tuple(join(vertex_f, p) for p in pts), True, vertex)
    lines = tuple(join(vertex, p) for p in pts)
    if len(lines) == 1:
        raise AssertionError("rank-2 conic met a generic line in a double point")
    return Classification(PAIR_OF_LINES, lines, True, vertex)


# --- fitting --------------------------------------------------------------

def _quadratic_row(v: Sequence) -> list:
    """Row of monomials so that ``row . coeffs = v^T A v`` for polynomial coeffs."""
    x, y, z = v
    return [x * x, x * y, x * z, y * y, y * z, z * z]


def _bilinear_row(a: Sequence, b: Sequence) -> list:
    """Row so that ``row . coeffs = a^T A b``."""
    return [
        a[0] * b[0],
        (a[0] * b[1] + a[1] * b[0]) / 2,
        (a[0] * b[2] + a[2] * b[0]) / 2,
        a[1] * b[1],
        (a[1] * b[2] + a[2] * b[1]) / 2,
        a[2] * b[2],
    ]


def _solve_unique(rows: list, error_cls, message: str) -> tuple:
    rows = [list(coerce(r)) for r in rows]
    kernel = la.nullspace(rows)
    if len(kernel) != 1:
        raise error_cls(f"{message}: solution space has dimension {len(kernel)}")
    return kernel[0]


def conic_through(rows_points: Sequence[ProjPoint], tangencies: Sequence[tuple] = ()) -> Conic:
    """The unique conic through the given points with prescribed tangents.

    ``tangencies`` holds ``(point, line)`` pairs: the conic passes through the
    point and is tangent to the line there (two linear conditions).  Points
    listed in ``tangencies`` need not be repeated in ``rows_points``.
    """
    rows = [_quadratic_row(p.coords) for p in rows_points]
    for p, l in tangencies:
        rows.append(_quadratic_row(p.coords))
        b0, b1 = line_basis(l)
        other = b0 if not proportional(b0, p.coords) else b1
        rows.append(_bilinear_row(other, p.coords))
    coeffs = _solve_unique(rows, DegenerateConic, "conic not determined")
    return Conic.from_coefficients(coeffs)


def conic_tangent_to_five_lines(lines: Sequence[ProjLine], check_generic: bool = True) -> Conic:
    lines = list(lines)
    if len(lines) != 5:
        raise ValueError("exactly five lines are needed")
    if check_generic and not is_generic(lines):
        raise NonGenericLines("lines must be distinct with no three concurrent")
    rows = [_quadratic_row(l.coords) for l in lines]
    coeffs = _solve_unique(rows, NonGenericLines, "five lines do not fix a dual conic")
    dual = Conic.from_coefficients(coeffs)
    if dual.rank < 3:
        raise NonGenericLines("the dual conic through the five lines is degenerate")
    return Conic(la.adj3(dual.matrix))


def fit_dual_conic(lines: Sequence[ProjLine]) -> Conic:
    """The dual conic through five line-coordinate triples, possibly degenerate."""
    rows = [_quadratic_row(l.coords) for l in lines]
    return Conic.from_coefficients(_solve_unique(rows, NonGenericLines, "five lines do not fix a dual conic"))


# --- double contact -------------------------------------------------------

@dataclass(frozen=True)
class DoubleContact:
    """A rank-1 member ``a - t c`` of the pencil spanned by two conics.

    ``chord`` is the line of that member; ``real_contact`` says whether the
    chord meets ``c`` in real points.
    """

    chord: ProjLine
    t: object
    real_contact: bool


def _pencil_matrix(a: Conic, c: Conic, t) -> tuple:
    return tuple(tuple(x - t * y for x, y in zip(ra, rc)) for ra, rc in zip(a.matrix, c.matrix))


def _rank_one_line(m) -> ProjLine:
    i = max(range(3), key=lambda k: abs(m[k][k]))
    return ProjLine(*m[i])


def double_contact(a: Conic, c: Conic) -> DoubleContact | None:
    """Chord of double contact between ``a`` and non-degenerate ``c``.

    The pencil members ``a - t c`` of rank at most one have ``t`` a root of
    ``det(a - t c)`` of multiplicity at least two.  For rational forms such a
    root is a root of ``gcd(p, p')``; a double root of a rational cubic is
    itself rational, so no irrational case can arise.
    """
    if c.rank < 3:
        raise DegenerateBase("the base conic must be non-degenerate")
    if a.is_exact and c.is_exact:
        return _double_contact_exact(a, c)
    return _double_contact_approx(a, c)


def _finish_contact(a: Conic, c: Conic, m, t) -> DoubleContact | None:
    if la.rank(m) > 1 or all(vanishes(x, c.scale + a.scale) for r in m for x in r):
        return None
    chord = _rank_one_line(m)
    contact = dual_value(c, chord)
    real = contact < 0 or vanishes(contact, c.scale ** 2 * norm(chord.coords) ** 2)
    return DoubleContact(chord, t, bool(real))


def _double_contact_exact(a: Conic, c: Conic) -> DoubleContact | None:
    ts = [Fraction(k) for k in range(4)]
    values = [la.det(_pencil_matrix(a, c, t)) for t in ts]
    poly = la.poly_trim(la.interpolate(ts, values))
    if not poly:
        raise AssertionError("det(a - t c) vanished identically with c non-degenerate")
    g = la.poly_gcd(poly, la.poly_derivative(poly))
    candidates = []
    if len(g) >= 2:
        # g is monic of degree 1 or 2; degree 2 means a triple root
        if len(g) == 2:
            candidates.append(-g[0])
        else:
            candidates.append(-g[1] / 2)
    for t in candidates:
        found = _finish_contact(a, c, _pencil_matrix(a, c, t), t)
        if found is not None:
            return found
    return None


def _double_contact_approx(a: Conic, c: Conic) -> DoubleContact | None:
    am = np.asarray(a.matrix, float)
    cm = np.asarray(c.matrix, float)
    eigs = np.linalg.eigvals(np.linalg.solve(cm, am))
    tol = 1e-6 * max(1.0, float(np.max(np.abs(eigs))))
    for t in eigs:
        if abs(t.imag) > tol:
            continue
        m = _pencil_matrix(a.approx(), c.approx(), float(t.real))
        found = _finish_contact(a.approx(), c.approx(), m, float(t.real))
        if found is not None:
            return found
    return None


# --- confocal family ------------------------------------------------------

@dataclass(frozen=True)
class ConfocalFamily:
    """Conics ``x^2/(a2 - lam) + y^2/(b2 - lam) = 1``.

    ``a2 == b2`` is accepted and gives concentric circles.
    """

    a2: object
    b2: object

    def __post_init__(self):
        a2, b2 = coerce((self.a2, self.b2))
        if not b2 > 0 or a2 < b2:
            raise ParameterOutOfRange("need a2 >= b2 > 0")
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "b2", b2)

    def member(self, lam) -> Conic:
        lam = coerce((lam, self.a2))[0]
        if lam >= self.b2:
            raise ParameterOutOfRange("only ellipse members (lam < b2) are supported")
        one = 1 + 0 * lam
        return Conic.diagonal(one / (self.a2 - lam), one / (self.b2 - lam), -one)

    def foci(self) -> tuple:
        f = (float(self.a2) - float(self.b2)) ** 0.5
        return ((f, 0.0), (-f, 0.0))


def confocal_member(fam: ConfocalFamily, lam) -> Conic:
    return fam.member(lam)


# --- tangents from a point ------------------------------------------------

@dataclass(frozen=True)
class TangentLines:
    """Tangent lines from a point; ``approximate`` flags exact input whose
    tangents are irrational and were therefore returned as floats."""

    lines: tuple
    approximate: bool = False

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)

    def __getitem__(self, i):
        return self.lines[i]


def tangent_lines_from_point(c: Conic, p: ProjPoint) -> TangentLines:
    if c.rank < 3:
        raise DegenerateConic("tangents need a non-degenerate conic")
    if on_conic(c, p):
        return TangentLines((polar(c, p),))
    kind, pts = conic_line_intersection(c, polar(c, p))
    if kind in ("complex", "contained") or not pts:
        raise PointInsideConic(f"no real tangents from {p}")
    source = p.approx() if kind == "irrational" else p
    return TangentLines(tuple(join(source, t) for t in pts), kind == "irrational")


# --- rational points ------------------------------------------------------

def rational_parametrization(c: Conic, base: ProjPoint):
    """Map ``t -> point of c`` from chords through the rational point ``base``.

    Writes the chord direction as ``m(t) = e_j + t e_i`` for the two
    coordinate axes other than the first nonzero coordinate of ``base``; the
    second intersection is ``(m^T C m) s - 2 (s^T C m) m``.  ``t = None``
    returns ``base`` itself (the tangent direction limit).
    """
    if not on_conic(c, base):
        raise DegenerateInput("base point is not on the conic")
    s = base.coords
    k = next(i for i, v in enumerate(s) if v != 0)
    i, j = [a for a in range(3) if a != k]

    def param(t):
        if t is None:
            return base
        zero = 0 * s[0]
        m = [zero, zero, zero]
        m[j] = 1 + zero
        m[i] = t
        m = tuple(m) if base.is_exact else tuple(float(x) for x in m)
        q = la.sub(la.scale(c.form(m, m), s), la.scale(2 * c.form(s, m), m))
        if all(vanishes(x, norm(s)) for x in q):
            return base
        return ProjPoint(*q)

    return param

