from __future__ import annotations

import math
import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_nets.conics import (
    DOUBLE_LINE,
    NON_DEGENERATE,
    PAIR_OF_LINES,
    ConfocalFamily,
    Conic,
    classify,
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
    tangency_point,
    tangent_lines_from_point,
)
from conic_nets.errors import (
    DegenerateBase,
    DegenerateConic,
    NonGenericLines,
    ParameterOutOfRange,
    PointInsideConic,
)
from conic_nets.projective import ProjLine, ProjPoint, incident, join

UNIT = Conic.diagonal(1, 1, -1)


def test_coefficients_round_trip():
    c = Conic.from_coefficients([1, 4, 0, 2, -6, F(1, 3)])
    assert c.matrix[0][1] == 2 and c.matrix[1][2] == -3
    assert Conic.from_coefficients(c.coefficients()) == c
    assert c.to_json()[0] == "1/1"


def test_forms_compare_up_to_scale():
    assert Conic.diagonal(2, 2, -2) == UNIT
    assert Conic.diagonal(1, 1, 1) != UNIT
    with pytest.raises(ValueError):
        Conic([[1, 2, 0], [0, 1, 0], [0, 0, 1]])


def test_classification():
    assert classify(UNIT).kind == NON_DEGENERATE
    # x^2 - y^2 = (x - y)(x + y)
    pair = classify(Conic.diagonal(1, -1, 0))
    assert pair.kind == PAIR_OF_LINES and pair.real
    assert set(pair.lines) == {ProjLine(1, -1, 0), ProjLine(1, 1, 0)}
    assert pair.singular_point == ProjPoint(0, 0)
    # x^2 + y^2 = 0 splits over the complex numbers only
    assert not classify(Conic.diagonal(1, 1, 0)).real
    double = classify(Conic.diagonal(0, 0, 3))
    assert double.kind == DOUBLE_LINE and double.lines == (ProjLine(0, 0, 1),)
    # x^2 - 2 y^2: real lines with irrational slopes
    irr = classify(Conic.diagonal(1, -2, 0))
    assert irr.kind == PAIR_OF_LINES and len(irr.lines) == 2


def test_polar_and_pole():
    p = ProjPoint(F(3, 5), F(4, 5))
    t = polar(UNIT, p)
    assert t == ProjLine(3, 4, -5)
    assert is_tangent(UNIT, t)
    assert tangency_point(UNIT, t) == p
    assert pole(UNIT, ProjLine(1, 0, -2)) == ProjPoint(F(1, 2), 0)
    with pytest.raises(DegenerateConic):
        polar(Conic.diagonal(1, -1, 0), ProjPoint(0, 0))


def test_line_intersections():
    kind, pts = conic_line_intersection(UNIT, ProjLine(0, 1, 0))
    assert kind == "real" and set(pts) == {ProjPoint(1, 0), ProjPoint(-1, 0)}
    assert conic_line_intersection(UNIT, ProjLine(0, 1, -2))[0] == "complex"
    kind, pts = conic_line_intersection(UNIT, ProjLine(1, -1, 0))
    assert kind == "irrational" and all(on_conic(UNIT.approx(), p) for p in pts)
    assert conic_line_intersection(UNIT, ProjLine(1, 0, -1)) == ("real", [ProjPoint(1, 0)])
    assert conic_line_intersection(Conic.diagonal(0, 1, 0), ProjLine(0, 1, 0))[0] == "contained"


def test_five_tangents_of_unit_circle():
    pts = [(F(3, 5), F(4, 5)), (F(-3, 5), F(4, 5)), (1, 0), (0, -1), (F(-4, 5), F(-3, 5))]
    lines = [polar(UNIT, ProjPoint(*p)) for p in pts]
    assert conic_tangent_to_five_lines(lines) == UNIT
    assert fit_dual_conic(lines) == UNIT


def test_five_tangents_of_ellipse():
    ell = Conic.from_coefficients([F(1, 4), 0, 0, 1, 0, -1])
    param = rational_parametrization(ell, ProjPoint(2, 0))
    lines = [polar(ell, param(t)) for t in (F(0), F(1), F(-1), F(2), F(1, 3))]
    assert conic_tangent_to_five_lines(lines) == ell


def test_five_lines_must_be_generic():
    lines = [ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(1, 1, 0), ProjLine(1, 0, 1), ProjLine(0, 1, 1)]
    with pytest.raises(NonGenericLines):
        conic_tangent_to_five_lines(lines)


def sympy_conic_through(points):
    """Oracle: the kernel of the 5x6 monomial matrix, via sympy."""
    x, y = sympy.symbols("x y")
    rows = [[px * px, px * py, px, py * py, py, 1] for px, py in points]
    ns = sympy.Matrix(rows).nullspace()
    assert len(ns) == 1
    return [sympy.Rational(v) for v in ns[0]]


def test_conic_through_points_against_sympy():
    rng = random.Random(11)
    for _ in range(10):
        pts = [(F(rng.randint(-9, 9), rng.randint(1, 4)), F(rng.randint(-9, 9), rng.randint(1, 4))) for _ in range(5)]
        try:
            c = conic_through([ProjPoint(*p) for p in pts])
        except DegenerateConic:
            continue
        oracle = sympy_conic_through(pts)
        expect = Conic.from_coefficients([F(int(v.p), int(v.q)) for v in oracle])
        assert c == expect


def test_conic_through_with_tangency():
    # unit circle: three points and the tangent at a fourth
    t = ProjPoint(0, 1)
    c = conic_through([ProjPoint(1, 0), ProjPoint(-1, 0), ProjPoint(F(3, 5), F(-4, 5))], [(t, ProjLine(0, 1, -1))])
    assert c == UNIT


def test_double_contact_examples():
    # x^2/4 + y^2 = 1 touches the unit circle at (0, +-1)
    inner = Conic.from_coefficients([F(1, 4), 0, 0, 1, 0, -1])
    dc = double_contact(inner, UNIT)
    assert dc is not None and dc.chord == ProjLine(1, 0, 0)
    assert dc.real_contact

    big = Conic.diagonal(1, 1, -4)
    dc = double_contact(big, UNIT)
    assert dc.chord == ProjLine(0, 0, 1) and dc.t == 1 and not dc.real_contact

    assert double_contact(Conic.from_coefficients([F(1, 4), 0, 0, F(1, 9), 0, -1]), UNIT) is None
    with pytest.raises(DegenerateBase):
        double_contact(UNIT, Conic.diagonal(1, 0, 0))


def test_double_contact_along_real_chord():
    # C + 3 * chord^2 meets C only along the chord
    chord = ProjLine(0, 1, -F(1, 2))
    sq = [[a * b for b in chord.coords] for a in chord.coords]
    a = Conic([[UNIT.matrix[i][j] + 3 * sq[i][j] for j in range(3)] for i in range(3)])
    dc = double_contact(a, UNIT)
    assert dc.chord == chord and dc.real_contact
    approx = double_contact(a.approx(), UNIT.approx())
    assert approx.chord == chord.approx() and approx.real_contact


def test_confocal_family():
    fam = ConfocalFamily(4, 1)
    assert fam.member(0) == Conic.from_coefficients([F(1, 4), 0, 0, 1, 0, -1])
    c = fam.member(F(1, 2))
    assert c == Conic.from_coefficients([F(2, 7), 0, 0, 2, 0, -1])
    assert fam.foci()[0] == pytest.approx((math.sqrt(3), 0.0))
    with pytest.raises(ParameterOutOfRange):
        fam.member(1)
    with pytest.raises(ParameterOutOfRange):
        ConfocalFamily(1, 4)
    assert ConfocalFamily(2, 2).member(1) == Conic.diagonal(1, 1, -1)


def test_tangents_from_point():
    res = tangent_lines_from_point(UNIT, ProjPoint(2, 0))
    assert res.approximate and len(res) == 2
    for l in res:
        assert incident(ProjPoint(2.0, 0.0), l)
        assert is_tangent(UNIT.approx(), l)
        tp = tangency_point(UNIT.approx(), l).affine()
        assert tp[0] == pytest.approx(0.5) and abs(tp[1]) == pytest.approx(math.sqrt(3) / 2)

    exact = tangent_lines_from_point(UNIT, ProjPoint(F(5, 4), 0))
    assert not exact.approximate
    assert {tangency_point(UNIT, l) for l in exact} == {ProjPoint(F(4, 5), F(3, 5)), ProjPoint(F(4, 5), F(-3, 5))}

    assert len(tangent_lines_from_point(UNIT, ProjPoint(1, 0))) == 1
    with pytest.raises(PointInsideConic):
        tangent_lines_from_point(UNIT, ProjPoint(0, 0))


@settings(max_examples=40)
@given(st.fractions(min_value=-30, max_value=30, max_denominator=12))
def test_parametrization_stays_on_conic(t):
    param = rational_parametrization(UNIT, ProjPoint(-1, 0))
    p = param(t)
    assert on_conic(UNIT, p)
    # chord through the base has the requested slope
    if p != ProjPoint(-1, 0):
        assert join(ProjPoint(-1, 0), p) != ProjLine(0, 1, 0) or t == 0


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=9), min_size=5, max_size=5, unique=True))
def test_five_tangents_recover_conic(params):
    ell = Conic.from_coefficients([1, 1, 0, 3, 0, -5])
    param = rational_parametrization(ell, ProjPoint(1, 1))
    pts = [param(t) for t in params]
    if len(set(pts)) < 5:
        return
    lines = [polar(ell, p) for p in pts]
    assert conic_tangent_to_five_lines(lines) == ell
