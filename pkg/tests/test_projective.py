from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conic_nets.errors import (
    CenterOnLine,
    CoincidentPoints,
    DegenerateCrossRatio,
    DegenerateInput,
    NotAnEndomorphism,
    NotCollinear,
    PointAtVertex,
    PointOnWrongEdge,
)
from conic_nets.projective import (
    LineProjectivity,
    ProjLine,
    ProjPoint,
    central_projection,
    ceva_check,
    ceva_complete,
    choose_chart,
    collinear,
    concurrent,
    cross_ratio,
    fixed_points,
    harmonic_conjugate,
    is_generic,
    join,
    meet,
    menelaus_check,
    projectivity_from_linear_map,
)
from conic_nets.scalar import tolerance

X_AXIS = ProjLine(0, 1, 0)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def on_x(t) -> ProjPoint:
    return ProjPoint(t, 0)


def affine_cr(a, p, b, q):
    # independent oracle on the real line
    return (p - a) / (b - p) * (q - b) / (a - q)


def test_points_compare_projectively():
    assert ProjPoint(1, 2, 3) == ProjPoint(F(2), F(4), F(6))
    assert ProjPoint(1, 2, 3) != ProjPoint(1, 2, 4)
    assert hash(ProjPoint(1, 2, 3)) == hash(ProjPoint(-2, -4, -6))
    assert ProjPoint(F(1, 2), F(1, 3)).affine() == (F(1, 2), F(1, 3))
    assert ProjPoint(1, 1, 0).affine() is None


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        ProjPoint(0, 0, 0)


def test_points_are_immutable():
    p = ProjPoint(1, 2)
    with pytest.raises(AttributeError):
        p.coords = (0, 0, 1)


def test_join_meet_incidence():
    p, q = ProjPoint(0, 0), ProjPoint(1, 1)
    l = join(p, q)
    assert l.contains(p) and l.contains(q)
    assert meet(l, ProjLine(1, 0, -3)) == ProjPoint(3, 3)
    with pytest.raises(CoincidentPoints):
        join(p, ProjPoint(0, 0, 5))


def test_parallel_lines_meet_at_infinity():
    x = meet(ProjLine(0, 1, 0), ProjLine(0, 1, -1))
    assert x.coords[2] == 0


def test_collinear_and_concurrent():
    assert collinear([ProjPoint(0, 0), ProjPoint(1, 2), ProjPoint(2, 4), ProjPoint(-1, -2)])
    assert not collinear([ProjPoint(0, 0), ProjPoint(1, 2), ProjPoint(2, 5)])
    assert concurrent([ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(1, 1, 0)])
    assert not is_generic([ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(1, 1, 0), ProjLine(1, 2, 3)])
    assert is_generic([ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(1, 1, -1)])


def test_cross_ratio_values():
    assert cross_ratio(on_x(0), on_x(1), on_x(2), on_x(3)) == F(-1, 3)
    # a point at infinity in the last slot
    assert cross_ratio(on_x(0), on_x(1), on_x(2), ProjPoint(1, 0, 0)) == -1


def test_cross_ratio_errors():
    with pytest.raises(NotCollinear):
        cross_ratio(on_x(0), on_x(1), on_x(2), ProjPoint(0, 1))
    with pytest.raises(DegenerateCrossRatio):
        cross_ratio(on_x(0), on_x(1), on_x(1), on_x(3))


@given(rationals, rationals, rationals, rationals)
def test_cross_ratio_matches_line_coordinate(a, p, b, q):
    assume(len({a, p, b, q}) == 4)
    assert cross_ratio(on_x(a), on_x(p), on_x(b), on_x(q)) == affine_cr(a, p, b, q)


@given(rationals, rationals, rationals, rationals, st.integers(0, 7))
def test_cross_ratio_is_chart_independent(a, p, b, q, k):
    """Rotating a slanted line through the plane keeps the value."""
    assume(len({a, p, b, q}) == 4)
    d = (F(1), F(k + 1, 3))
    pts = [ProjPoint(2 + t * d[0], -1 + t * d[1]) for t in (a, p, b, q)]
    assert cross_ratio(*pts) == affine_cr(a, p, b, q)


@given(rationals, rationals, rationals, rationals)
def test_cross_ratio_symmetries(a, p, b, q):
    assume(len({a, p, b, q}) == 4)
    A, P, B, Q = (on_x(t) for t in (a, p, b, q))
    c = cross_ratio(A, P, B, Q)
    assert cross_ratio(B, Q, A, P) == c
    assert cross_ratio(A, Q, B, P) == 1 / c


def test_harmonic_conjugate_value():
    assert harmonic_conjugate(on_x(0), on_x(3), on_x(1)) == on_x(-3)
    # the midpoint's conjugate is at infinity
    assert harmonic_conjugate(on_x(0), on_x(2), on_x(1)) == ProjPoint(1, 0, 0)
    with pytest.raises(DegenerateInput):
        harmonic_conjugate(on_x(0), on_x(2), on_x(2))


@given(rationals, rationals, rationals)
def test_harmonic_conjugate_is_involutive(a, b, p):
    assume(len({a, b, p}) == 3)
    A, B, P = on_x(a), on_x(b), on_x(p)
    Q = harmonic_conjugate(A, B, P)
    assert cross_ratio(A, P, B, Q) == -1
    assert harmonic_conjugate(A, B, Q) == P


def test_ceva_and_menelaus_examples():
    tri = (ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(0, 1))
    # medians are concurrent
    mids = (ProjPoint(F(1, 2), 0), ProjPoint(F(1, 2), F(1, 2)), ProjPoint(0, F(1, 2)))
    assert ceva_check(tri, *mids)
    assert not menelaus_check(tri, *mids)
    assert not ceva_check(tri, ProjPoint(F(1, 3), 0), mids[1], mids[2])
    # a transversal
    assert menelaus_check(tri, ProjPoint(F(1, 2), 0), ProjPoint(F(3, 4), F(1, 4)), ProjPoint(0, F(-1, 2)))


def test_ceva_input_errors():
    tri = (ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(0, 1))
    with pytest.raises(PointOnWrongEdge):
        ceva_check(tri, ProjPoint(0, F(1, 2)), ProjPoint(F(1, 2), F(1, 2)), ProjPoint(0, F(1, 2)))
    with pytest.raises(PointAtVertex):
        ceva_check(tri, ProjPoint(1, 0), ProjPoint(F(1, 2), F(1, 2)), ProjPoint(0, F(1, 2)))
    with pytest.raises(DegenerateInput):
        ceva_check((ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(2, 0)), on_x(F(1, 2)), on_x(F(3, 2)), on_x(1))


def test_ceva_complete_example():
    tri = (ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(0, 1))
    p31 = ceva_complete(tri, ProjPoint(F(1, 2), 0), ProjPoint(F(1, 3), F(2, 3)))
    assert p31 == ProjPoint(0, F(2, 3))
    assert ceva_check(tri, ProjPoint(F(1, 2), 0), ProjPoint(F(1, 3), F(2, 3)), p31)


@settings(max_examples=60)
@given(st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20),
       st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20))
def test_ceva_complete_closes_the_product(s, t):
    tri = (ProjPoint(0, 0), ProjPoint(3, 1), ProjPoint(1, 4))
    a1, a2, a3 = (p.affine() for p in tri)
    p12 = ProjPoint(a1[0] + s * (a2[0] - a1[0]), a1[1] + s * (a2[1] - a1[1]))
    p23 = ProjPoint(a2[0] + t * (a3[0] - a2[0]), a2[1] + t * (a3[1] - a2[1]))
    assert ceva_check(tri, p12, p23, ceva_complete(tri, p12, p23))


def test_central_projection_maps_through_center():
    src, dst = ProjLine(0, 1, 0), ProjLine(0, 1, -2)
    f = central_projection(ProjPoint(0, -2), src, dst)
    assert f(ProjPoint(3, 0)) == ProjPoint(6, 2)
    g = f.inverse()
    assert (g @ f).is_identity()
    with pytest.raises(CenterOnLine):
        central_projection(ProjPoint(5, 0), src, dst)


def test_composition_needs_matching_lines():
    f = LineProjectivity.identity(X_AXIS)
    g = LineProjectivity.identity(ProjLine(1, 0, 0))
    with pytest.raises(DegenerateInput):
        f @ g


def test_fixed_points_kinds():
    scale = projectivity_from_linear_map(X_AXIS, X_AXIS, lambda v: (2 * v[0], 2 * v[1], v[2]))
    fp = fixed_points(scale)
    assert fp.kind == "points"
    assert set(fp.points) == {ProjPoint(0, 0), ProjPoint(1, 0, 0)}

    shift = projectivity_from_linear_map(X_AXIS, X_AXIS, lambda v: (v[0] + v[2], v[1], v[2]))
    fp = fixed_points(shift)
    assert fp.kind == "points" and fp.points == (ProjPoint(1, 0, 0),)

    assert fixed_points(LineProjectivity.identity(X_AXIS)).kind == "identity"

    # x -> 1/x fixes +-1; x -> -1/x has no real fixed points; x -> 2/x fixes +-sqrt(2)
    for num, kind in ((1, "points"), (-1, "complex"), (2, "irrational")):
        f = projectivity_from_linear_map(X_AXIS, X_AXIS, lambda v, k=num: (k * v[2], v[1], v[0]))
        assert fixed_points(f).kind == kind
    with tolerance(1e-9):
        f = projectivity_from_linear_map(X_AXIS, X_AXIS, lambda v: (2.0 * v[2], v[1], v[0]))
        pts = fixed_points(f).points
    assert sorted(round(p.affine()[0], 9) for p in pts) == [round(-2 ** 0.5, 9), round(2 ** 0.5, 9)]


def test_fixed_points_need_endomorphism():
    f = central_projection(ProjPoint(0, -2), ProjLine(0, 1, 0), ProjLine(0, 1, -2))
    with pytest.raises(NotAnEndomorphism):
        fixed_points(f)


def test_chart_selection():
    pts = [ProjPoint(1, 0, 0), ProjPoint(0, 0, 1), ProjPoint(1, 1, 1)]
    chart = choose_chart(pts)
    assert all(sum(h * c for h, c in zip(chart, p.coords)) != 0 for p in pts)
    assert choose_chart([ProjPoint(1, 2)]) == (0, 0, 1)


def test_float_and_exact_agree():
    rng = random.Random(3)
    for _ in range(20):
        ts = rng.sample(range(-30, 30), 4)
        exact = cross_ratio(*(on_x(F(t, 7)) for t in ts))
        approx = cross_ratio(*(on_x(t / 7) for t in ts))
        assert isinstance(approx, float)
        assert abs(float(exact) - approx) <= 1e-9 * max(1, abs(approx))


def test_ceva_counterexample_and_transversal():
    tri = (ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(0, 1))
    assert not ceva_check(tri, ProjPoint(F(1, 2), 0), ProjPoint(F(1, 2), F(1, 2)), ProjPoint(0, F(1, 3)))
    # the points cut by y = x - 1/2
    cut = (ProjPoint(F(1, 2), 0), ProjPoint(F(3, 4), F(1, 4)), ProjPoint(0, F(-1, 2)))
    assert menelaus_check(tri, *cut)
    assert not ceva_check(tri, *cut)


def test_ceva_complete_from_third_point():
    tri = (ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(0, 1))
    p12, p23 = ProjPoint(F(1, 3), 0), ProjPoint(F(1, 2), F(1, 2))
    p31 = ceva_complete(tri, p12, p23)
    assert p31 == ProjPoint(0, F(1, 3))
    assert ceva_check(tri, p12, p23, p31)


def test_projection_from_origin_doubles():
    f = central_projection(ProjPoint(0, 0, 1), ProjLine(0, 1, -1), ProjLine(0, 1, -2))
    for t in (F(-3), F(0), F(5, 7)):
        assert f(ProjPoint(t, 1)) == ProjPoint(2 * t, 2)
