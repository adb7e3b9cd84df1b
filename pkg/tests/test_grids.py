from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

import factories
from conic_nets.conics import DOUBLE_LINE, Conic, classify, polar
from conic_nets.errors import (
    ChainPointOffConic,
    InconsistentStrip,
    NoCommonConic,
    NonGenericChain,
    NonGenericLines,
)
from conic_nets.grids import (
    ChainSpec,
    LineGrid,
    common_tangent_conic,
    diagonal_points,
    distinguished_assignment,
    find_rational_point,
    grid_from_chains,
    grid_six_line_reports,
    six_line_report,
    strip_collinearity_check,
    strip_conics,
)
from conic_nets.inscribed import EDGES, ceva_common_point_check
from conic_nets.nets import edge_key, koenigs_check, propagate_touching
from conic_nets.projective import ProjLine, ProjPoint, join, meet
from conic_nets.scalar import tolerance

UNIT = Conic.diagonal(1, 1, -1)
P = [ProjPoint(1, 0), ProjPoint(F(3, 5), F(4, 5)), ProjPoint(-1, 0)]
Q = [ProjPoint(0, -1), ProjPoint(F(-4, 5), F(3, 5)), ProjPoint(0, 1)]


def unit_spec(merged=False):
    return ChainSpec(UNIT, P, Q, merged)


def test_unit_circle_chains():
    spec = unit_spec()
    grid, assignment = grid_from_chains(spec)
    assert (grid.m, grid.n) == (2, 2)
    kk, ll = spec.chain_lines()
    for i in range(grid.m):
        for j in range(grid.n):
            ic = assignment.conics[(i, j)]
            assert ceva_common_point_check(grid.net.cell(i, j), *(ic.tangency[e] for e in EDGES))
            assert kk[i].contains(ic.tangency["uv"]) and kk[i].contains(ic.tangency["wx"])
            assert ll[j].contains(ic.tangency["vw"]) and ll[j].contains(ic.tangency["xu"])
    assert koenigs_check(grid.net).ok


def test_merged_chains():
    spec = unit_spec(merged=True)
    assert len(spec.polygon_edges()) == len(unit_spec().polygon_edges()) + 2
    grid, assignment = grid_from_chains(spec)
    assert assignment.consistent()
    assert strip_collinearity_check(grid).ok


def test_chain_validation():
    with pytest.raises(ChainPointOffConic):
        ChainSpec(UNIT, [ProjPoint(0, 0), P[1]], Q)
    with pytest.raises(NonGenericChain):
        ChainSpec(UNIT, P, [P[0], Q[1]])


def test_rational_point_search():
    c = Conic.from_coefficients([1, 0, 0, 2, 0, -3])
    p = find_rational_point(c)
    assert c.form(p.coords, p.coords) == 0


def test_symmetric_grid_has_symmetric_r_points():
    # y -> -y swaps k0 with k2 and l0 with l2
    k = [polar(UNIT, p) for p in (ProjPoint(F(3, 5), F(4, 5)), ProjPoint(1, 0), ProjPoint(F(3, 5), F(-4, 5)))]
    l = [polar(UNIT, q) for q in (ProjPoint(F(-3, 5), F(4, 5)), ProjPoint(-1, 0), ProjPoint(F(-3, 5), F(-4, 5)))]
    r = diagonal_points(LineGrid(k, l))
    mirror = lambda p: ProjPoint(p.coords[0], -p.coords[1], p.coords[2])
    for (i, j), pt in r.items():
        assert mirror(pt) == r[(3 - i, 3 - j)]


def test_strips_and_common_conic():
    grid, _ = grid_from_chains(unit_spec())
    assert strip_collinearity_check(grid).ok
    common = common_tangent_conic(grid)
    assert common.conic == UNIT
    assert list(common.p) == P and list(common.q) == Q


def test_perturbed_grid_loses_common_conic():
    grid, _ = factories.chain_grid(random.Random(20), 4, 4)
    l = list(grid.l)
    a, b, c = l[3].coords
    l[3] = ProjLine(a, b, c + F(1, 3))
    bad = LineGrid(grid.k, l)
    report = strip_collinearity_check(bad)
    assert report.l == (True, True, False)
    assert report.k == (False, False, False)
    with pytest.raises(NoCommonConic):
        common_tangent_conic(bad)


def test_concurrent_pencils_give_degenerate_conic():
    k = [ProjLine(1, 0, 0), ProjLine(1, 1, 0), ProjLine(1, 2, 0)]
    l = [ProjLine(0, 1, -1), ProjLine(1, 1, -3), ProjLine(2, 1, -5)]
    grid = LineGrid(k, l, generic=False)
    with pytest.raises(NoCommonConic) as info:
        common_tangent_conic(grid)
    assert info.value.detail == "DegenerateConic"
    with pytest.raises(NonGenericLines):
        LineGrid(k, l)


def test_six_tangents_of_unit_circle():
    pts = [ProjPoint(1, 0), ProjPoint(F(3, 5), F(4, 5)), ProjPoint(0, 1),
           ProjPoint(F(-4, 5), F(-3, 5)), ProjPoint(F(-5, 13), F(12, 13)), ProjPoint(F(5, 13), F(-12, 13))]
    lines = [polar(UNIT, p) for p in pts]
    report = six_line_report(*lines)
    assert report.conditions == (True,) * 6
    assert report.to_json()["verdict"] is True


def test_six_random_lines():
    report = six_line_report(*factories.generic_six(random.Random(4)))
    assert report.conditions == (False,) * 6


def test_perturbed_sixth_line():
    pts = [ProjPoint(1, 0), ProjPoint(F(3, 5), F(4, 5)), ProjPoint(0, 1),
           ProjPoint(F(-4, 5), F(-3, 5)), ProjPoint(F(-5, 13), F(12, 13)), ProjPoint(F(5, 13), F(-12, 13))]
    lines = [polar(UNIT, p) for p in pts]
    a, b, c = lines[5].coords
    bumped = lines[:5] + [ProjLine(a, b, c + F(1, 1000))]
    assert six_line_report(*bumped).conditions == (False,) * 6
    # on floats a perturbation below the tolerance is invisible
    tiny = [l.approx() for l in lines[:5]] + [ProjLine(float(a), float(b), float(c) + 1e-13)]
    with tolerance(1e-9):
        assert six_line_report(*tiny).verdict


def test_non_generic_six_lines_rejected():
    lines = [ProjLine(1, 0, 0), ProjLine(0, 1, 0), ProjLine(1, 1, 0), ProjLine(1, 0, 1), ProjLine(0, 1, 1), ProjLine(1, 2, 3)]
    with pytest.raises(NonGenericLines):
        six_line_report(*lines)


def test_grid_reports_cover_sub_grids():
    grid, _ = factories.chain_grid(random.Random(1), 4, 3)
    reports = grid_six_line_reports(grid)
    assert sorted(reports) == [(0, 0), (1, 0)]
    assert all(r.verdict and r.consistent for r in reports.values())


def test_distinguished_instance_has_double_line_strips():
    rng = random.Random(12)
    spec = factories.chain_spec(rng, 3, 4)
    grid, chain_assignment = grid_from_chains(spec)
    common = common_tangent_conic(grid)
    assignment = distinguished_assignment(grid, common)
    assert assignment.edges == chain_assignment.edges
    strips = strip_conics(grid, assignment, common)
    assert all(c.rank == 1 for c in strips.a + strips.b)
    assert all(classify(c).kind == DOUBLE_LINE for c in strips.a)
    for i, c in enumerate(strips.a, start=1):
        assert classify(c).lines[0] == join(common.p[i - 1], common.p[i])


def test_shifted_seed_strips_touch_along_chords():
    rng = random.Random(14)
    grid, chain_assignment = factories.chain_grid(rng, 3, 4)
    common = common_tangent_conic(grid)
    cell = grid.net.cell(0, 0)
    base = chain_assignment.edges[edge_key(0, 0, "uv")]
    seed = ProjPoint(*[a + 3 * b for a, b in zip(base.normal_form(), cell.v.normal_form())])
    assignment = propagate_touching(grid.net, seed)
    strips = strip_conics(grid, assignment, common)
    assert all(c.rank == 3 for c in strips.a + strips.b)
    for i, dc in enumerate(strips.a_contact, start=1):
        assert dc.chord == join(common.p[i - 1], common.p[i])
    for j, dc in enumerate(strips.b_contact, start=1):
        assert dc.chord == join(common.q[j - 1], common.q[j])


def test_corrupted_assignment_is_inconsistent():
    rng = random.Random(15)
    grid, assignment = factories.chain_grid(rng, 3, 4)
    common = common_tangent_conic(grid)
    cell = grid.net.cell(0, 0)
    base = assignment.edges[edge_key(0, 0, "uv")]
    seed = ProjPoint(*[a + 3 * b for a, b in zip(base.normal_form(), cell.v.normal_form())])
    shifted = propagate_touching(grid.net, seed)
    key = edge_key(0, 1, "uv")
    p = shifted.edges[key]
    shifted.edges[key] = ProjPoint(*[a + F(1, 5) * b for a, b in zip(p.normal_form(), grid.net.f(1, 1).normal_form())])
    with pytest.raises(InconsistentStrip):
        strip_conics(grid, shifted, common)


def test_grid_cells_are_one_based():
    grid, _ = grid_from_chains(unit_spec())
    assert grid.cell(1, 1).u == meet(grid.k[0], grid.l[0])
    assert grid.cell(2, 2).w == meet(grid.k[2], grid.l[2])
