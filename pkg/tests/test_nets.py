from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

import factories
from conic_nets.errors import ClosureFailure, InvalidLoop
from conic_nets.grids import grid_from_chains
from conic_nets.inscribed import Quadrilateral
from conic_nets.nets import (
    QNet,
    QuadLoop,
    edge_key,
    koenigs_check,
    loop_monodromy,
    non_closing_vertices,
    porism_check,
    propagate_touching,
    vertex_loop,
)
from conic_nets.projective import ProjPoint, collinear, fixed_points, join


def lattice(m, n, moved=None, delta=(0, 0)):
    pts = [[[F(i), F(j)] for j in range(n + 1)] for i in range(m + 1)]
    if moved is not None:
        i, j = moved
        pts[i][j] = [pts[i][j][0] + delta[0], pts[i][j][1] + delta[1]]
    return pts


def as_net(pts, transform=None):
    out = []
    for col in pts:
        row = []
        for x, y in col:
            v = (x, y, F(1))
            if transform is not None:
                v = tuple(sum(transform[r][s] * v[s] for s in range(3)) for r in range(3))
            row.append(ProjPoint(*v))
        out.append(row)
    return QNet(out)


def affine_multi_ratio(pts, i, j):
    """Oracle: the vertex product computed directly in the plane."""

    def sub(a, b):
        return (a[0] - b[0], a[1] - b[1])

    def diag_point(c):
        a, b, cc, d = (pts[x][y] for x, y in ((c[0], c[1]), (c[0] + 1, c[1]), (c[0] + 1, c[1] + 1), (c[0], c[1] + 1)))
        # a + s (cc - a) = b + t (d - b)
        e1, e2, rhs = sub(cc, a), sub(b, d), sub(b, a)
        det = e1[0] * e2[1] - e1[1] * e2[0]
        s = (rhs[0] * e2[1] - rhs[1] * e2[0]) / det
        return (a[0] + s * e1[0], a[1] + s * e1[1])

    def ratio(m, x, y):
        d1, d2 = sub(x, m), sub(y, m)
        return (d1[0] * d2[0] + d1[1] * d2[1]) / (d2[0] * d2[0] + d2[1] * d2[1])

    f = lambda a, b: pts[a][b]
    return (
        ratio(diag_point((i, j)), f(i + 1, j), f(i, j + 1))
        * ratio(diag_point((i - 1, j)), f(i, j + 1), f(i - 1, j))
        * ratio(diag_point((i - 1, j - 1)), f(i - 1, j), f(i, j - 1))
        * ratio(diag_point((i, j - 1)), f(i, j - 1), f(i + 1, j))
    )


def test_cells_and_edges():
    net = as_net(lattice(2, 2))
    assert net.M == 2 and net.N == 2
    assert net.cell(1, 0).u == ProjPoint(1, 0)
    assert edge_key(0, 0, "vw") == ((1, 0), (1, 1))
    assert edge_key(0, 0, "xu") == ((0, 0), (0, 1))
    with pytest.raises(ValueError):
        QNet([[ProjPoint(0, 0), ProjPoint(0, 1)]])


def test_regular_lattice_is_koenigs():
    report = koenigs_check(as_net(lattice(3, 3)))
    assert report.ok and report.failing == ()
    assert all(p == 1 for p in report.residuals.values())


def test_projective_image_of_lattice_is_koenigs():
    rng = random.Random(13)
    for _ in range(5):
        m = [[F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        try:
            net = as_net(lattice(3, 3), m)
        except Exception:
            continue
        assert koenigs_check(net).ok
        assert non_closing_vertices(net) == ()


@pytest.mark.parametrize(
    "size, moved, delta, failing",
    [
        ((3, 3), (1, 1), (F(1, 7), 0), {(1, 2), (2, 2)}),
        ((4, 4), (2, 2), (F(1, 7), 0), {(1, 1), (2, 1), (3, 1), (1, 3), (2, 3), (3, 3)}),
        ((4, 4), (2, 2), (F(1, 7), F(1, 11)), {(1, 1), (2, 1), (3, 1), (1, 2), (3, 2), (1, 3), (2, 3), (3, 3)}),
    ],
)
def test_perturbed_lattice_failing_vertices(size, moved, delta, failing):
    pts = lattice(*size, moved=moved, delta=delta)
    net = as_net(pts)
    oracle = {v for v in net.interior_vertices() if affine_multi_ratio(pts, *v) != 1}
    report = koenigs_check(net)
    assert set(report.failing) == oracle == failing
    assert set(non_closing_vertices(net)) == failing
    # the moved vertex itself still satisfies the product condition
    assert moved not in failing


def test_perturbed_lattice_propagation_fails():
    net = as_net(lattice(3, 3, moved=(1, 1), delta=(F(1, 7), F(1, 11))))
    seed = ProjPoint(F(1, 2), 0)
    with pytest.raises(ClosureFailure) as info:
        propagate_touching(net, seed)
    assert set(info.value.vertices) == set(koenigs_check(net).failing)
    assert info.value.vertex in info.value.vertices


def test_propagation_on_chain_grid_follows_chains():
    spec = factories.chain_spec(random.Random(3), 3, 3)
    grid, expected = grid_from_chains(spec)
    cell = grid.net.cell(0, 0)
    seed = expected.edges[edge_key(0, 0, "uv")]
    found = propagate_touching(grid.net, seed)
    assert found.edges == expected.edges
    assert found.consistent()
    kk, ll = spec.chain_lines()
    for i in range(grid.m):
        for j in range(grid.n + 1):
            assert kk[i].contains(found.edges[((i, j), (i + 1, j))])
    assert cell.edge_line("uv").contains(seed)


def test_touching_family_members_are_disjoint():
    grid, _ = factories.chain_grid(random.Random(6), 3, 3)
    cell = grid.net.cell(0, 0)
    u, v = cell.u.normal_form(), cell.v.normal_form()
    runs = [propagate_touching(grid.net, ProjPoint(*[a + s * b for a, b in zip(u, v)])) for s in (2, 5)]
    for key in runs[0].edges:
        assert runs[0].edges[key] != runs[1].edges[key]


def test_vertex_loops_on_chain_grid_close():
    grid, _ = factories.chain_grid(random.Random(8), 3, 3)
    for v in grid.net.interior_vertices():
        loop = vertex_loop(grid.net, *v)
        assert loop.bipartite
        assert loop_monodromy(loop).is_identity()
        assert porism_check(loop)


def test_perturbed_loop_fixes_shared_vertices():
    grid = factories.perturbed_grid(random.Random(2), 3, 3)
    loop = vertex_loop(grid.net, 1, 1)
    f = loop_monodromy(loop)
    assert not f.is_identity()
    fp = fixed_points(f)
    assert fp.kind == "points"
    assert set(fp.points) == set(loop.shared[0][0])
    assert not porism_check(loop)


def test_transport_matches_touching_instance():
    _, assignment = factories.chain_grid(random.Random(10), 3, 3)
    net = assignment.net
    loop = vertex_loop(net, 1, 1)
    seed = assignment.edges[edge_key(0, 0, "wx")]
    pts = loop.transport(seed)
    assert pts[0] == pts[-1]
    assert porism_check(loop, pts[:-1])
    assert not porism_check(loop, [pts[0]] * 4)


def test_mobius_loop_is_an_involution():
    rng = random.Random(17)
    for n in (4, 6):
        quads = factories.mobius_quads(rng, n)
        loop = QuadLoop(quads)
        assert not loop.bipartite
        assert len(loop.odd_cycle) % 2 == 1
        f = loop_monodromy(loop)
        assert not f.is_identity()
        assert (f @ f).is_identity()
        a0, b0 = quads[0].u, quads[0].x
        assert f(a0) == b0 and f(b0) == a0
        assert porism_check(loop)


def test_generic_bipartite_loop_does_not_close():
    rng = random.Random(19)
    pts = [factories.point(rng) for _ in range(9)]
    net = QNet([pts[0:3], pts[3:6], pts[6:9]])
    assert not porism_check(vertex_loop(net, 1, 1))


def test_loop_validation():
    q = Quadrilateral(ProjPoint(0, 0), ProjPoint(1, 0), ProjPoint(1, 1), ProjPoint(0, 1))
    far = Quadrilateral(ProjPoint(5, 5), ProjPoint(6, 5), ProjPoint(6, 7), ProjPoint(5, 6))
    with pytest.raises(InvalidLoop):
        QuadLoop([q])
    with pytest.raises(InvalidLoop):
        QuadLoop([q, far])


def test_report_serializes():
    net = as_net(lattice(3, 3, moved=(1, 1), delta=(F(1, 7), 0)))
    js = koenigs_check(net).to_json()
    assert js["ok"] is False
    assert sorted(js["failing_vertices"]) == [[1, 2], [2, 2]]
    assert collinear([ProjPoint(0, 0), ProjPoint(1, 1), ProjPoint(2, 2)])
    assert join(ProjPoint(0, 0), ProjPoint(1, 1)).contains(ProjPoint(3, 3))
