"""Command-line interface.

Exit status: 0 when a verification passes (or a generator succeeds), 1 when
it fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .billiards import billiard_table, dual_touching_grid, ic_net_build, start_point, trajectory
from .conics import Conic
from .errors import ClosureFailure, GeometryError, ParseError, SceneReferenceError
from .grids import (
    ChainSpec,
    common_tangent_conic,
    distinguished_assignment,
    grid_from_chains,
    grid_six_line_reports,
    strip_collinearity_check,
    strip_conics,
)
from .inscribed import EDGES, family_member, normalize
from .nets import koenigs_check, porism_check, propagate_touching, vertex_loop
from .projective import ProjLine, ProjPoint
from .render import RenderSpec, render_svg
from .scalar import APPROX, EXACT, parse_scalar, tolerance
from .scene import Scene, load_scene, save_scene

TRAJECTORY_TOL = 1e-9


class UsageError(Exception):
    pass


def _scalars(text: str, backend: str) -> list:
    try:
        values = [parse_scalar(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc
    if backend == APPROX:
        return [float(v) for v in values]
    if any(isinstance(v, float) for v in values):
        raise UsageError(f"{text!r} holds decimals; use p/q or --backend approx")
    return values


def _emit(scene: Scene, out) -> None:
    save_scene(scene, out or "-")


# --- generators -----------------------------------------------------------

def _gen_chains(args) -> int:
    backend = args.backend
    conic = Conic.from_coefficients(_scalars(args.conic, backend))
    base = None
    if args.base:
        xy = _scalars(args.base, backend)
        base = ProjPoint(*xy) if len(xy) == 2 else ProjPoint(*xy[:3])
    spec = ChainSpec.from_parameters(conic, _scalars(args.p, backend), _scalars(args.q, backend), base, args.merged)
    scene = Scene(backend=backend, metadata={"generator": "chains", "merged": args.merged})
    scene.conics["C"] = conic
    k_names = [f"k{i}" for i in range(len(spec.p))]
    l_names = [f"l{j}" for j in range(len(spec.q))]
    for i, p in enumerate(spec.p):
        scene.points[f"p{i}"] = p
    for j, q in enumerate(spec.q):
        scene.points[f"q{j}"] = q
    grid, assignment = grid_from_chains(spec)
    for name, line in zip(k_names + l_names, grid.k + grid.l):
        scene.lines[name] = line
    if args.perturb:
        # shift the last l-line: the grid stops being tangent to a conic
        a, b, c = scene.lines[l_names[-1]].coords
        scene.lines[l_names[-1]] = ProjLine(a, b, c + (Fraction(1, 97) if backend == EXACT else 1 / 97))
        scene.metadata["perturbed"] = l_names[-1]
        scene.grids["G"] = {"k": k_names, "l": l_names, "conic": None, "chains": None}
    else:
        scene.grids["G"] = {
            "k": k_names,
            "l": l_names,
            "conic": "C",
            "chains": {"p": [f"p{i}" for i in range(len(spec.p))], "q": [f"q{j}" for j in range(len(spec.q))], "merged": args.merged},
        }
        scene.assignments["T"] = {"grid": "G", "edges": dict(assignment.edges)}
    _emit(scene, args.out)
    return 0


def _gen_billiard(args) -> int:
    try:
        starts = [float(x) for x in args.starts.split(",")]
        steps = [int(x) for x in args.steps.split(",")]
        choices = [int(x) for x in args.choices.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(starts) != 2 or len(steps) != 2 or len(choices) != 2:
        raise UsageError("--starts, --steps and --choices take two comma separated values")
    values = [_scalars(text, APPROX) for text in (args.a, args.b, args.caustic)]
    if any(len(v) != 1 for v in values):
        raise UsageError("--a, --b and --caustic take one value each")
    a, b, lam = (v[0] for v in values)
    a2, b2 = a ** 2, b ** 2
    d, c = billiard_table(a2, b2, lam)
    scene = Scene(backend=APPROX, metadata={"generator": "billiard", "a": a, "b": b, "caustic": lam})
    scene.conics["D"] = d
    scene.conics["C"] = c
    for name, start, n, choice in zip("AB", starts, steps, choices):
        caustic = c
        if args.perturb and name == "B":
            caustic = billiard_table(a2, b2, lam * 1.01)[1]
            scene.metadata["perturbed"] = "B"
        t = trajectory(d, caustic, start_point(a2, b2, start), choice, n)
        scene.trajectories[name] = {"boundary": "D", "caustic": "C", "points": list(t.points)}
    scene.icnets["N"] = {"a": "A", "b": "B"}
    _emit(scene, args.out)
    return 0


def _gen_lattice(args) -> int:
    backend = args.backend
    rng = random.Random(args.seed)
    pts = [[[Fraction(i), Fraction(j)] for j in range(args.n + 1)] for i in range(args.m + 1)]
    if args.perturb:
        try:
            where, delta = args.perturb.split(":")
            i, j = (int(x) for x in where.split(","))
            dx, dy = _scalars(delta, EXACT)
        except ValueError as exc:
            raise UsageError("--perturb expects i,j:dx,dy") from exc
        pts[i][j] = [pts[i][j][0] + dx, pts[i][j][1] + dy]
    if args.projective:
        # a random rational projective image keeps the Koenigs property
        while True:
            m = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
            det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            if det != 0:
                break
    net = []
    for col in pts:
        out = []
        for x, y in col:
            v = (x, y, Fraction(1))
            if args.projective:
                v = tuple(sum(m[r][s] * v[s] for s in range(3)) for r in range(3))
            if backend == APPROX:
                v = tuple(float(t) for t in v)
            out.append(ProjPoint(*v))
        net.append(out)
    scene = Scene(backend=backend, metadata={"generator": "lattice", "seed": args.seed, "perturb": args.perturb})
    scene.nets["F"] = net
    _emit(scene, args.out)
    return 0


# --- verifiers ------------------------------------------------------------

def _report(command: str, ok: bool, details: dict) -> int:
    sys.stdout.write(json.dumps({"command": command, "pass": bool(ok), "details": details}, indent=2, sort_keys=True) + "\n")
    return 0 if ok else 1


def _net_sources(scene: Scene) -> dict:
    nets = {f"net:{k}": scene.qnet(k) for k in sorted(scene.nets)}
    for k in sorted(scene.grids):
        nets[f"grid:{k}"] = scene.grid(k).net
    return nets


def _verify_koenigs(scene: Scene) -> int:
    details, ok = {}, True
    for name, net in _net_sources(scene).items():
        report = koenigs_check(net)
        entry = report.to_json()
        try:
            seed_cell = net.cell(0, 0)
            seed = ProjPoint(*[a + 2 * b for a, b in zip(seed_cell.u.normal_form(), seed_cell.v.normal_form())])
            propagate_touching(net, seed)
            entry["propagation"] = {"ok": True}
        except ClosureFailure as exc:
            entry["propagation"] = {"ok": False, "vertex": list(exc.vertex), "failing_vertices": [list(v) for v in exc.vertices]}
        ok = ok and report.ok and entry["propagation"]["ok"]
        details[name] = entry
    return _report("koenigs", ok and bool(details), details)


def _verify_porism(scene: Scene) -> int:
    details, ok = {}, True
    for name, net in _net_sources(scene).items():
        verdicts = {}
        for v in net.interior_vertices():
            loop = vertex_loop(net, *v)
            verdicts[f"{v[0]},{v[1]}"] = porism_check(loop)
        details[name] = verdicts
        ok = ok and all(verdicts.values())
    return _report("porism", ok and bool(details), details)


def _verify_six_line(scene: Scene) -> int:
    details, ok = {}, True
    for name in sorted(scene.grids):
        grid = scene.grid(name)
        reports = grid_six_line_reports(grid)
        details[name] = {f"{i},{j}": r.to_json() for (i, j), r in reports.items()}
        ok = ok and bool(reports) and all(r.verdict and r.consistent for r in reports.values())
    return _report("six-line", ok and bool(details), details)


def _verify_grid_conic(scene: Scene) -> int:
    details, ok = {}, True
    for name in sorted(scene.grids):
        grid = scene.grid(name)
        strips = strip_collinearity_check(grid)
        entry = {"strips": strips.to_json()}
        try:
            entry["common"] = common_tangent_conic(grid).to_json()
            found = True
        except GeometryError as exc:
            entry["common"] = {"error": type(exc).__name__, "message": str(exc)}
            found = False
        ok = ok and found and strips.ok
        details[name] = entry
    return _report("grid-conic", ok and bool(details), details)


def _verify_strips(scene: Scene) -> int:
    details, ok = {}, True
    names = sorted(scene.assignments)
    for name in names:
        grid, assignment = scene.assignment(name)
        try:
            common = common_tangent_conic(grid)
            details[name] = strip_conics(grid, assignment, common).to_json()
        except GeometryError as exc:
            details[name] = {"error": type(exc).__name__, "message": str(exc)}
            ok = False
    for name in sorted(scene.grids):
        if any(scene.assignments[a]["grid"] == name for a in names):
            continue
        grid = scene.grid(name)
        try:
            common = common_tangent_conic(grid)
            details[f"{name}:distinguished"] = strip_conics(grid, distinguished_assignment(grid, common), common).to_json()
        except GeometryError as exc:
            details[f"{name}:distinguished"] = {"error": type(exc).__name__, "message": str(exc)}
            ok = False
    return _report("strips", ok and bool(details), details)


def _verify_icnet(scene: Scene) -> int:
    details, ok = {}, True
    for name in sorted(scene.icnets):
        entry = scene.icnets[name]
        ta, tb = scene.trajectory(entry["a"]), scene.trajectory(entry["b"])
        info = {
            "tangency_residual": max(ta.max_tangency_residual, tb.max_tangency_residual),
            "stepper_gap": max(ta.max_stepper_gap, tb.max_stepper_gap),
        }
        good = info["tangency_residual"] <= TRAJECTORY_TOL
        try:
            net = ic_net_build(ta, tb)
            info["net"] = net.to_json()
            grid = dual_touching_grid(net)
            with tolerance(1e-9):
                reports = grid_six_line_reports(grid)
            info["dual_grid"] = {f"{i},{j}": r.to_json()["conditions"] for (i, j), r in reports.items()}
            good = good and all(r.verdict and r.consistent for r in reports.values())
        except GeometryError as exc:
            info["error"] = {"type": type(exc).__name__, "message": str(exc)}
            good = False
        except AssertionError as exc:
            info["error"] = {"type": "AssertionError", "message": str(exc)}
            good = False
        details[name] = info
        ok = ok and good
    return _report("icnet", ok and bool(details), details)


VERIFIERS = {
    "koenigs": _verify_koenigs,
    "porism": _verify_porism,
    "six-line": _verify_six_line,
    "grid-conic": _verify_grid_conic,
    "strips": _verify_strips,
    "icnet": _verify_icnet,
}


def _verify(args) -> int:
    scene = load_scene(args.scene)
    return VERIFIERS[args.what](scene)


# --- family and render ----------------------------------------------------

def _family(args) -> int:
    scene = load_scene(args.scene)
    try:
        i, j = (int(x) for x in args.cell.split(","))
    except ValueError as exc:
        raise UsageError("--cell expects i,j") from exc
    grid_name = args.grid or (sorted(scene.grids)[0] if scene.grids else None)
    if grid_name is None:
        raise UsageError("the scene has no grid")
    if grid_name not in scene.grids:
        raise SceneReferenceError(grid_name, "--grid")
    grid = scene.grid(grid_name)
    if not (1 <= i <= grid.m and 1 <= j <= grid.n):
        raise UsageError(f"cell {i},{j} is outside the {grid.m}x{grid.n} grid")
    lam = _scalars(args.lam, scene.backend)[0]
    quad = grid.cell(i, j)
    member = family_member(normalize(quad), lam)
    qname = f"{grid_name}_{i}_{j}"
    names = []
    for label, vertex in zip("uvwx", quad.vertices):
        pname = f"{qname}_{label}"
        scene.points[pname] = vertex
        names.append(pname)
    scene.quads[qname] = tuple(names)
    scene.families[args.name or f"{qname}_family"] = {
        "quad": qname,
        "lambda": member.lam,
        "conic": member.conic,
        "tangency": {e: member.tangency[e] for e in EDGES},
    }
    _emit(scene, args.out)
    return 0


def _render(args) -> int:
    scene = load_scene(args.scene)
    window = None
    if args.window:
        try:
            window = tuple(float(x) for x in args.window.split(","))
        except ValueError as exc:
            raise UsageError("--window expects xmin,ymin,xmax,ymax") from exc
        if len(window) != 4:
            raise UsageError("--window expects xmin,ymin,xmax,ymax")
    render_svg(scene, RenderSpec(viewport=window, density=args.density), args.out)
    return 0


# --- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conic-nets", description="Touching inscribed conics on quadrilateral nets.")
    parser.add_argument("--backend", choices=(EXACT, APPROX), default=EXACT)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a scene")
    gsub = gen.add_subparsers(dest="kind", required=True)

    ch = gsub.add_parser("chains", help="grid from two chains inscribed in a conic")
    ch.add_argument("--conic", default="1,0,0,1,0,-1", help="six coefficients xx,xy,xz,yy,yz,zz")
    ch.add_argument("--p", required=True, help="parameters of the first chain")
    ch.add_argument("--q", required=True, help="parameters of the second chain")
    ch.add_argument("--base", help="rational base point x,y of the parametrization")
    ch.add_argument("--merged", action="store_true")
    ch.add_argument("--perturb", action="store_true", help="shift one grid line off the conic")
    ch.add_argument("--out")
    ch.set_defaults(func=_gen_chains)

    bi = gsub.add_parser("billiard", help="two trajectories with a common confocal caustic")
    bi.add_argument("--a", required=True)
    bi.add_argument("--b", required=True)
    bi.add_argument("--caustic", required=True)
    bi.add_argument("--starts", required=True, help="two start angles")
    bi.add_argument("--steps", required=True, help="bounces of the two trajectories, m,n")
    bi.add_argument("--choices", default="1,-1", help="initial tangent choice per trajectory")
    bi.add_argument("--perturb", action="store_true", help="drive the second trajectory by another caustic")
    bi.add_argument("--out")
    bi.set_defaults(func=_gen_billiard)

    lat = gsub.add_parser("lattice", help="square lattice net, optionally perturbed")
    lat.add_argument("--m", type=int, default=3)
    lat.add_argument("--n", type=int, default=3)
    lat.add_argument("--perturb", help="i,j:dx,dy")
    lat.add_argument("--projective", action="store_true", help="apply a random projective map")
    lat.add_argument("--out")
    lat.set_defaults(func=_gen_lattice)

    ver = sub.add_parser("verify", help="verify a scene")
    ver.add_argument("what", choices=sorted(VERIFIERS))
    ver.add_argument("--scene", required=True, help="scene file, or - for stdin")
    ver.set_defaults(func=_verify)

    fam = sub.add_parser("family", help="add an inscribed conic of a grid cell")
    fam.add_argument("--scene", required=True)
    fam.add_argument("--cell", required=True, help="1-based cell i,j")
    fam.add_argument("--lambda", dest="lam", required=True)
    fam.add_argument("--grid")
    fam.add_argument("--name")
    fam.add_argument("--out")
    fam.set_defaults(func=_family)

    ren = sub.add_parser("render", help="draw a scene as SVG")
    ren.add_argument("--scene", required=True)
    ren.add_argument("--out", required=True)
    ren.add_argument("--window", help="xmin,ymin,xmax,ymax")
    ren.add_argument("--density", type=int, default=256)
    ren.set_defaults(func=_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, SceneReferenceError, OSError) as exc:
        sys.stderr.write(f"conic-nets: {exc}\n")
        return 2
    except GeometryError as exc:
        sys.stderr.write(f"conic-nets: {type(exc).__name__}: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"conic-nets: invalid input: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
