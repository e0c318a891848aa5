"""Command-line entry point.

Every invocation prints one JSON report on standard output, including on
errors.  Exit status: 0 for success or a true verdict, 1 for a false verdict
(with a witness), 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .collapse import collapse_ball_once, collapse_to_point
from .complex import Complex
from .diagrams import (
    DEFAULT_BUDGET,
    DiscDiagram,
    fill_short_cycle,
    gauss_bonnet_audit,
    grow_random_disc,
    minimal_fill,
    validate_disc,
    verify_minimal_diagram,
)
from .errors import EmptyInput, MalformedSimplex, NotAFace, NotEquidistant, SelfLoop, SystolicError, UnknownVertex
from .generators import GENERATORS, Provenance
from .largeness import is_k_large, is_locally_k_large, local_to_global_check
from .metric import (
    ball_vertices,
    bfs_distance,
    bigon_thinness,
    combinatorial_ball,
    combinatorial_sphere,
    scan_bigon_thinness,
    scan_triangle_thinness,
    triangle_thinness,
)
from .projection import directed_geodesic_to, p_family, project, verify_directed, vertex_selections_are_geodesics


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().strip()}")

    def exit(self, status=0, message=None):
        # --help still prints text and exits normally
        if status:
            raise UsageError((message or "").strip())
        super().exit(status, message)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Run:
    def __init__(self, command: str):
        self.command = command
        self.inputs: dict[str, str] = {}

    def read_json(self, path: str) -> dict:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        try:
            return json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from None

    def load_complex(self, path: str) -> Complex:
        d = self.read_json(path)
        try:
            return Complex.from_dict(d)
        except (SystolicError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path} is not a complex: {exc}") from None

    def load_provenance(self, path: str) -> Provenance | None:
        side = _sidecar(path)
        if not side.exists():
            return None
        return Provenance.from_dict(self.read_json(str(side)))


def _sidecar(path: str) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".provenance.json")


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text + "\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


# -- subcommands: each returns (verdict, result, witness) ----------------


def cmd_generate(run: _Run, a):
    fn, names = GENERATORS[a.name]
    if len(a.params) != len(names):
        raise UsageError(f"generate {a.name} takes {len(names)} parameter(s): {' '.join(names) or '(none)'}")
    X, prov = fn(*a.params)
    result = {"name": a.name, "params": dict(zip(names, a.params)), "provenance": prov.to_dict(),
              "vertex_count": X.vertex_count, "maximal_faces": len(X.facets)}
    if a.output:
        _write(a.output, X.to_json())
        _write(str(_sidecar(a.output)), prov.to_json())
        result["path"] = a.output
        result["provenance_path"] = str(_sidecar(a.output))
    else:
        result["complex"] = X.to_dict()
    return True, result, None


def cmd_validate(run: _Run, a):
    X = run.load_complex(a.complex)
    if a.local_to_global:
        prov = run.load_provenance(a.complex)
        r = local_to_global_check(X, a.k, prov)
        res = {"k": a.k, "applicable": r.applicable, "local": r.local, "global": r.global_, "holds": r.holds}
        return r.holds, res, None if r.holds else res
    if a.local:
        r = is_locally_k_large(X, a.k)
        d = r.to_dict()
        return r.verdict, d, None if r.verdict else {"vertex": r.vertex, "cycle": d["link_witness"]}
    r = is_k_large(X, a.k)
    d = r.to_dict()
    wit = None
    if not r.verdict:
        wit = {"cycle": d["shortest_diagonal_free_cycle"]} if r.is_flag else {"non_face_clique": d["flag_witness"]}
    return r.verdict, d, wit


def _budget(a) -> int:
    if a.budget is not None:
        return a.budget
    env = os.environ.get("SYSTOLIC_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SYSTOLIC_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def cmd_fill(run: _Run, a):
    X = run.load_complex(a.complex)
    if a.minimal:
        D = minimal_fill(X, a.cycle, _budget(a))
        chk = verify_minimal_diagram(X, D, a.k)
        res = {"disc": D.to_dict(), "area": D.area, "interior_vertices": len(D.interior_vertices),
               "minimal_check": {"ok": chk.ok, "reasons": chk.reasons}}
        ok = chk.ok
        wit = None if ok else {"reasons": chk.reasons, "disc": D.to_dict()}
    else:
        D = fill_short_cycle(X, a.cycle, a.k)
        v = validate_disc(D, X)
        res = {"disc": D.to_dict(), "area": D.area, "interior_vertices": len(D.interior_vertices), "valid": v.ok}
        ok = v.ok
        wit = None if ok else {"reason": v.reason, "detail": v.detail}
    if a.output:
        _write(a.output, D.to_json())
        res["path"] = a.output
    return ok, res, wit


def cmd_audit(run: _Run, a):
    if a.random:
        rng = random.Random(a.seed)
        failures = []
        for i in range(a.random):
            D = grow_random_disc(rng, rng.randrange(1, a.max_steps + 1))
            led = gauss_bonnet_audit(D)
            if not (validate_disc(D).ok and led.holds):
                failures.append({"index": i, "disc": D.to_dict()})
        return not failures, {"discs": a.random, "seed": a.seed, "failures": len(failures)}, (failures[0] if failures else None)
    if not a.surface:
        raise UsageError("audit needs a disc or surface JSON file (or --random N)")
    d = run.read_json(a.surface)
    try:
        S = DiscDiagram.from_dict(d) if "triangles" in d else Complex.from_dict(d)
    except (SystolicError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{a.surface} is neither a disc nor a complex: {exc}") from None
    led = gauss_bonnet_audit(S)
    res = led.to_dict()
    if isinstance(S, DiscDiagram):
        v = validate_disc(S)
        res["disc_valid"] = v.ok
        res["disc_reason"] = v.reason
    return led.holds, res, None if led.holds else res


def cmd_distance(run: _Run, a):
    X = run.load_complex(a.complex)
    f = bfs_distance(X, a.source)
    if a.target is not None:
        X.check_vertex(a.target)
        d = f[a.target]
        return True, {"source": a.source, "target": a.target, "distance": None if d == float("inf") else d}, None
    dist = {str(v): (None if not f.reachable(v) else int(f.dist[v])) for v in X.vertices}
    ecc = f.eccentricity
    return True, {"source": a.source, "distances": dist, "eccentricity": None if ecc == float("inf") else ecc}, None


def cmd_ball(run: _Run, a):
    X = run.load_complex(a.complex)
    fn = combinatorial_ball if a.command == "ball" else combinatorial_sphere
    B = fn(X, a.base, a.radius)
    res = {"base": a.base, "radius": a.radius, "vertices": list(B.vertices),
           "maximal_faces": [list(f) for f in B.facets]}
    if a.output:
        if B.is_empty:
            raise InputError("refusing to write an empty complex")
        _write(a.output, B.to_json())
        res["path"] = a.output
    return True, res, None


def cmd_thinness(run: _Run, a):
    X = run.load_complex(a.complex)
    if a.all:
        if a.radius is None:
            raise UsageError("--all requires --radius R")
        verts = ball_vertices(X, a.base, a.radius)
        scan = (scan_bigon_thinness if a.mode == "bigon" else scan_triangle_thinness)(X, verts, jobs=a.jobs)
        res = {"mode": a.mode, "base": a.base, "radius": a.radius, "scanned": scan.count,
               "thinness": scan.thinness, "endpoints": list(scan.endpoints)}
        if scan.endpoints:
            fn = bigon_thinness if a.mode == "bigon" else triangle_thinness
            res["report"] = fn(X, *scan.endpoints, bound=a.bound).to_dict()
        ok = a.bound is None or scan.thinness <= a.bound
        return ok, res, None if ok else res.get("report")
    need = 2 if a.mode == "bigon" else 3
    if a.points is None or len(a.points) != need:
        raise UsageError(f"--mode {a.mode} needs --points with {need} vertices, or --all --radius R")
    fn = bigon_thinness if a.mode == "bigon" else triangle_thinness
    r = fn(X, *a.points, bound=a.bound)
    ok = r.within_bound is not False
    return ok, r.to_dict(), None if ok else r.to_dict()


def cmd_project(run: _Run, a):
    X = run.load_complex(a.complex)
    img = project(X, a.base, a.simplex)
    return True, {"base": a.base, "simplex": sorted(a.simplex), "projection": list(img)}, None


def cmd_geodesic(run: _Run, a):
    X = run.load_complex(a.complex)
    g = directed_geodesic_to(X, a.base, a.target)
    chk = verify_directed(X, g)
    res = {"base": a.base, "chain": [list(s) for s in g], "directed": chk.ok}
    ok = chk.ok
    wit = None if ok else chk._asdict()
    if a.verify_selections:
        sel = vertex_selections_are_geodesics(X, g)
        res["selections_checked"] = sel.checked
        res["selections_geodesic"] = sel.ok
        if not sel.ok:
            ok = False
            wit = {"selection": list(sel.witness)}
    return ok, res, wit


def cmd_pfamily(run: _Run, a):
    X = run.load_complex(a.complex)
    fam = p_family(X, a.base, a.m, a.horizon)
    res = fam.to_dict()
    ok = fam.descending and fam.nonempty
    return ok, res, None if ok else res


def cmd_collapse(run: _Run, a):
    X = run.load_complex(a.complex)
    if a.once is not None:
        out, trace = collapse_ball_once(X, a.base, a.once)
        target = combinatorial_ball(X, a.base, a.once - 1)
        ok = out == target
    else:
        ecc = bfs_distance(X, a.base).eccentricity
        if ecc == float("inf"):
            raise InputError("complex is disconnected")
        trace = collapse_to_point(X, a.base, int(ecc))
        ok = trace.end.facets == ((a.base,),) and set(trace.euler_characteristics) == {1}
    trace.replay()
    res = trace.to_dict()
    res["reaches_target"] = ok
    return ok, res, None if ok else {"end": trace.end.to_dict()}


COMMANDS = {
    "generate": cmd_generate,
    "validate": cmd_validate,
    "fill": cmd_fill,
    "audit": cmd_audit,
    "distance": cmd_distance,
    "ball": cmd_ball,
    "sphere": cmd_ball,
    "thinness": cmd_thinness,
    "project": cmd_project,
    "geodesic": cmd_geodesic,
    "pfamily": cmd_pfamily,
    "collapse": cmd_collapse,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="systolic", description="Systolic complexes: checks, fillings, projections, collapses.")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for exhaustive scans (0 = all cores)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized utilities")
    p.add_argument("--indent", type=int, default=None, help="pretty-print the JSON report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a generated complex and its provenance")
    g.add_argument("name", choices=sorted(GENERATORS))
    g.add_argument("params", type=int, nargs="*")
    g.add_argument("-o", "--output")

    v = sub.add_parser("validate", help="k-largeness checks")
    v.add_argument("--k", type=int, required=True)
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--local", action="store_true", help="check every vertex link instead")
    mode.add_argument("--local-to-global", action="store_true", help="compare local and global checks")
    v.add_argument("complex")

    f = sub.add_parser("fill", help="filling diagrams of cycles")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--minimal", action="store_true")
    f.add_argument("--budget", type=int, default=None)
    f.add_argument("--cycle", type=_ints, required=True)
    f.add_argument("-o", "--output")
    f.add_argument("complex")

    au = sub.add_parser("audit", help="Gauss-Bonnet ledger of a disc or closed surface")
    au.add_argument("surface", nargs="?")
    au.add_argument("--random", type=int, default=0, metavar="N", help="audit N seeded random discs instead")
    au.add_argument("--max-steps", type=int, default=60)

    d = sub.add_parser("distance", help="graph distances from a vertex")
    d.add_argument("complex")
    d.add_argument("--source", type=int, required=True)
    d.add_argument("--target", type=int)

    for name in ("ball", "sphere"):
        b = sub.add_parser(name, help=f"combinatorial {name} as a full subcomplex")
        b.add_argument("complex")
        b.add_argument("--base", type=int, required=True)
        b.add_argument("--radius", type=int, required=True)
        b.add_argument("-o", "--output")

    t = sub.add_parser("thinness", help="vertex-level thinness of bigons or triangles")
    t.add_argument("--mode", choices=("bigon", "triangle"), required=True)
    t.add_argument("complex")
    t.add_argument("--points", type=_ints)
    t.add_argument("--all", action="store_true", help="scan all pairs/triples in a ball")
    t.add_argument("--base", type=int, default=0)
    t.add_argument("--radius", type=int)
    t.add_argument("--bound", type=int)

    pr = sub.add_parser("project", help="projection of a sphere simplex towards a base vertex")
    pr.add_argument("complex")
    pr.add_argument("--base", type=int, required=True)
    pr.add_argument("--simplex", type=_ints, required=True)

    ge = sub.add_parser("geodesic", help="directed geodesic of iterated projections")
    ge.add_argument("complex")
    ge.add_argument("--base", type=int, required=True)
    ge.add_argument("--target", type=_ints, required=True)
    ge.add_argument("--verify-selections", action="store_true")

    pf = sub.add_parser("pfamily", help="descending P(m, n) families")
    pf.add_argument("complex")
    pf.add_argument("--base", type=int, required=True)
    pf.add_argument("--m", type=int, default=1)
    pf.add_argument("--horizon", type=int, required=True)

    c = sub.add_parser("collapse", help="collapse balls around a base vertex")
    c.add_argument("complex")
    c.add_argument("--base", type=int, required=True)
    how = c.add_mutually_exclusive_group(required=True)
    how.add_argument("--to-point", action="store_true")
    how.add_argument("--once", type=int, metavar="N")
    return p


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    raise TypeError(f"not serialisable: {type(x).__name__}")


def main(argv: list[str] | None = None) -> int:
    t0 = time.perf_counter()
    report: dict = {"command": None, "inputs": {}, "version": __version__, "backend": kernels.BACKEND}
    indent = None
    code = 0
    try:
        args = build_parser().parse_args(argv)
        indent = args.indent
        report["command"] = args.command
        run = _Run(args.command)
        try:
            verdict, result, witness = COMMANDS[args.command](run, args)
            code = 0 if verdict else 1
            report.update(verdict=bool(verdict), result=result, witness=witness)
        except (UnknownVertex, NotAFace, NotEquidistant, MalformedSimplex, SelfLoop, EmptyInput) as exc:
            # bad vertex ids or simplices given on the command line
            code = 2
            report.update(verdict=None, error={"type": type(exc).__name__, "message": str(exc)})
        except SystolicError as exc:
            # other library errors are verdicts about the input (for example a non-systolic complex)
            code = 1
            report.update(verdict=False, witness=None, error={"type": type(exc).__name__, "message": str(exc)})
        finally:
            report["inputs"] = run.inputs
    except (UsageError, InputError) as exc:
        code = 2
        kind = "usage" if isinstance(exc, UsageError) else "input"
        report.update(verdict=None, error={"type": kind, "message": str(exc)})
    except (ValueError, KeyError) as exc:
        code = 2
        report.update(verdict=None, error={"type": "usage", "message": str(exc)})
    report["timing"] = round(time.perf_counter() - t0, 6)
    sys.stdout.write(json.dumps(report, default=_jsonable, indent=indent, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
