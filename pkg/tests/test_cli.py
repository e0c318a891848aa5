from __future__ import annotations

import json
import subprocess
import sys

import pytest

from systolic import cli
from systolic.collapse import collapse_ball_once
from systolic.diagrams import hexagonal_star, minimal_fill
from systolic.generators import euclid_patch, hyperbolic_patch, octahedron
from systolic.largeness import is_k_large, is_locally_k_large
from systolic.metric import triangle_thinness
from systolic.projection import p_family


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, (X, prov) in {
        "octa": octahedron(),
        "e3": euclid_patch(3),
        "h3": hyperbolic_patch(7, 3),
        "h4": hyperbolic_patch(7, 4),
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(X.to_json())
        paths[name] = p
    star = tmp_path / "star.json"
    star.write_text(hexagonal_star().to_json())
    paths["star"] = star
    return paths


def test_validate_octahedron(capsys, files):
    code, rep = run(capsys, "validate", "--k", 6, files["octa"])
    assert code == 1 and rep["verdict"] is False
    assert len(rep["witness"]["cycle"]) == 4
    assert rep["inputs"][str(files["octa"])]


def test_audit_star(capsys, files):
    code, rep = run(capsys, "audit", files["star"])
    assert code == 0
    assert rep["result"]["boundary_sum"] == 6 and rep["result"]["interior_sum"] == 0


def test_generate_then_validate_torus(capsys, tmp_path):
    out = tmp_path / "t.json"
    code, rep = run(capsys, "generate", "torus", 4, 4, "-o", out)
    assert code == 0 and out.exists() and (tmp_path / "t.provenance.json").exists()
    code, rep = run(capsys, "validate", "--k", 6, "--local", out)
    assert code == 0 and rep["verdict"] is True


def test_local_to_global_uses_sidecar(capsys, tmp_path):
    out = tmp_path / "h.json"
    run(capsys, "generate", "hyperbolic", 7, 3, "-o", out)
    code, rep = run(capsys, "validate", "--k", 7, "--local-to-global", out)
    assert code == 0 and rep["result"]["applicable"] and rep["result"]["holds"]
    assert len(rep["inputs"]) == 2


def test_generate_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "generate", "euclid", 2, "-o", a)
    run(capsys, "generate", "euclid", 2, "-o", b)
    assert a.read_bytes() == b.read_bytes()


def test_verdicts_match_library(capsys, files):
    X = hyperbolic_patch(7, 3).complex
    _, rep = run(capsys, "validate", "--k", 7, files["h3"])
    assert rep["result"] == json.loads(json.dumps(is_k_large(X, 7).to_dict()))
    _, rep = run(capsys, "validate", "--k", 8, "--local", files["h3"])
    assert rep["result"] == json.loads(json.dumps(is_locally_k_large(X, 8).to_dict()))
    H = hyperbolic_patch(7, 4).complex
    _, rep = run(capsys, "thinness", "--mode", "triangle", files["h4"], "--points", "1,30,60")
    assert rep["result"] == json.loads(json.dumps(triangle_thinness(H, 1, 30, 60).to_dict()))
    _, rep = run(capsys, "pfamily", files["h4"], "--base", 0, "--m", 1, "--horizon", 4)
    assert rep["result"] == json.loads(json.dumps(p_family(H, 0, 1, 4).to_dict()))
    assert rep["verdict"] is True


def test_fill(capsys, files, tmp_path):
    code, rep = run(capsys, "fill", "--k", 6, "--cycle", "0,1,5,2", files["octa"])
    assert code == 0 and rep["result"]["area"] == 2
    code, rep = run(capsys, "fill", "--k", 6, "--cycle", "1,2,3,4", files["octa"])
    assert code == 1 and rep["error"]["type"] == "NoDiagonal"
    out = tmp_path / "disc.json"
    code, rep = run(capsys, "fill", "--k", 6, "--minimal", "--cycle", "1,2,3,4,5,6", files["e3"], "-o", out)
    assert code == 0 and rep["result"]["area"] == 6 and out.exists()
    X = euclid_patch(3).complex
    assert rep["result"]["disc"] == minimal_fill(X, [1, 2, 3, 4, 5, 6]).to_dict()


def test_budget_env(capsys, files, monkeypatch):
    monkeypatch.setenv("SYSTOLIC_BUDGET", "5")
    code, rep = run(capsys, "fill", "--k", 6, "--minimal", "--cycle", "1,2,3,4,5,6", files["e3"])
    assert code == 1 and rep["error"]["type"] == "BudgetExhausted"
    # an explicit flag wins over the environment
    code, rep = run(capsys, "fill", "--k", 6, "--minimal", "--budget", 8, "--cycle", "1,2,3,4,5,6", files["e3"])
    assert code == 0


def test_random_audit_seeded(capsys):
    code1, rep1 = run(capsys, "--seed", 7, "audit", "--random", 30)
    code2, rep2 = run(capsys, "--seed", 7, "audit", "--random", 30)
    assert code1 == code2 == 0 and rep1["result"] == rep2["result"]
    assert rep1["result"]["seed"] == 7
    _, rep0 = run(capsys, "audit", "--random", 5)
    assert rep0["result"]["seed"] == 0


def test_distance_ball_sphere(capsys, files, tmp_path):
    code, rep = run(capsys, "distance", files["e3"], "--source", 0)
    assert code == 0 and rep["result"]["eccentricity"] == 3
    code, rep = run(capsys, "ball", files["e3"], "--base", 0, "--radius", 1)
    assert code == 0 and len(rep["result"]["maximal_faces"]) == 6
    out = tmp_path / "s.json"
    code, rep = run(capsys, "sphere", files["e3"], "--base", 0, "--radius", 1, "-o", out)
    assert code == 0 and len(rep["result"]["vertices"]) == 6 and out.exists()


def test_thinness_scan(capsys, files):
    code, rep = run(capsys, "--jobs", 2, "thinness", "--mode", "bigon", files["h4"], "--all", "--radius", 3, "--bound", 1)
    assert code == 0 and rep["result"]["thinness"] <= 1
    code, rep = run(capsys, "thinness", "--mode", "triangle", files["e3"], "--all", "--radius", 3, "--bound", 0)
    assert code == 1 and rep["witness"]["thinness"] >= 1


def test_project_and_geodesic(capsys, files):
    code, rep = run(capsys, "project", files["e3"], "--base", 0, "--simplex", "1,2")
    assert code == 0 and rep["result"]["projection"] == [0]
    code, rep = run(capsys, "geodesic", files["h3"], "--base", 0, "--target", 30, "--verify-selections")
    assert code == 0 and rep["result"]["directed"] and rep["result"]["selections_geodesic"]
    code, rep = run(capsys, "project", files["octa"], "--base", 0, "--simplex", 5)
    assert code == 1 and rep["error"]["type"] == "NonSimplexProjection"


def test_collapse(capsys, files):
    code, rep = run(capsys, "collapse", files["e3"], "--base", 0, "--to-point")
    assert code == 0 and rep["result"]["end"]["maximal_faces"] == [[0]]
    code, rep = run(capsys, "collapse", files["h3"], "--base", 0, "--once", 2)
    X = hyperbolic_patch(7, 3).complex
    assert code == 0 and rep["result"] == json.loads(json.dumps(collapse_ball_once(X, 0, 2)[1].to_dict())) | {
        "reaches_target": True
    }
    code, rep = run(capsys, "collapse", files["octa"], "--base", 0, "--once", 2)
    assert code == 1 and rep["error"]["type"] == "StuckComplex"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["validate", "x.json"],
        ["validate", "--k", "6", "/nonexistent.json"],
        ["thinness", "--mode", "bigon", "X"],
        ["collapse", "X", "--base", "0"],
        ["generate", "torus", "4"],
        ["fill", "--k", "6", "--cycle", "a,b", "X"],
    ],
)
def test_usage_errors_are_json(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == 2 and rep["verdict"] is None and rep["error"]["message"]


def test_malformed_inputs(capsys, tmp_path, files):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, rep = run(capsys, "validate", "--k", 6, bad)
    assert code == 2 and rep["error"]["type"] == "input"
    empty = tmp_path / "empty.json"
    empty.write_text('{"maximal_faces": []}')
    code, rep = run(capsys, "validate", "--k", 6, empty)
    assert code == 2
    code, rep = run(capsys, "project", files["octa"], "--base", 0, "--simplex", "0,5")
    assert code == 2 and rep["error"]["type"] == "NotAFace"
    code, rep = run(capsys, "project", files["octa"], "--base", 0, "--simplex", "1,5")
    assert code == 2 and rep["error"]["type"] == "NotEquidistant"
    code, rep = run(capsys, "distance", files["octa"], "--source", 99)
    assert code == 2 and rep["error"]["type"] == "UnknownVertex"


def test_module_entry_point(files):
    out = subprocess.run(
        [sys.executable, "-m", "systolic.cli", "validate", "--k", "5", str(files["octa"])],
        capture_output=True,
        text=True,
    )
    rep = json.loads(out.stdout)
    assert out.returncode == 1 and rep["command"] == "validate" and rep["version"]
