import json

import pytest
from hypothesis import given

from thinwalls.cli import (INCONCLUSIVE, INPUT_ERROR, NEGATIVE, OK, graph_from_json, graph_to_dot, graph_to_json,
                           run)
from thinwalls.multigraph import Multigraph, vlabel
from thinwalls.treecut import TreeCutDecomposition
from thinwalls.walls import build_wall

from conftest import multigraphs


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def call(capsys, argv):
    capsys.readouterr()
    rc = run(argv)
    return rc, json.loads(capsys.readouterr().out)


def star_json(n):
    return {"vertices": ["c"] + [f"l{i}" for i in range(n)], "edges": [["c", f"l{i}", 1] for i in range(n)]}


@given(multigraphs(max_n=7, max_mult=4))
def test_graph_json_round_trip(g):
    h = g.relabel({v: vlabel(v) for v in g.vertices})
    assert graph_from_json(json.loads(json.dumps(graph_to_json(h)))) == h


def test_tcd_json_round_trip():
    d = TreeCutDecomposition([("a", "b"), ("a", "c")], {"a": {"x"}, "b": {"y", "z"}, "c": set()})
    back = TreeCutDecomposition.from_json(json.loads(json.dumps(d.to_json())))
    assert back.to_json() == d.to_json()


def test_dot_labels_multiplicity():
    dot = graph_to_dot(Multigraph("ab", [("a", "b", 3)]))
    assert '"a" -- "b" [label="3"];' in dot and dot.startswith("graph G {")


def test_gen_wall(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert run(["gen-wall", "--ell", "4", "--out", str(out)]) == OK
    data = json.loads(out.read_text())
    assert len(data["vertices"]) == 30 and len(data["edges"]) == 38
    assert run(["--dot", "gen-wall", "--ell", "2"]) == OK
    assert capsys.readouterr().out.startswith("graph W2 {")


def test_certify_wall(tmp_path, capsys):
    out = tmp_path / "w.json"
    run(["gen-wall", "--ell", "3", "--out", str(out)])
    rc, data = call(capsys, ["certify-wall", "--in", str(out)])
    assert rc == OK and data["z"] == ["4,3"] and data["three_connected"]["ok"]
    rc, data = call(capsys, ["certify-wall", "--ell", "4"])
    assert rc == OK and data["z"] == ["3,4", "5,4"] and data["well_linked"]["ok"]
    assert run(["certify-wall", "--ell", "2"]) == INPUT_ERROR
    assert run(["certify-wall"]) == INPUT_ERROR
    bad = write(tmp_path / "bad.json", star_json(3))
    assert run(["certify-wall", "--in", bad]) == INPUT_ERROR


def test_check_thin(tmp_path, capsys):
    path = write(tmp_path / "s.json", star_json(6))
    rc, data = call(capsys, ["check-thin", "--in", path, "--alpha", "1"])
    assert rc == NEGATIVE and data["status"] == "absent"
    rc, data = call(capsys, ["check-thin", "--in", path, "--alpha", "2"])
    assert rc == OK and max(data["ordering"]["jumps"]) <= 2
    rc, data = call(capsys, ["check-thin", "--in", path, "--alpha", "1", "--almost"])
    assert rc == NEGATIVE and data["deletion_sets_searched"] >= 1
    assert run(["check-thin", "--in", path, "--alpha", "2", "--almost"]) == OK
    rc, data = call(capsys, ["check-thin", "--in", path])
    assert rc == OK and data["alpha"] == 2
    rc, data = call(capsys, ["--cap", "3", "check-thin", "--in", path, "--alpha", "1"])
    assert rc == INCONCLUSIVE and data["status"] == "inconclusive"


def test_check_immersion(tmp_path):
    w = tmp_path / "w.json"
    run(["gen-wall", "--ell", "2", "--out", str(w)])
    tri = write(tmp_path / "t.json", {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["a", "c"]]})
    tree = write(tmp_path / "s.json", star_json(8))
    doubled = star_json(6)
    doubled["edges"] = [[a, b, 2] for a, b, _ in doubled["edges"]]
    doubled = write(tmp_path / "d.json", doubled)
    assert run(["check-immersion", "--pattern", tri, "--host", str(w)]) == OK
    assert run(["check-immersion", "--pattern", str(w), "--host", tree]) == NEGATIVE
    assert run(["check-immersion", "--pattern", str(w), "--host", doubled]) == OK
    assert run(["check-immersion", "--pattern", str(w), "--host", doubled, "--node-limit", "1"]) == INCONCLUSIVE


def test_certify(tmp_path, capsys):
    n = 6
    g = write(tmp_path / "g.json", star_json(n))
    tcd = {"tree": [["r", f"t{i}"] for i in range(n)],
           "parts": {"r": ["c"], **{f"t{i}": [f"l{i}"] for i in range(n)}}}
    t = write(tmp_path / "d.json", tcd)
    assert run(["certify", "--in", g, "--tcd", t, "--alpha", "1"]) == OK
    rc, out = call(capsys, ["certify", "--graph", g, "--tcd", t, "--alpha", "1", "--mode", "torso"])
    assert rc == NEGATIVE and out["kind"] == "torso" and out["locus"] == "r"
    bad = write(tmp_path / "bad.json", {"tree": [], "parts": {"r": ["c"]}})
    assert run(["certify", "--in", g, "--tcd", bad, "--alpha", "1"]) == INPUT_ERROR


def test_decompose(tmp_path, capsys):
    g = write(tmp_path / "g.json", star_json(6))
    out, cert = tmp_path / "d.json", tmp_path / "c.json"
    assert run(["decompose", "--in", g, "--ell", "2", "--out", str(out), "--cert", str(cert)]) == OK
    assert json.loads(cert.read_text())["alpha"] == 2
    assert run(["certify", "--in", g, "--tcd", str(out), "--alpha", "2"]) == OK
    w = tmp_path / "w.json"
    run(["gen-wall", "--ell", "2", "--out", str(w)])
    capsys.readouterr()
    assert run(["decompose", "--in", str(w), "--ell", "2"]) == NEGATIVE
    assert json.loads(capsys.readouterr().out)["route"] == "direct search"


def test_input_errors(tmp_path, capsys):
    broken = tmp_path / "x.json"
    broken.write_text('{"vertices": [,]}')
    assert run(["check-thin", "--in", str(broken)]) == INPUT_ERROR
    assert "line 1, column" in capsys.readouterr().err
    assert run(["check-thin", "--in", str(tmp_path / "missing.json")]) == INPUT_ERROR
    ints = write(tmp_path / "i.json", {"vertices": [1, 2], "edges": [[1, 2]]})
    assert run(["check-thin", "--in", ints]) == INPUT_ERROR
    assert run(["gen-wall"]) == INPUT_ERROR
    assert run(["--json", "--dot", "gen-wall", "--ell", "2"]) == INPUT_ERROR
    assert run(["corpus", "run", "--only", "nope"]) == INPUT_ERROR


def test_corpus_only(capsys):
    assert run(["corpus", "run", "--only", "two-triangles"]) == OK
    assert json.loads(capsys.readouterr().out)["two-triangles"]["ok"]


def test_help_exits_zero():
    assert run(["--help"]) == OK
