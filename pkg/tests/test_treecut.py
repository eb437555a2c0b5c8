import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from thinwalls.multigraph import Multigraph, contract, edge_cut
from thinwalls.thinness import is_almost_alpha_thin
from thinwalls.treecut import (Peripheral, TreeCutDecomposition, WidthCertificate, WidthViolation, adhesion,
                               certify_width, check_certificate, edge_sides, enumerate_decompositions, free_trees,
                               glue, normalised, reduce_low_degree, reduced_torso, search_certificate,
                               three_centre, torso, twin_classes, validate)

from conftest import multigraphs


@st.composite
def decompositions(draw, g, max_nodes=5):
    k = draw(st.integers(1, max_nodes))
    tree = tuple((draw(st.integers(0, t - 1)), t) for t in range(1, k))
    parts = {t: set() for t in range(k)}
    for v in g.sorted_vertices():
        parts[draw(st.integers(0, k - 1))].add(v)
    return TreeCutDecomposition(tree, parts)


def star(n, mult=1):
    return Multigraph(range(n + 1), [(0, i, mult) for i in range(1, n + 1)])


def test_validate_examples():
    g = star(3)
    assert validate(g, TreeCutDecomposition.trivial(g)) == []
    dup = TreeCutDecomposition(((0, 1),), {0: {0, 1}, 1: {1, 2, 3}})
    assert any("lies in parts" in p for p in validate(g, dup))
    missing = TreeCutDecomposition(((0, 1),), {0: {0}, 1: {1}})
    assert any("in no part" in p for p in validate(g, missing))
    cyclic = TreeCutDecomposition(((0, 1), (1, 2), (0, 2)), {0: {0, 1, 2, 3}, 1: set(), 2: set()})
    assert validate(g, cyclic)
    spread = TreeCutDecomposition(tuple(("s", i) for i in range(1, 4)), {"s": {0}, 1: {1}, 2: {2}, 3: {3}})
    assert validate(g, spread) == []


def test_adhesion_examples():
    g = star(5)
    assert adhesion(g, TreeCutDecomposition.trivial(g))[0] == 0
    d = TreeCutDecomposition(((0, 1),), {0: {0, 1}, 1: {2, 3, 4, 5}})
    assert adhesion(g, d)[0] == 4
    with pytest.raises(ValueError):
        adhesion(g, TreeCutDecomposition(((0, 1),), {0: {0}, 1: {1}}))


def test_torso_examples():
    g = star(3)
    tor = torso(g, TreeCutDecomposition.trivial(g), 0)
    assert tor.graph == g and not tor.peripheral
    empty = Multigraph(range(3))
    tor = torso(empty, TreeCutDecomposition(((0, 1),), {0: {0, 1}, 1: {2}}), 0)
    assert len(tor.graph) == 3 and tor.graph.num_edges() == 0 and len(tor.peripheral) == 1
    with pytest.raises(KeyError):
        torso(g, TreeCutDecomposition.trivial(g), 5)


def test_torso_of_path_matches_contraction():
    p = Multigraph(range(6), [(i, i + 1) for i in range(5)])
    d = TreeCutDecomposition(((0, 1), (1, 2)), {0: {0, 1}, 1: {2, 3}, 2: {4, 5}})
    tor = torso(p, d, 1)
    oracle, image = contract(p, [{0, 1}, {2}, {3}, {4, 5}], names=[Peripheral(1, 0), 2, 3, Peripheral(1, 2)])
    assert tor.graph == oracle


def test_three_centre_examples():
    g = Multigraph(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    assert three_centre(g, {0, 1, 2}).graph == g.subgraph([0, 1, 2])
    c = Multigraph(range(5), [(i, (i + 1) % 5) for i in range(5)])
    assert len(three_centre(c).graph) == 0
    k4 = Multigraph(range(4), itertools.combinations(range(4), 2))
    assert three_centre(k4).graph == k4


def test_reduce_log():
    g = Multigraph(range(4), [(0, 1), (1, 2), (2, 3)])
    log = []
    assert reduce_low_degree(g, {0}, log=log) == Multigraph([0])
    assert [(kind, v) for kind, v, _ in log] == [("suppress", 1), ("suppress", 2), ("delete", 3)]
    assert set(log[1][2]) == {0, 3} and log[2][2] == 0


def test_certify_trivial_path():
    p = Multigraph(range(5), [(i, i + 1) for i in range(4)])
    cert = certify_width(p, TreeCutDecomposition.trivial(p), 0)
    assert isinstance(cert, WidthCertificate) and check_certificate(p, TreeCutDecomposition.trivial(p), cert)


def test_certify_reports_adhesion_first():
    g = star(4)
    d = TreeCutDecomposition(((0, 1),), {0: {0}, 1: {1, 2, 3, 4}})
    out = certify_width(g, d, 1)
    assert isinstance(out, WidthViolation) and out.kind == "adhesion" and out.locus == (0, 1)


def test_star_torso_violation_named():
    g = star(6)
    d = TreeCutDecomposition(tuple(("c", i) for i in range(1, 7)),
                             {"c": {0}, **{i: {i} for i in range(1, 7)}})
    out = certify_width(g, d, 1, mode="torso")
    assert isinstance(out, WidthViolation) and out.kind == "torso" and out.locus == "c"
    assert isinstance(certify_width(g, d, 1, mode="3-centre"), WidthCertificate)


def test_modes_differ_on_doubled_star():
    g = star(3, 2)
    d = TreeCutDecomposition(tuple(("c", i) for i in range(1, 4)), {"c": {0}, **{i: {i} for i in range(1, 4)}})
    tor = torso(g, d, "c")
    assert len(reduced_torso(tor, "torso")) == 4
    assert len(reduced_torso(tor, "degree-1")) == 4
    assert len(reduced_torso(tor, "3-centre")) == 1
    with pytest.raises(ValueError):
        reduced_torso(tor, "bogus")


def test_check_certificate_rejects_tampering():
    g = star(6)
    d = TreeCutDecomposition(tuple(("c", i) for i in range(1, 7)),
                             {"c": {0}, **{i: {i} for i in range(1, 7)}})
    cert = certify_width(g, d, 1)
    assert check_certificate(g, d, cert)
    bad = WidthCertificate(0, cert.adhesions, cert.witnesses, cert.mode)
    assert not check_certificate(g, d, bad)
    missing = WidthCertificate(1, cert.adhesions, {}, cert.mode)
    assert not check_certificate(g, d, missing)


def test_glue_examples():
    da = TreeCutDecomposition.trivial(Multigraph([1, "b"]))
    db = TreeCutDecomposition.trivial(Multigraph([2, "a"]))
    d = glue(da, db, "b", "a")
    assert len(d.parts) == 2 and d.tree == ((("A", 0), ("B", 0)),)
    with pytest.raises(ValueError):
        glue(da, db, "zz", "a")


def test_glue_new_edge_is_the_cut():
    # A and B are triangles joined by two edges
    g = Multigraph(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (2, 5)])
    a, b = {0, 1, 2}, {3, 4, 5}
    ga = Multigraph(list(a) + ["b"], [(u, v, m) for u, v, m in g.subgraph(a).edges()] + [(0, "b"), (2, "b")])
    gb = Multigraph(list(b) + ["a"], [(u, v, m) for u, v, m in g.subgraph(b).edges()] + [(3, "a"), (5, "a")])
    da = TreeCutDecomposition(((0, 1),), {0: a, 1: {"b"}})
    db = TreeCutDecomposition.trivial(gb)
    d = glue(da, db, "b", "a")
    assert validate(g, d) == []
    per = adhesion(g, d)[1]
    assert per[(("A", 1), ("B", 0))] == edge_cut(g, a).size == 2
    assert per[(("A", 0), ("A", 1))] == adhesion(ga, da)[1][(0, 1)]


def test_json_round_trip():
    d = TreeCutDecomposition((("x", "y"),), {"x": {"a", "b"}, "y": set()})
    back = TreeCutDecomposition.from_json(json.loads(d.dumps()))
    assert back == d


@pytest.mark.parametrize("n", range(1, 9))
def test_free_trees_match_networkx(n):
    ours = free_trees(n)
    assert len(ours) == sum(1 for _ in nx.nonisomorphic_trees(n)) if n > 1 else len(ours) == 1
    graphs = [nx.Graph(list(e)) if e else nx.empty_graph(1) for e in ours]
    for x, y in itertools.combinations(graphs, 2):
        assert not nx.is_isomorphic(x, y)


def test_twin_classes():
    assert twin_classes(star(3)) == [[0], [1, 2, 3]]


def test_enumeration_is_normalised_and_valid():
    g = star(3)
    seen = list(enumerate_decompositions(g, 4))
    assert seen and all(normalised(d) and not validate(g, d) for d in seen)
    assert all(adhesion(g, d)[0] <= 1 for d in enumerate_decompositions(g, 4, max_adhesion=1))


def test_search_finds_star_certificate():
    res = search_certificate(star(6), 1, 7, mode="torso")
    assert not res.found and res.examined > 0 and res.rejections.get("torso")
    res = search_certificate(star(6), 1, 7)
    assert res.found and check_certificate(star(6), res.decomposition, res.certificate)


@given(multigraphs(max_n=8), st.data())
def test_three_centre_confluent(g, data):
    prot = data.draw(st.sets(st.sampled_from(g.sorted_vertices())))
    base = three_centre(g, prot).graph
    seed = data.draw(st.integers(0, 10 ** 6))
    for i in range(5):
        assert three_centre(g, prot, rng=random.Random(seed + i)).graph == base
    assert all(v in prot or base.degree(v) >= 3 for v in base.vertices)


@given(multigraphs(max_n=7), st.data())
def test_almost_thin_passes_to_three_centre(g, data):
    prot = data.draw(st.sets(st.sampled_from(g.sorted_vertices())))
    alpha = data.draw(st.integers(0, 3))
    if is_almost_alpha_thin(g, alpha) is not None:
        assert is_almost_alpha_thin(three_centre(g, prot).graph, alpha) is not None


@given(multigraphs(max_n=7, connected=True), st.data())
def test_sides_partition_vertex_set(g, data):
    d = data.draw(decompositions(g))
    assert validate(g, d) == []
    for e in d.tree:
        ya, yb = edge_sides(d, e)
        assert ya | yb == g.vertices and not ya & yb
        assert adhesion(g, d)[1][e] == edge_cut(g, ya).size


@given(multigraphs(max_n=7, max_mult=4, connected=True), st.data())
def test_big_adhesion_keeps_peripherals(g, data):
    d = data.draw(decompositions(g))
    per = adhesion(g, d)[1]
    if any(s < 3 for s in per.values()):
        return
    for t in d.nodes:
        tor = torso(g, d, t)
        centre = three_centre(tor.graph, tor.core).graph
        assert set(tor.peripheral) <= set(centre.vertices)
