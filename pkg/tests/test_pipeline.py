import random

import pytest
from hypothesis import given, settings

from thinwalls.immersion import check_embedding, spider
from thinwalls.multigraph import Multigraph
from thinwalls.synthesis.parameters import Parameters
from thinwalls.synthesis.pipeline import (CERTIFICATE, INCONCLUSIVE, WALL, SynthesisConfig, build_auxiliary,
                                          contract_auxiliary, instance_alpha, synthesize)
from thinwalls.treecut import WidthCertificate, certify_width, check_certificate
from thinwalls.walls import build_wall

from conftest import multigraphs

HEAVY = 25  # more than 6 * 2^2


def no_precheck(**kw):
    return SynthesisConfig(precheck=False, **kw)


def heavy_path(names):
    return [(a, b, HEAVY) for a, b in zip(names, names[1:])]


def assert_wall(res, g, route):
    assert res.status == WALL and res.route == route
    assert check_embedding(build_wall(2).graph, g, res.embedding) == []


def test_auxiliary_examples():
    simple = build_wall(3).graph
    assert build_auxiliary(simple, 2).graph.num_edges() == 0
    g = Multigraph("ab", [("a", "b", 25)])
    aux = build_auxiliary(g, 2)
    assert aux.graph.num_edges() == 1 and aux.threshold == 24
    assert build_auxiliary(Multigraph("ab", [("a", "b", 24)]), 2).graph.num_edges() == 0


@given(multigraphs(max_n=8, max_mult=30))
def test_auxiliary_conservation(g):
    aux = build_auxiliary(g, 2)
    gp, branch = contract_auxiliary(g, aux)
    assert sorted(frozenset(b) for b in branch.values()) == sorted(aux.components)
    for x in gp.vertices:
        for y in gp.vertices:
            if x != y:
                total = sum(g.mult(u, v) for u in branch[x] for v in branch[y])
                assert gp.mult(x, y) == total
    inside = sum(m for u, v, m in g.edges() if any(u in b and v in b for b in branch.values()))
    assert gp.num_edges() + inside == g.num_edges()


def test_star_certified():
    g = Multigraph(range(7), [(0, i) for i in range(1, 7)])
    res = synthesize(g, 2)
    assert res.status == CERTIFICATE and res.alpha == 2
    assert check_certificate(g, res.decomposition, res.certificate)
    assert isinstance(res.closed_form["alpha"], str)


def test_wall_input_direct():
    g = build_wall(2).graph
    assert_wall(synthesize(g, 2), g, "direct search")


def test_heavy_vertex_route():
    g = spider(HEAVY, 8)
    assert_wall(synthesize(g, 2, config=no_precheck()), g, "heavy vertex in A")


def test_star_minor_route():
    # two adjacent heavy centres with four heavy leaves each: no vertex of A
    # has eight neighbours but the pair does
    centres = [("c", 0), ("c", 1)]
    leaves = [("l", i) for i in range(8)]
    edges = [(*centres, HEAVY)] + [(centres[i // 4], leaf, HEAVY) for i, leaf in enumerate(leaves)]
    g = Multigraph(centres + leaves, edges)
    assert build_auxiliary(g, 2).max_degree < 8
    assert_wall(synthesize(g, 2, config=no_precheck()), g, "star minor in A")


def test_apex_route():
    path = list(range(24))
    g = Multigraph(path + ["x"], heavy_path(path) + [("x", i, 1) for i in path])
    assert_wall(synthesize(g, 2, config=no_precheck()), g, "apex over a path of A")


def test_comb_route():
    xs = [("x", i) for i in range(24)]
    ys = [("y", i) for i in range(24)]
    g = Multigraph(xs + ys, heavy_path(xs) + heavy_path(ys) + [(x, y, 1) for x, y in zip(xs, ys)])
    assert_wall(synthesize(g, 2, config=no_precheck()), g, "comb between components of A")


def test_wall_lifted_through_split():
    # heavy spider glued to a triangle along two edges
    g = Multigraph(list(range(9)) + ["a", "b", "c"],
                   [(0, i, HEAVY) for i in range(1, 9)] + [("a", "b"), ("b", "c"), ("a", "c"), ("a", 1), ("b", 2)])
    res = synthesize(g, 2, config=no_precheck())
    assert_wall(res, g, "heavy vertex in A")


def test_instance_alpha_is_least():
    rng = random.Random(2)
    for _ in range(5):
        n = rng.randint(5, 9)
        g = Multigraph(range(n), [(rng.randrange(v), v, rng.randint(1, 3)) for v in range(1, n)])
        res = synthesize(g, 2)
        assert res.status == CERTIFICATE
        assert res.alpha == instance_alpha(g, res.decomposition)
        if res.alpha > 0:
            assert not isinstance(certify_width(g, res.decomposition, res.alpha - 1), WidthCertificate)


def test_piece_reports():
    k5 = Multigraph(range(5), [(u, v, 2) for u in range(5) for v in range(u + 1, 5)])
    res = synthesize(k5, 2, config=no_precheck())
    assert res.status == CERTIFICATE
    rep = res.pieces[0]
    assert rep.treewidth == 4 and rep.bounds.adhesion <= rep.bounds.adhesion_bound
    assert rep.constructive_alpha >= res.alpha


def test_caps_are_inconclusive():
    k5 = Multigraph(range(5), [(u, v, 2) for u in range(5) for v in range(u + 1, 5)])
    res = synthesize(k5, 2, config=no_precheck(thin_cap=3))
    assert res.status == INCONCLUSIVE and any("cap" in line for line in res.trace)
    res = synthesize(k5, 2, config=no_precheck(treewidth_cap=3))
    assert res.status == INCONCLUSIVE


def test_closed_form_with_constants():
    g = Multigraph(range(3), [(0, 1), (1, 2)])
    res = synthesize(g, 2, params=Parameters(2, 1, 1, 1))
    assert res.status == CERTIFICATE and isinstance(res.closed_form["alpha"], int)
    assert res.alpha <= res.closed_form["alpha"]


def test_rejects_small_ell():
    with pytest.raises(ValueError):
        synthesize(Multigraph([0]), 1)


@settings(max_examples=25)
@given(multigraphs(max_n=8, max_mult=3, connected=True))
def test_certificates_always_check(g):
    res = synthesize(g, 2)
    assert res.status in (CERTIFICATE, WALL)
    if res.status == CERTIFICATE:
        assert check_certificate(g, res.decomposition, res.certificate)
    else:
        assert check_embedding(build_wall(2).graph, g, res.embedding) == []
