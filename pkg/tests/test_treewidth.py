import itertools

import networkx as nx
import pytest
from hypothesis import given

from thinwalls.multigraph import Multigraph
from thinwalls.synthesis.treewidth import (ConversionDefect, TreeDecomposition, decomposition_from_order,
                                           exact_treewidth, td_to_tcd, validate_td)
from thinwalls.treecut import adhesion, validate
from thinwalls.walls import build_wall

from conftest import multigraphs, to_nx


def brute_treewidth(g):
    """Best elimination ordering by trying all of them."""
    vs = g.sorted_vertices()
    if not vs:
        return -1
    best = None
    for order in itertools.permutations(vs):
        adj = {v: set(g.neighbours(v)) for v in vs}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            for x in nb:
                adj[x] |= nb - {x}
                adj[x].discard(v)
        best = width if best is None else min(best, width)
    return best


def test_examples():
    tree = Multigraph(range(6), [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])
    assert exact_treewidth(tree)[0] == 1
    for n in (3, 5, 8):
        c = Multigraph(range(n), [(i, (i + 1) % n, 2) for i in range(n)])
        assert exact_treewidth(c)[0] == 2
    assert exact_treewidth(Multigraph())[0] == -1
    assert exact_treewidth(Multigraph([1, 2]))[0] == 0


@pytest.mark.parametrize("ell, width", [(2, 2), (3, 3), (4, 4)])
def test_walls(ell, width):
    g = build_wall(ell).graph
    w, td = exact_treewidth(g)
    assert w == width and w >= ell and validate_td(g, td) == []
    lower, _ = nx.algorithms.approximation.treewidth_min_fill_in(to_nx(g))
    assert w <= lower


def test_cap():
    with pytest.raises(ValueError):
        exact_treewidth(build_wall(3).graph, cap=10)


def test_validate_td_catches_problems():
    g = Multigraph(range(3), [(0, 1), (1, 2)])
    bad = TreeDecomposition({0: frozenset([0, 1]), 1: frozenset([2])}, ((0, 1),))
    assert any("edge" in p for p in validate_td(g, bad))
    split = TreeDecomposition({0: frozenset([0, 1]), 1: frozenset([1, 2]), 2: frozenset([1])},
                              ((0, 2), (2, 1)))
    assert validate_td(g, split) == []
    broken = TreeDecomposition({0: frozenset([0, 1]), 1: frozenset([2]), 2: frozenset([1, 2])},
                               ((0, 1), (1, 2)))
    assert any("not connected" in p for p in validate_td(g, broken))


@given(multigraphs(max_n=7))
def test_matches_brute_force(g):
    w, td = exact_treewidth(g)
    assert w == brute_treewidth(g)
    assert validate_td(g, td) == [] and td.width == w


@given(multigraphs(min_n=2, max_n=12, max_mult=1))
def test_within_networkx_heuristics(g):
    w, td = exact_treewidth(g)
    h = to_nx(g)
    up1, _ = nx.algorithms.approximation.treewidth_min_degree(h)
    up2, _ = nx.algorithms.approximation.treewidth_min_fill_in(h)
    assert w <= min(up1, up2)
    assert validate_td(g, td) == []


def test_decomposition_from_order_disconnected():
    g = Multigraph(range(4), [(0, 1), (2, 3)])
    td = decomposition_from_order(g, [0, 1, 2, 3])
    assert validate_td(g, td) == [] and td.width == 1


def test_one_bag_gives_one_node():
    g = Multigraph(range(3), [(0, 1, 2), (1, 2)])
    td = TreeDecomposition({"r": frozenset(g.vertices)}, ())
    d, b = td_to_tcd(g, td)
    assert len(d.parts) == 1 and b.adhesion == 0


def test_path_conversion():
    g = Multigraph(range(5), [(i, i + 1, i + 1) for i in range(4)])
    td = TreeDecomposition({i: frozenset([i, i + 1]) for i in range(4)}, tuple((i, i + 1) for i in range(3)))
    d, b = td_to_tcd(g, td)
    assert validate(g, d) == []
    assert b.adhesion <= max(m for _, _, m in g.edges())
    assert b.adhesion <= b.adhesion_bound and b.torso_order <= b.torso_bound


def test_wall_conversion_bounds():
    g = build_wall(3).graph
    _, td = exact_treewidth(g)
    d, b = td_to_tcd(g, td)
    assert validate(g, d) == [] and adhesion(g, d)[0] == b.adhesion
    assert b.adhesion <= (2 * b.width + 2) * b.max_degree
    assert b.torso_order <= (b.max_degree + 1) * (b.width + 1)


def test_conversion_defect_is_never_silent(monkeypatch):
    import thinwalls.synthesis.treewidth as tw
    g = build_wall(3).graph
    _, td = exact_treewidth(g)
    monkeypatch.setattr(tw, "adhesion", lambda g, d: (10 ** 6, {}))
    with pytest.raises(ConversionDefect):
        td_to_tcd(g, td)
    d, b = td_to_tcd(g, td, check_bounds=False)
    assert b.adhesion > b.adhesion_bound


@given(multigraphs(max_n=9, connected=True))
def test_conversion_property(g):
    _, td = exact_treewidth(g)
    d, b = td_to_tcd(g, td)
    assert validate(g, d) == []
    assert b.adhesion <= b.adhesion_bound and b.torso_order <= b.torso_bound
