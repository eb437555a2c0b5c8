import itertools

import networkx as nx
import pytest

from thinwalls.multigraph import Multigraph, components, is_connected
from thinwalls.walls import (build_wall, certify_three_connected_pairs, certify_well_linked, expected_counts,
                             path_system, well_linked_set)


def grid_edge_oracle(ell):
    """Count edges of the wall straight from the grid description."""
    cols, rows = 2 * ell, ell
    horiz = rows * (cols - 1)
    vert = sum(1 for j in range(1, rows) for i in range(1, cols + 1) if i % 2 == j % 2)
    # the two removed corners each carried a single edge
    return horiz + vert - 2


@pytest.mark.parametrize("ell", range(2, 9))
def test_census(ell):
    g = build_wall(ell).graph
    n, m = expected_counts(ell)
    assert len(g) == n == 2 * ell * ell - 2
    assert g.num_edges() == m == grid_edge_oracle(ell)
    assert g.max_degree() == (2 if ell == 2 else 3) and g.is_simple() and is_connected(g)


def test_small_walls():
    assert len(build_wall(1).graph) == 0
    assert len(build_wall(4).graph) == 30
    w2 = build_wall(2).graph
    assert nx.is_isomorphic(nx.Graph(list((u, v) for u, v, _ in w2.edges())), nx.cycle_graph(6))
    with pytest.raises(ValueError):
        build_wall(0)


def test_degree_census_w3():
    g = build_wall(3).graph
    degs = sorted(g.degree(v) for v in g.vertices)
    assert degs.count(2) == 10 and degs.count(3) == 6


@pytest.mark.parametrize("ell", [3, 4, 5])
def test_path_system(ell):
    w = build_wall(ell)
    ps = path_system(w)
    assert len(ps.vertical) == len(ps.horizontal) == ell
    for fam in (ps.vertical, ps.horizontal):
        for p, q in itertools.combinations(fam, 2):
            assert not set(p) & set(q)
        for p in fam:
            assert all(w.graph.mult(x, y) for x, y in zip(p, p[1:]))
    for h in ps.horizontal:
        for v in ps.vertical:
            assert set(h) & set(v)
    z = well_linked_set(w)
    assert all(len(set(v) & z) <= 1 for v in ps.vertical)
    for ja, j0, jb in itertools.product(range(ell), repeat=3):
        union = set(ps.vertical[ja]) | set(ps.horizontal[j0]) | set(ps.vertical[jb])
        assert len(components(w.graph.subgraph(union))) == 1


def test_well_linked_set_sizes():
    assert len(well_linked_set(build_wall(3))) == 1
    assert len(well_linked_set(build_wall(5))) == 3
    assert well_linked_set(build_wall(4)) == frozenset([(3, 4), (5, 4)])
    with pytest.raises(ValueError):
        well_linked_set(build_wall(2))


@pytest.mark.parametrize("ell", [3, 4, 5])
def test_canonical_set_certified(ell):
    w = build_wall(ell)
    z = well_linked_set(w)
    rep = certify_well_linked(w, z)
    assert rep.ok and rep.exhaustive
    assert certify_three_connected_pairs(w, z).ok


def test_sampled_certification_reports_coverage():
    w = build_wall(6)
    z = well_linked_set(w)
    rep = certify_well_linked(w, z, exhaustive_limit=2, samples=200, seed=1)
    assert rep.ok and not rep.exhaustive and rep.checked == 200 and "sampled" in rep.coverage


def test_well_linked_corner_pair():
    w = build_wall(3)
    corners = [v for v in w.graph.sorted_vertices() if w.graph.degree(v) == 2][:2]
    rep = certify_well_linked(w, corners)
    # one path between two vertices of a connected graph always exists
    assert rep.ok
    assert certify_well_linked(w, []).ok


def test_three_connected_fails_on_degree_two():
    w = build_wall(5)
    z = set(well_linked_set(w))
    deg2 = [v for v in w.graph.sorted_vertices() if w.graph.degree(v) == 2][0]
    rep = certify_three_connected_pairs(w, z | {deg2})
    assert not rep.ok
    assert all(len(sep) <= 2 for _, _, sep, _ in rep.failures)
    assert certify_three_connected_pairs(w, [deg2]).ok


def test_not_well_linked_detected():
    # two triangles joined through a single cut vertex
    g = Multigraph(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    rep = certify_well_linked(g, [0, 1, 3, 4])
    assert not rep.ok and rep.counterexample[2] == frozenset([2])
