"""Walls ``W_l``, their vertical/horizontal path systems and the canonical
well-linked set.

Vertices are ``(i, j)`` with column ``1 <= i <= 2l`` and row ``1 <= j <= l``.
Rows are joined by the vertical edge ``(i, j)(i, j+1)`` only when
``i = j (mod 2)``; afterwards the two vertices of degree one are located by a
degree scan and removed.  With this convention the well-linked set consists
of the degree-3 vertices of the top row, and the ``j``-th vertical path
occupies columns ``2j-1`` and ``2j``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .flow import internally_disjoint_paths, vertex_disjoint_paths
from .multigraph import Multigraph, vsorted


@dataclass(frozen=True)
class Wall:
    ell: int
    graph: Multigraph

    @property
    def vertices(self):
        return self.graph.vertices


@dataclass
class WallPathSystem:
    vertical: list   # vertical[j-1] = V_j as an ordered vertex list
    horizontal: list  # horizontal[j-1] = H_j ordered by column


def build_wall(ell: int) -> Wall:
    if ell < 1:
        raise ValueError("wall size must be at least 1")
    cols, rows = 2 * ell, ell
    edges = []
    for j in range(1, rows + 1):
        for i in range(1, cols):
            edges.append(((i, j), (i + 1, j)))
    for j in range(1, rows):
        for i in range(1, cols + 1):
            if i % 2 == j % 2:
                edges.append(((i, j), (i, j + 1)))
    grid = Multigraph([(i, j) for i in range(1, cols + 1) for j in range(1, rows + 1)], edges)
    leaves = [v for v in grid.sorted_vertices() if grid.degree(v) == 1]
    if len(leaves) != 2:
        raise AssertionError(f"expected two degree-1 vertices, found {leaves}")
    return Wall(ell, grid.remove_vertices(leaves))


def path_system(w: Wall) -> WallPathSystem:
    g = w.graph
    vertical = []
    for j in range(1, w.ell + 1):
        cols = {2 * j - 1, 2 * j}
        vertical.append(_order_path(g.subgraph(v for v in g.vertices if v[0] in cols)))
    horizontal = []
    for j in range(1, w.ell + 1):
        horizontal.append(vsorted(v for v in g.vertices if v[1] == j))
    return WallPathSystem(vertical, horizontal)


def _order_path(p: Multigraph) -> list:
    """Vertices of an induced path in path order (raises if not a path)."""
    if len(p) == 0:
        return []
    ends = [v for v in p.sorted_vertices() if p.degree(v) <= 1]
    if len(p) > 1 and (len(ends) != 2 or p.max_degree() > 2 or p.num_edges() != len(p) - 1):
        raise AssertionError("subgraph is not a path")
    out = [ends[0]]
    prev = None
    while len(out) < len(p):
        nxt = [u for u in p.neighbours(out[-1]) if u != prev]
        prev = out[-1]
        out.append(nxt[0])
    return out


def well_linked_set(w: Wall) -> frozenset:
    """Degree-3 vertices of the top row: ``l - 2`` of them."""
    if w.ell < 3:
        raise ValueError("the well-linked set is only defined for walls of size >= 3")
    g = w.graph
    return frozenset(v for v in g.vertices if v[1] == w.ell and g.degree(v) == 3)


@dataclass
class WellLinkedReport:
    ok: bool
    checked: int
    exhaustive: bool
    coverage: str
    counterexample: tuple | None = None   # (A, B, separator)
    witnesses: list = field(default_factory=list)


def _subset_pairs(z: list):
    # linkage is symmetric in A and B: emit each unordered pair once
    idx = range(len(z))
    for k in range(1, len(z) // 2 + 1):
        for a in itertools.combinations(idx, k):
            rest = [i for i in idx if i not in a]
            for b in itertools.combinations(rest, k):
                if a[0] < b[0]:
                    yield tuple(z[i] for i in a), tuple(z[i] for i in b)


def certify_well_linked(
    w: Wall | Multigraph,
    z,
    *,
    exhaustive_limit: int = 8,
    samples: int = 200,
    seed: int = 0,
    keep_witnesses: bool = False,
) -> WellLinkedReport:
    """Check vertex-disjoint linkage for every disjoint equal-size ``A, B``.

    Exhaustive when ``|z| <= exhaustive_limit``; otherwise ``samples`` random
    pairs are drawn and the report says so.
    """
    g = w.graph if isinstance(w, Wall) else w
    z = vsorted(z)
    g._check_subset(z)
    if len(z) <= exhaustive_limit:
        pairs = _subset_pairs(z)
        exhaustive = True
    else:
        rng = random.Random(seed)

        def sampled():
            for _ in range(samples):
                k = rng.randint(1, len(z) // 2)
                pick = rng.sample(z, 2 * k)
                yield tuple(pick[:k]), tuple(pick[k:])

        pairs = sampled()
        exhaustive = False
    checked = 0
    witnesses = []
    for a, b in pairs:
        checked += 1
        res = vertex_disjoint_paths(g, a, b, len(a))
        if not res.found:
            return WellLinkedReport(False, checked, exhaustive, _cov(exhaustive, checked),
                                    (a, b, res.separator))
        if keep_witnesses:
            witnesses.append((a, b, res.paths))
    return WellLinkedReport(True, checked, exhaustive, _cov(exhaustive, checked),
                            witnesses=witnesses)


def _cov(exhaustive: bool, n: int) -> str:
    return f"exhaustive over {n} pairs" if exhaustive else f"sampled {n} random pairs"


@dataclass
class ThreeConnectedReport:
    ok: bool
    pairs: int
    failures: list = field(default_factory=list)  # (u, v, separator, value)
    witnesses: dict = field(default_factory=dict)


def certify_three_connected_pairs(w: Wall | Multigraph, z) -> ThreeConnectedReport:
    g = w.graph if isinstance(w, Wall) else w
    z = vsorted(z)
    g._check_subset(z)
    failures = []
    witnesses = {}
    pairs = 0
    for u, v in itertools.combinations(z, 2):
        pairs += 1
        res = internally_disjoint_paths(g, u, v, 3)
        if res.found:
            witnesses[(u, v)] = res.paths
        else:
            failures.append((u, v, res.separator, res.value))
    return ThreeConnectedReport(not failures, pairs, failures, witnesses)


def expected_counts(ell: int) -> tuple[int, int]:
    """Closed-form vertex and edge counts of ``W_l``."""
    if ell == 1:
        return 0, 0
    return 2 * ell * ell - 2, 3 * ell * ell - 2 * ell - 2
