"""Generated regression fixtures with machine-checked verdicts.

Every fixture is built on demand from its parameters, so sweeping alpha or
the wall size is cheap.  ``run_all`` executes each verdict through the
deciders and reports expected against observed values.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .immersion import (ABSENT, PRESENT, apex_to_spider_subdivision, check_embedding, check_subdivision, compose,
                        embed_in_spider, find_immersion, spider)
from .multigraph import Multigraph, _suppress_in_place, components
from .thinness import is_almost_alpha_thin, is_alpha_thin, min_thinness
from .treecut import reduce_low_degree, search_certificate, three_centre
from .walls import build_wall


@dataclass
class Verdict:
    name: str
    locus: str          # which worked example or construction it reproduces
    expected: object
    check: Callable     # () -> observed value


@dataclass
class Fixture:
    name: str
    params: dict
    graph: Multigraph
    verdicts: list = field(default_factory=list)


def star(n: int, mult: int = 1) -> Multigraph:
    return Multigraph(range(n + 1), [(0, i, mult) for i in range(1, n + 1)])


def identified_leaves(n: int) -> Multigraph:
    """Two stars with n leaves each, leaves identified: centres "a" and "b"."""
    return Multigraph(["a", "b", *range(n)], [(c, i) for c in ("a", "b") for i in range(n)])


def two_triangles() -> Multigraph:
    return Multigraph(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def delete_then_suppress(g: Multigraph, protected) -> Multigraph:
    """The naive two-phase reduction: all deletions first, then all
    suppressions, without going back."""
    h = reduce_low_degree(g, protected, suppress_ok=False)
    adj = h.adjacency()
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v not in protected and sum(adj[v].values()) == 2:
                _suppress_in_place(adj, v)
                changed = True
                break
    return Multigraph._from_adj(adj)


def strip_leaves(g: Multigraph) -> Multigraph:
    """Repeatedly delete the least vertex of degree at most 1 while more than
    one vertex is left."""
    h = g
    while len(h) > 1:
        low = [v for v in h.sorted_vertices() if h.degree(v) <= 1]
        if not low:
            break
        h = h.remove_vertices(low[:1])
    return h


def _reduces_to_single_vertex(g: Multigraph) -> bool:
    h = strip_leaves(g)
    return len(h) == 1 and is_alpha_thin(h, 0) is not None


def _suppresses_to_thick_edge(g: Multigraph, n: int) -> bool:
    h = reduce_low_degree(g, frozenset(["a", "b"]))
    return len(h) == 2 and h.mult("a", "b") == n and min_thinness(h)[0] == 0


def _star_leaves(alpha: int) -> Fixture:
    n = 3 * alpha + 3
    g = star(n)
    locus = "star with 3a+3 leaves"
    return Fixture(f"star-leaves[alpha={alpha}]", {"alpha": alpha, "n": n}, g, [
        Verdict("almost-thin", locus, False, lambda: is_almost_alpha_thin(g, alpha) is not None),
        Verdict("degree-1 deletion gives a 0-thin single vertex", locus, True,
                lambda: _reduces_to_single_vertex(g)),
    ])


def _identified_leaves(alpha: int) -> Fixture:
    n = 3 * alpha + 3
    g = identified_leaves(n)
    locus = "two stars with identified leaves"
    return Fixture(f"identified-leaves[alpha={alpha}]", {"alpha": alpha, "n": n}, g, [
        Verdict("almost-thin", locus, False, lambda: is_almost_alpha_thin(g, alpha) is not None),
        Verdict("suppression gives a 0-thin thick edge", locus, True, lambda: _suppresses_to_thick_edge(g, n)),
    ])


def _torso_star(alpha: int = 1, ell: int = 2) -> Fixture:
    n = alpha * (3 * alpha + 3)
    g = star(n)
    wall = build_wall(ell).graph
    locus = "star whose torsos are never almost-thin"
    return Fixture("torso-star", {"alpha": alpha, "ell": ell, "n": n, "max_nodes": n + 1}, g, [
        Verdict("certificate with torsos", locus, False,
                lambda: search_certificate(g, alpha, n + 1, mode="torso").found),
        Verdict("certificate with 3-centres", "3-centre torsos of the same star", True,
                lambda: search_certificate(g, alpha, n + 1, mode="3-centre").found),
        Verdict("wall immersion", locus, ABSENT, lambda: find_immersion(wall, g).status),
    ])


def _doubled_star(alpha: int = 2, ell: int = 3) -> Fixture:
    # doubled edges cost two per leaf moved off the centre, so 3a+3 leaves suffice
    n = 3 * alpha + 3
    g = star(n, 2)
    wall = build_wall(ell).graph
    locus = "star with doubled edges"
    return Fixture("doubled-star", {"alpha": alpha, "ell": ell, "n": n, "max_nodes": 4}, g, [
        Verdict("certificate deleting degree-1 peripherals", locus, False,
                lambda: search_certificate(g, alpha, 4, mode="degree-1").found),
        Verdict("certificate with 3-centres", locus, True,
                lambda: search_certificate(g, alpha, 4, mode="3-centre").found),
        Verdict("wall immersion", locus, ABSENT,
                lambda: find_immersion(wall, g, max_pattern=len(wall)).status),
    ])


def _two_triangles() -> Fixture:
    g = two_triangles()
    x = frozenset([0, 1, 2])
    locus = "two triangles joined by an edge"
    return Fixture("two-triangles", {"protected": sorted(x)}, g, [
        Verdict("3-centre is the protected triangle", locus, True,
                lambda: three_centre(g, x).graph == g.subgraph(x)),
        Verdict("two-phase reduction agrees", locus, False,
                lambda: delete_then_suppress(g, x) == three_centre(g, x).graph),
    ])


def _apex_path(k: int = 8, path_length: int | None = None) -> Fixture:
    g, sub = apex_to_spider_subdivision(k, path_length)
    locus = "apex path contains a subdivided spider"

    def wall_through_spider():
        if k < 8:
            return None
        wall = build_wall(2).graph
        inner = compose(embed_in_spider(wall, 3, k), sub.as_embedding(), spider(3, k))
        return check_embedding(wall, g, inner) == []

    verdicts = [Verdict("subdivision problems", locus, [], lambda: check_subdivision(g, sub, k))]
    if k >= 8:
        verdicts.append(Verdict("W_2 strongly immersed via the spider", locus, True, wall_through_spider))
    n = 3 * k - 1 if path_length is None else path_length
    return Fixture(f"apex-path[k={k},n={n}]", {"k": k, "path_length": n}, g, verdicts)


def _spider_wall(k: int = 3, n: int = 8) -> Fixture:
    g = spider(k, n)
    wall = build_wall(2).graph
    locus = "spider contains every small subcubic graph"
    return Fixture("spider-wall", {"k": k, "n": n}, g, [
        Verdict("greedy embedding problems", locus, [], lambda: check_embedding(wall, g, embed_in_spider(wall, k, n))),
        Verdict("search verdict", locus, PRESENT, lambda: find_immersion(wall, g).status),
    ])


BUILDERS = {
    "star-leaves": _star_leaves,
    "identified-leaves": _identified_leaves,
    "torso-star": _torso_star,
    "doubled-star": _doubled_star,
    "two-triangles": _two_triangles,
    "apex-path": _apex_path,
    "spider-wall": _spider_wall,
}

# the default sweep run by run_all
DEFAULT_SWEEP = [
    ("star-leaves", {"alpha": 1}), ("star-leaves", {"alpha": 2}),
    ("identified-leaves", {"alpha": 1}),
    ("torso-star", {}), ("doubled-star", {}), ("two-triangles", {}),
    ("apex-path", {"k": 4}), ("apex-path", {"k": 4, "path_length": 23}), ("apex-path", {"k": 8}),
    ("spider-wall", {}),
]


def fixture(name: str, **params) -> Fixture:
    if name not in BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(BUILDERS))}")
    return BUILDERS[name](**params)


def run_fixture(fx: Fixture) -> dict:
    out = {"params": fx.params, "verdicts": [], "ok": True}
    for v in fx.verdicts:
        start = time.monotonic()
        observed = v.check()
        ok = observed == v.expected
        out["ok"] &= ok
        out["verdicts"].append({"name": v.name, "locus": v.locus, "expected": v.expected,
                                "observed": observed, "ok": ok,
                                "seconds": round(time.monotonic() - start, 3)})
    return out


def run_all(only: str | None = None) -> dict:
    """Run the default sweep (or one fixture family) and report per fixture."""
    report = {}
    for name, params in DEFAULT_SWEEP:
        if only is not None and name != only:
            continue
        fx = fixture(name, **params)
        report[fx.name] = run_fixture(fx)
    if only is not None and not report:
        raise KeyError(f"unknown fixture {only!r}")
    return report


# ---------------------------------------------------------------------------
# seeded wall-free instances for the synthesis pipeline

def _blob(rng: random.Random, size: int, heavy: bool) -> list:
    """Edges of a random connected multigraph on 0..size-1."""
    order = list(range(size))
    rng.shuffle(order)
    edges = {}
    for i in range(1, size):
        u, v = order[i], order[rng.randrange(i)]
        edges[(min(u, v), max(u, v))] = rng.randint(1, 3)
    for u in range(size):
        for v in range(u + 1, size):
            if (u, v) not in edges and rng.random() < 0.4:
                edges[(u, v)] = rng.randint(1, 2)
    if heavy and edges:
        e = rng.choice(sorted(edges))
        edges[e] = rng.randint(25, 30)
    return [(u, v, m) for (u, v), m in edges.items()]


def blob_tree(rng: random.Random, max_vertices: int = 20) -> Multigraph:
    """Blobs of at most five vertices joined in a tree by single edges, with
    optional subdivided links and pendant vertices.  No cycle of edge-disjoint
    paths can leave a blob, so six branch vertices never close a cycle."""
    names, edges = [], []
    blobs = []
    budget = max_vertices
    while budget >= 1 and len(blobs) < 6:
        size = min(rng.randint(1, 5), budget)
        base = len(names)
        names.extend(range(base, base + size))
        edges.extend((base + u, base + v, m) for u, v, m in _blob(rng, size, rng.random() < 0.3))
        blobs.append(list(range(base, base + size)))
        budget = max_vertices - len(names)
        if len(names) >= 8 and rng.random() < 0.2:
            break
    for i in range(1, len(blobs)):
        u = rng.choice(blobs[rng.randrange(i)])
        v = rng.choice(blobs[i])
        if budget >= 1 and rng.random() < 0.4:
            mid = len(names)
            names.append(mid)
            budget -= 1
            edges += [(u, mid, 1), (mid, v, 1)]
        else:
            edges.append((u, v, 1))
    while budget >= 1 and rng.random() < 0.5:
        leaf = len(names)
        edges.append((rng.choice(names), leaf, rng.randint(1, 2)))
        names.append(leaf)
        budget -= 1
    return Multigraph(names, edges)


@dataclass
class SynthesisInstance:
    seed: int
    graph: Multigraph
    immersion_nodes: int


def synthesis_instances(count: int = 20, seed: int = 0, ell: int = 2, max_vertices: int = 20) -> list:
    """``count`` seeded instances verified free of ``W_ell`` by exact search."""
    wall = build_wall(ell).graph
    out = []
    s = seed
    while len(out) < count:
        rng = random.Random(s)
        g = blob_tree(rng, max_vertices)
        res = find_immersion(wall, g, max_pattern=max(16, len(wall)))
        if res.status == ABSENT and len(components(g)) == 1:
            out.append(SynthesisInstance(s, g, res.nodes))
        s += 1
    return out
