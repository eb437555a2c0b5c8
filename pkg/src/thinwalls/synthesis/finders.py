"""Combinatorial finders: subdivided stars versus combs on a vertex set, and
the path cover of a graph without a large star minor."""
from __future__ import annotations

from dataclasses import dataclass

from ..flow import vertex_disjoint_paths
from ..multigraph import Multigraph, components, is_connected, vkey, vsorted

MINOR_CAP = 18
SPINE_BUDGET = 200_000


@dataclass
class StarWitness:
    centre: object
    paths: list  # centre -> leaf, sharing only the centre

    @property
    def leaves(self) -> list:
        return [p[-1] for p in self.paths]


@dataclass
class CombWitness:
    spine: list
    legs: list   # each leg starts on the spine; trivial legs have length 0

    @property
    def teeth(self) -> list:
        return [leg[-1] for leg in self.legs]


def check_star(g: Multigraph, w: StarWitness, u, s: int) -> list[str]:
    problems = []
    u = set(u)
    if len(w.paths) < s:
        problems.append(f"only {len(w.paths)} leaves")
    seen = {w.centre}
    for p in w.paths:
        if p[0] != w.centre or len(p) < 2:
            problems.append("path does not leave the centre")
            continue
        if p[-1] not in u:
            problems.append(f"leaf {p[-1]!r} is not in U")
        if any(g.mult(x, y) == 0 for x, y in zip(p, p[1:])):
            problems.append("path uses a non-edge")
        if seen & set(p[1:]):
            problems.append("paths share a vertex")
        seen |= set(p[1:])
    return problems


def check_comb(g: Multigraph, w: CombWitness, u, t: int) -> list[str]:
    problems = []
    u = set(u)
    spine = w.spine
    if len(set(spine)) != len(spine) or any(g.mult(x, y) == 0 for x, y in zip(spine, spine[1:])):
        problems.append("spine is not a path")
    if len(w.legs) < t:
        problems.append(f"only {len(w.legs)} teeth")
    on_spine = set(spine)
    seen: set = set()
    for leg in w.legs:
        if leg[0] not in on_spine or on_spine & set(leg[1:]):
            problems.append("leg does not meet the spine in exactly its first vertex")
        if any(g.mult(x, y) == 0 for x, y in zip(leg, leg[1:])):
            problems.append("leg uses a non-edge")
        if seen & set(leg):
            problems.append("legs are not disjoint")
        seen |= set(leg)
        if leg[-1] not in u:
            problems.append(f"tooth {leg[-1]!r} is not in U")
    return problems


def _star_at(g: Multigraph, c, u: set, s: int) -> StarWitness | None:
    rest = g.remove_vertices([c])
    a = set(g.neighbours(c))
    targets = u - {c}
    # neighbours already in U are leaves on their own
    direct = a & targets
    more = s - len(direct)
    paths = [[c, y] for y in vsorted(direct)]
    if more <= 0:
        return StarWitness(c, paths[:s])
    a2, b2 = a - direct, targets - direct
    if not a2 or not b2:
        return None
    link = vertex_disjoint_paths(rest.remove_vertices(direct), a2, b2, more)
    if not link.found:
        return None
    return StarWitness(c, paths + [[c] + p for p in link.paths])


def _spines(g: Multigraph, budget: int):
    """Simple paths in vkey order of their start, depth first."""
    count = 0
    for start in g.sorted_vertices():
        stack = [(start, [start])]
        while stack:
            x, path = stack.pop()
            count += 1
            if count > budget:
                raise RuntimeError(f"spine budget of {budget} exhausted")
            yield path
            for y in reversed(vsorted(g.neighbours(x))):
                if y not in path:
                    stack.append((y, path + [y]))


def _comb_on(g: Multigraph, spine: list, u: set, t: int) -> CombWitness | None:
    trivial = [v for v in spine if v in u]
    more = t - len(trivial)
    legs = [[v] for v in trivial]
    if more > 0:
        a = set(spine) - u
        b = u - set(spine)
        if not a or not b:
            return None
        link = vertex_disjoint_paths(g.remove_vertices(trivial), a, b, more)
        if not link.found:
            return None
        legs += link.paths
    pos = {v: i for i, v in enumerate(spine)}
    legs.sort(key=lambda leg: pos[leg[0]])
    return CombWitness(list(spine), legs[:t] if more <= 0 else legs)


def find_star_or_comb(g: Multigraph, u, s: int, t: int, *, budget: int = SPINE_BUDGET):
    """A subdivided star with ``s`` leaves in ``u``, else a comb with ``t``
    teeth in ``u``, else None.  Stars are tried first."""
    if not is_connected(g):
        raise ValueError("graph must be connected")
    u = set(u)
    g._check_subset(u)
    for c in g.sorted_vertices():
        w = _star_at(g, c, u, s)
        if w is not None:
            return w
    if len(u) < t:
        return None
    for spine in _spines(g, budget):
        w = _comb_on(g, spine, u, t)
        if w is not None:
            return w
    return None


# ---------------------------------------------------------------------------
# excluded star minor and linear forest cover

@dataclass
class StarMinorWitness:
    centre: frozenset   # connected branch set of the centre
    leaves: list        # k distinct neighbours of the centre set


@dataclass
class LinearForestCover:
    x: frozenset
    paths: list  # components of the host minus x, each as an ordered path


def connected_sets(g: Multigraph):
    """Every nonempty connected vertex set, each exactly once.

    A set is grown from its least vertex; a vertex joins the extension set
    only through a vertex that is the first of the set to touch it.
    """
    order = {v: i for i, v in enumerate(g.sorted_vertices())}
    nbrs = {v: set(g.neighbours(v)) for v in g.vertices}

    def extend(sub: frozenset, ext: list, touched: frozenset, root_i: int):
        yield sub
        ext = list(ext)
        while ext:
            w = ext.pop()
            fresh = [y for y in nbrs[w] if order[y] > root_i and y not in touched]
            yield from extend(sub | {w}, ext + fresh, touched | nbrs[w], root_i)

    for root in g.sorted_vertices():
        ri = order[root]
        ext = [y for y in nbrs[root] if order[y] > ri]
        yield from extend(frozenset([root]), ext, frozenset(nbrs[root]) | {root}, ri)


def star_minor(g: Multigraph, k: int, cap: int = MINOR_CAP) -> StarMinorWitness | None:
    """A connected set with at least ``k`` neighbours outside it, if any.

    That is exactly a ``K_{1,k}`` minor in a connected graph."""
    if k >= 3 and all(g.num_neighbours(v) <= 2 for v in g.vertices):
        # contracting a connected set of a path or cycle leaves two neighbours at most
        return None
    if len(g) > cap:
        raise ValueError(f"{len(g)} vertices exceed the star-minor cap of {cap}")
    for v in g.sorted_vertices():
        if g.num_neighbours(v) >= k:
            return StarMinorWitness(frozenset([v]), vsorted(g.neighbours(v))[:k])
    for c in connected_sets(g):
        nb = set()
        for v in c:
            nb.update(g.neighbours(v))
        nb -= c
        if len(nb) >= k:
            return StarMinorWitness(c, vsorted(nb)[:k])
    return None


def _violation(adj: dict):
    """Smallest obstruction to being a linear forest: a vertex with three
    neighbours (as four vertices) or a cycle (as its vertex list)."""
    for v in vsorted(adj):
        if len(adj[v]) >= 3:
            return [v] + vsorted(adj[v])[:3]
    seen: set = set()
    for r in vsorted(adj):
        if r in seen:
            continue
        parent = {r: None}
        stack = [r]
        while stack:
            x = stack.pop()
            seen.add(x)
            for y in vsorted(adj[x]):
                if y == parent[x]:
                    continue
                if y in parent:
                    cyc_x, cyc_y = [x], [y]
                    while cyc_x[-1] is not None:
                        cyc_x.append(parent[cyc_x[-1]])
                    anc = set(cyc_x)
                    while cyc_y[-1] not in anc:
                        cyc_y.append(parent[cyc_y[-1]])
                    top = cyc_y[-1]
                    return cyc_x[: cyc_x.index(top) + 1] + cyc_y[:-1]
                parent[y] = x
                stack.append(y)
    return None


def _cover(adj: dict, budget: int, taken: list):
    bad = _violation(adj)
    if bad is None:
        return list(taken)
    if budget == 0:
        return None
    for v in bad:
        sub = {x: (s - {v}) for x, s in adj.items() if x != v}
        taken.append(v)
        out = _cover(sub, budget - 1, taken)
        taken.pop()
        if out is not None:
            return out
    return None


def min_linear_forest_deletion(g: Multigraph) -> frozenset:
    """Minimum vertex set whose removal leaves disjoint paths (exact, by
    iterative deepening over obstructions)."""
    adj = {v: set(g.neighbours(v)) for v in g.vertices}
    for r in range(len(g) + 1):
        out = _cover(adj, r, [])
        if out is not None:
            return frozenset(out)
    raise AssertionError("unreachable")


def ordered_paths(g: Multigraph) -> list[list]:
    """Components of a linear forest, by least vertex, each from its lesser end."""
    out = []
    for comp in components(g):
        if len(comp) == 1:
            out.append(list(comp))
            continue
        ends = [v for v in comp if g.num_neighbours(v) == 1]
        start = min(ends, key=vkey)
        path, prev = [start], None
        while True:
            nxt = [y for y in g.neighbours(path[-1]) if y != prev]
            if not nxt:
                break
            prev = path[-1]
            path.append(nxt[0])
        out.append(path)
    return out


def linear_forest_cover(g: Multigraph, k: int, cap: int = MINOR_CAP):
    """Either a ``K_{1,k}`` minor witness or a cover with at most 4k vertices."""
    if not g.is_simple():
        raise ValueError("linear_forest_cover expects a simple graph")
    if not is_connected(g):
        raise ValueError("graph must be connected")
    w = star_minor(g, k, cap)
    if w is not None:
        return w
    x = min_linear_forest_deletion(g)
    if len(x) > 4 * k:
        raise AssertionError(f"star-minor-free graph needs {len(x)} > 4k deletions")
    return LinearForestCover(x, ordered_paths(g.remove_vertices(x)))
