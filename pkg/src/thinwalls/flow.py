"""Unit-capacity max-flow machinery and Menger-type path packings.

Every parallel edge is one unit of capacity.  Augmenting paths are found by
BFS with neighbours scanned in :func:`vkey` order, so packings and cuts are
reproducible run to run.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .multigraph import EdgeCut, Multigraph, edge_cut, vkey, vsorted


class _Terminal:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def sort_key(self):
        return (self.name,)

    def __repr__(self):
        return f"<{self.name}>"


SOURCE = _Terminal("source")
SINK = _Terminal("sink")


class FlowNetwork:
    """Directed capacities with antisymmetric flow ``f[u][v] = -f[v][u]``."""

    def __init__(self):
        self.cap: dict = {}
        self.flow: dict = {}

    def add_arc(self, u, v, c: int) -> None:
        for x in (u, v):
            self.cap.setdefault(x, {})
            self.flow.setdefault(x, {})
        self.cap[u][v] = self.cap[u].get(v, 0) + c
        self.cap[v].setdefault(u, 0)
        self.flow[u].setdefault(v, 0)
        self.flow[v].setdefault(u, 0)

    def add_edge(self, u, v, c: int) -> None:
        """Undirected edge of capacity ``c`` in both directions."""
        self.add_arc(u, v, c)
        self.add_arc(v, u, c)

    def residual(self, u, v) -> int:
        return self.cap[u][v] - self.flow[u][v]

    def max_flow(self, s, t, limit: int | None = None) -> int:
        order = {u: vsorted(nb) for u, nb in self.cap.items()}
        value = 0
        while limit is None or value < limit:
            prev = {s: None}
            queue = deque([s])
            while queue and t not in prev:
                x = queue.popleft()
                for y in order[x]:
                    if y not in prev and self.residual(x, y) > 0:
                        prev[y] = x
                        queue.append(y)
            if t not in prev:
                break
            bottleneck = None
            y = t
            while prev[y] is not None:
                r = self.residual(prev[y], y)
                bottleneck = r if bottleneck is None else min(bottleneck, r)
                y = prev[y]
            if limit is not None:
                bottleneck = min(bottleneck, limit - value)
            y = t
            while prev[y] is not None:
                x = prev[y]
                self.flow[x][y] += bottleneck
                self.flow[y][x] -= bottleneck
                y = x
            value += bottleneck
        return value

    def reachable(self, s) -> set:
        seen = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in self.cap[x]:
                if y not in seen and self.residual(x, y) > 0:
                    seen.add(y)
                    queue.append(y)
        return seen

    def decompose(self, s, t, count: int) -> list[list]:
        """Peel ``count`` simple ``s``-``t`` paths off the current flow."""
        pos = {x: {y: f for y, f in nb.items() if f > 0} for x, nb in self.flow.items()}
        paths = []
        for _ in range(count):
            walk = [s]
            index = {s: 0}
            while walk[-1] != t:
                x = walk[-1]
                y = min(pos[x], key=vkey)
                pos[x][y] -= 1
                if pos[x][y] == 0:
                    del pos[x][y]
                if y in index:
                    # drop the cycle; its flow is already consumed
                    for z in walk[index[y] + 1:]:
                        del index[z]
                    del walk[index[y] + 1:]
                else:
                    index[y] = len(walk)
                    walk.append(y)
            paths.append(walk)
        return paths


@dataclass
class Linkage:
    """Result of a path-packing query.

    ``paths`` holds the requested paths when ``found``; otherwise
    ``separator`` certifies absence (an :class:`EdgeCut` for edge-disjoint
    packings, a vertex set for vertex-disjoint ones) and ``value`` is the
    maximum number of paths.
    """

    found: bool
    k: int
    value: int
    paths: list = field(default_factory=list)
    separator: object = None


def _trim(path: list, a: set, b: set) -> list:
    """Shorten a walk from ``a`` to ``b`` to a genuine ``a``-``b`` path."""
    first_b = next(i for i, v in enumerate(path) if v in b)
    last_a = max(i for i, v in enumerate(path[: first_b + 1]) if v in a)
    return path[last_a: first_b + 1]


def _check_ab(g: Multigraph, a, b) -> tuple[set, set]:
    a, b = set(a), set(b)
    g._check_subset(a | b)
    if a & b:
        raise ValueError("A and B must be disjoint")
    return a, b


def edge_disjoint_paths(g: Multigraph, a, b, k: int) -> Linkage:
    """``k`` pairwise edge-disjoint A-B paths, or a cut of size < k."""
    a, b = _check_ab(g, a, b)
    if k <= 0:
        return Linkage(True, k, 0)
    net = FlowNetwork()
    for v in g.vertices:
        net.cap.setdefault(v, {})
        net.flow.setdefault(v, {})
    for u, v, m in g.edges():
        net.add_edge(u, v, m)
    for x in a:
        net.add_arc(SOURCE, x, k)
    for y in b:
        net.add_arc(y, SINK, k)
    net.cap.setdefault(SOURCE, {})
    net.flow.setdefault(SOURCE, {})
    net.cap.setdefault(SINK, {})
    net.flow.setdefault(SINK, {})
    value = net.max_flow(SOURCE, SINK, limit=k)
    if value >= k:
        raw = net.decompose(SOURCE, SINK, k)
        paths = [_trim(p[1:-1], a, b) for p in raw]
        return Linkage(True, k, value, paths)
    side = net.reachable(SOURCE) & set(g.vertices)
    return Linkage(False, k, value, separator=edge_cut(g, side))


def _split_network(g: Multigraph, unit_vertices, big: int, edge_cap: int | None = None) -> FlowNetwork:
    """Vertex ``v`` becomes the arc ``(v,0) -> (v,1)``; edges keep their
    multiplicity as capacity unless ``edge_cap`` overrides it."""
    net = FlowNetwork()
    for v in g.vertices:
        net.add_arc((v, 0), (v, 1), 1 if v in unit_vertices else big)
    for u, v, m in g.edges():
        c = m if edge_cap is None else edge_cap
        net.add_arc((u, 1), (v, 0), c)
        net.add_arc((v, 1), (u, 0), c)
    for t in (SOURCE, SINK):
        net.cap.setdefault(t, {})
        net.flow.setdefault(t, {})
    return net


def _unsplit(path: list) -> list:
    out = []
    for node in path:
        v = node[0]
        if not out or out[-1] != v:
            out.append(v)
    return out


def vertex_disjoint_paths(g: Multigraph, a, b, k: int) -> Linkage:
    """``k`` pairwise vertex-disjoint A-B paths, or a separator of size < k."""
    a, b = _check_ab(g, a, b)
    if k <= 0:
        return Linkage(True, k, 0)
    # only vertex arcs are finite, so every minimum cut is a vertex separator
    net = _split_network(g, set(g.vertices), k, edge_cap=k)
    for x in a:
        net.add_arc(SOURCE, (x, 0), k)
    for y in b:
        net.add_arc((y, 1), SINK, k)
    value = net.max_flow(SOURCE, SINK, limit=k)
    if value >= k:
        raw = net.decompose(SOURCE, SINK, k)
        paths = [_trim(_unsplit(p[1:-1]), a, b) for p in raw]
        return Linkage(True, k, value, paths)
    reach = net.reachable(SOURCE)
    sep = frozenset(v for v in g.vertices if (v, 0) in reach and (v, 1) not in reach)
    return Linkage(False, k, value, separator=sep)


def internally_disjoint_paths(g: Multigraph, s, t, k: int) -> Linkage:
    """``k`` internally vertex-disjoint ``s``-``t`` paths.

    Direct ``s``-``t`` edges count once per parallel copy.  On failure the
    separator is the set of inner vertices of a minimum cut; it only
    separates ``s`` from ``t`` when they are non-adjacent.
    """
    if s == t:
        raise ValueError("endpoints must differ")
    g._check_subset([s, t])
    if k <= 0:
        return Linkage(True, k, 0)
    inner = set(g.vertices) - {s, t}
    net = _split_network(g, inner, k)
    net.add_arc(SOURCE, (s, 1), k)
    net.add_arc((t, 0), SINK, k)
    value = net.max_flow(SOURCE, SINK, limit=k)
    if value >= k:
        raw = net.decompose(SOURCE, SINK, k)
        return Linkage(True, k, value, [_unsplit(p[1:-1]) for p in raw])
    reach = net.reachable(SOURCE)
    sep = frozenset(v for v in inner if (v, 0) in reach and (v, 1) not in reach)
    return Linkage(False, k, value, separator=sep)


def edge_connectivity(g: Multigraph, s, t, limit: int | None = None) -> int:
    """Local edge connectivity between two vertices (capped at ``limit``)."""
    net = FlowNetwork()
    for v in g.vertices:
        net.cap.setdefault(v, {})
        net.flow.setdefault(v, {})
    for u, v, m in g.edges():
        net.add_edge(u, v, m)
    return net.max_flow(s, t, limit=limit)


def capped_vertex_paths(g: Multigraph, a, b, k: int, unit) -> Linkage:
    """Edge-disjoint A-B paths in which every vertex of ``unit`` lies on at
    most one path.  Failure returns the source side of a minimum mixed cut."""
    a, b = _check_ab(g, a, b)
    if k <= 0:
        return Linkage(True, k, 0)
    unit = set(unit)
    big = g.num_edges() + k + 1
    net = _split_network(g, unit, big)
    for x in a:
        net.add_arc(SOURCE, (x, 0), k)
    for y in b:
        net.add_arc((y, 1), SINK, k)
    value = net.max_flow(SOURCE, SINK, limit=k)
    if value >= k:
        raw = net.decompose(SOURCE, SINK, k)
        paths = [_trim(_unsplit(p[1:-1]), a, b) for p in raw]
        return Linkage(True, k, value, paths)
    reach = net.reachable(SOURCE)
    cut_vertices = frozenset(v for v in unit if (v, 0) in reach and (v, 1) not in reach)
    side = frozenset(v for v in g.vertices if (v, 1) in reach)
    return Linkage(False, k, value, separator={"vertices": cut_vertices,
                                                "cut": edge_cut(g, side)})


def is_valid_linkage(g: Multigraph, a, b, paths, *, vertex_disjoint: bool) -> bool:
    """Independent check of a returned packing (used by tests)."""
    a, b = set(a), set(b)
    use: dict = {}
    seen: set = set()
    for p in paths:
        if not p or p[0] not in a or p[-1] not in b:
            return False
        if any(v in a for v in p[1:]) or any(v in b for v in p[:-1]):
            return False
        if len(set(p)) != len(p):
            return False
        if vertex_disjoint:
            if seen & set(p):
                return False
            seen |= set(p)
        for x, y in zip(p, p[1:]):
            key = frozenset((x, y))
            use[key] = use.get(key, 0) + 1
            if use[key] > g.mult(x, y):
                return False
    return True
