"""Loopless multigraphs with integer edge multiplicities.

Edges are not named individually: a pair of vertices carries a multiplicity
and every algorithm in the package (cuts, flows, immersions) works with these
counts.  Vertex ids are opaque hashables; wherever a tie has to be broken we
use :func:`vkey`, which gives a total order over the id types that occur in
practice (ints, strings, tuples and the package's own marker classes).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping

Vertex = Hashable


def vkey(v):
    """Sort key giving a deterministic total order over vertex ids."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vkey(x) for x in v))
    sk = getattr(v, "sort_key", None)
    if sk is not None:
        return (3, type(v).__name__, sk())
    return (9, type(v).__name__, repr(v))


def vsorted(vs: Iterable[Vertex]) -> list:
    return sorted(vs, key=vkey)


def vlabel(v) -> str:
    """String label used by the JSON and DOT writers."""
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return ",".join(vlabel(x) for x in v)
    return str(v)


@dataclass(frozen=True)
class EdgeCut:
    source_side: frozenset
    edges: tuple  # ((u, v, multiplicity), ...)
    size: int


class Multigraph:
    """Immutable loopless multigraph.

    ``edges`` may hold ``(u, v)`` pairs (multiplicity one each, repeated pairs
    add up) or ``(u, v, m)`` triples.
    """

    __slots__ = ("_adj", "_hash")

    def __init__(self, vertices: Iterable[Vertex] = (), edges: Iterable = ()):
        adj: dict = {v: {} for v in vertices}
        for e in edges:
            if len(e) == 2:
                u, v = e
                m = 1
            else:
                u, v, m = e
            if u == v:
                raise ValueError(f"loop at {u!r}: multigraphs here are loopless")
            if m < 0 or int(m) != m:
                raise ValueError(f"bad multiplicity {m!r} on {u!r}-{v!r}")
            if m == 0:
                adj.setdefault(u, {})
                adj.setdefault(v, {})
                continue
            adj.setdefault(u, {})
            adj.setdefault(v, {})
            adj[u][v] = adj[u].get(v, 0) + m
            adj[v][u] = adj[v].get(u, 0) + m
        self._adj = adj
        self._hash = None

    @classmethod
    def _from_adj(cls, adj: dict) -> "Multigraph":
        g = cls.__new__(cls)
        g._adj = adj
        g._hash = None
        return g

    def adjacency(self) -> dict:
        """A fresh mutable copy of the adjacency map ``v -> {u: mult}``."""
        return {v: dict(nb) for v, nb in self._adj.items()}

    # -- basic queries --------------------------------------------------
    @property
    def vertices(self) -> frozenset:
        return frozenset(self._adj)

    def sorted_vertices(self) -> list:
        return vsorted(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator:
        return iter(self.sorted_vertices())

    def mult(self, u, v) -> int:
        return self._adj.get(u, {}).get(v, 0)

    def neighbours(self, v) -> Mapping:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def degree(self, v) -> int:
        """Number of incident edges, counted with multiplicity."""
        return sum(self.neighbours(v).values())

    def num_neighbours(self, v) -> int:
        return len(self.neighbours(v))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self._adj), default=0)

    def min_degree(self) -> int:
        return min((self.degree(v) for v in self._adj), default=0)

    def edges(self) -> Iterator[tuple]:
        """Yield ``(u, v, m)`` with ``u`` before ``v`` in :func:`vkey` order."""
        for u in self.sorted_vertices():
            ku = vkey(u)
            for v in vsorted(self._adj[u]):
                if vkey(v) > ku:
                    yield (u, v, self._adj[u][v])

    def num_edges(self) -> int:
        return sum(sum(nb.values()) for nb in self._adj.values()) // 2

    def is_simple(self) -> bool:
        return all(m == 1 for nb in self._adj.values() for m in nb.values())

    def underlying_simple(self) -> "Multigraph":
        return Multigraph._from_adj({v: {u: 1 for u in nb} for v, nb in self._adj.items()})

    # -- derived graphs --------------------------------------------------
    def subgraph(self, keep: Iterable[Vertex]) -> "Multigraph":
        keep = set(keep)
        self._check_subset(keep)
        return Multigraph._from_adj(
            {v: {u: m for u, m in self._adj[v].items() if u in keep} for v in keep}
        )

    def remove_vertices(self, drop: Iterable[Vertex]) -> "Multigraph":
        drop = set(drop)
        return self.subgraph(v for v in self._adj if v not in drop)

    def add_edges(self, edges: Iterable) -> "Multigraph":
        return Multigraph(self._adj, list(self.edges()) + list(edges))

    def relabel(self, mapping: Mapping) -> "Multigraph":
        """Injective relabelling; vertices missing from ``mapping`` keep their id."""
        f = lambda v: mapping.get(v, v)
        image = [f(v) for v in self._adj]
        if len(set(image)) != len(image):
            raise ValueError("relabelling is not injective")
        return Multigraph._from_adj(
            {f(v): {f(u): m for u, m in nb.items()} for v, nb in self._adj.items()}
        )

    def _check_subset(self, vs) -> None:
        missing = [v for v in vs if v not in self._adj]
        if missing:
            raise KeyError(f"vertices not in graph: {vsorted(missing)!r}")

    # -- equality --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (frozenset(self._adj), frozenset((u, v, m) for u, v, m in self.edges()))
            )
        return self._hash

    def __repr__(self) -> str:
        return f"Multigraph(n={len(self)}, m={self.num_edges()})"


# ---------------------------------------------------------------------------
# operations


def degree(g: Multigraph, v) -> int:
    return g.degree(v)


def edge_cut(g: Multigraph, a: Iterable[Vertex]) -> EdgeCut:
    """All edges with exactly one end in ``a``."""
    a = frozenset(a)
    g._check_subset(a)
    crossing = []
    for u in vsorted(a):
        for v in vsorted(g.neighbours(u)):
            if v not in a:
                crossing.append((u, v, g.mult(u, v)))
    return EdgeCut(a, tuple(crossing), sum(m for _, _, m in crossing))


def cut_size(g: Multigraph, a: Iterable[Vertex]) -> int:
    a = set(a)
    return sum(m for u in a for v, m in g.neighbours(u).items() if v not in a)


def edges_between(g: Multigraph, a: Iterable[Vertex], b: Iterable[Vertex]) -> int:
    """``|E_G(A, B)|`` for disjoint ``a`` and ``b``."""
    b = set(b)
    return sum(m for u in set(a) for v, m in g.neighbours(u).items() if v in b)


def quotient(g: Multigraph, image: Mapping, extra: Iterable[Vertex] = ()) -> Multigraph:
    """Identify vertices according to ``image`` (vertex -> new id).

    Parallel edges are kept, loops dropped.  Vertices without an entry keep
    their id; ``extra`` adds isolated vertices (e.g. images of empty parts).
    """
    f = lambda v: image.get(v, v)
    adj: dict = {f(v): {} for v in g.vertices}
    for x in extra:
        adj.setdefault(x, {})
    for u, v, m in g.edges():
        fu, fv = f(u), f(v)
        if fu == fv:
            continue
        adj[fu][fv] = adj[fu].get(fv, 0) + m
        adj[fv][fu] = adj[fv].get(fu, 0) + m
    return Multigraph._from_adj(adj)


def contract(g: Multigraph, parts: Iterable[Iterable[Vertex]], names: list | None = None):
    """Contract each part of a partition of ``V(g)`` to one vertex.

    Returns ``(graph, image)`` where ``image`` maps every original vertex to
    the vertex of its part.  A part is named by ``names[i]`` if given, else by
    its least member, so all-singleton partitions return ``g`` unchanged.
    """
    parts = [frozenset(p) for p in parts]
    seen: set = set()
    for p in parts:
        if not p:
            raise ValueError("empty part in partition")
        if seen & p:
            raise ValueError("parts overlap")
        seen |= p
    if seen != set(g.vertices):
        raise ValueError("parts do not cover the vertex set")
    if names is None:
        names = [vsorted(p)[0] for p in parts]
    elif len(set(names)) != len(parts) or len(names) != len(parts):
        raise ValueError("names must be distinct, one per part")
    image = {v: name for p, name in zip(parts, names) for v in p}
    return quotient(g, image), image


def suppress(g: Multigraph, v) -> Multigraph:
    """Suppress a degree-2 vertex; a would-be loop is dropped."""
    if g.degree(v) != 2:
        raise ValueError(f"cannot suppress {v!r}: degree {g.degree(v)} != 2")
    adj = g.adjacency()
    _suppress_in_place(adj, v)
    return Multigraph._from_adj(adj)


def _suppress_in_place(adj: dict, v) -> tuple:
    nb = adj.pop(v)
    ends = [u for u, m in nb.items() for _ in range(m)]
    for u in nb:
        del adj[u][v]
    u, w = ends
    if u != w:
        adj[u][w] = adj[u].get(w, 0) + 1
        adj[w][u] = adj[w].get(u, 0) + 1
    return u, w


def _delete_in_place(adj: dict, v) -> None:
    for u in adj.pop(v):
        del adj[u][v]


def components(g: Multigraph) -> list[frozenset]:
    """Vertex sets of the connected components, ordered by least member."""
    seen: set = set()
    out = []
    for s in g.sorted_vertices():
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbours(x):
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out


def is_connected(g: Multigraph) -> bool:
    return len(components(g)) <= 1


def min_edge_cut(g: Multigraph) -> EdgeCut:
    """Global minimum edge cut (Stoer-Wagner), multiplicity weighted.

    A disconnected graph gives a size-0 cut around the component holding the
    least vertex.
    """
    if len(g) < 2:
        raise ValueError("min_edge_cut needs at least two vertices")
    comps = components(g)
    if len(comps) > 1:
        return edge_cut(g, comps[0])

    order = g.sorted_vertices()
    pos = {v: i for i, v in enumerate(order)}
    w = {v: dict(g.neighbours(v)) for v in order}
    merged = {v: {v} for v in order}
    active = list(order)
    best_size, best_side = None, None
    while len(active) > 1:
        # maximum adjacency ordering from the first active vertex
        start = active[0]
        weight = {v: w[start].get(v, 0) for v in active if v != start}
        prev, last = None, start
        cut_of_phase = 0
        while weight:
            nxt = max(weight, key=lambda v: (weight[v], -pos[v]))
            cut_of_phase = weight.pop(nxt)
            for u, m in w[nxt].items():
                if u in weight:
                    weight[u] += m
            prev, last = last, nxt
        if best_size is None or cut_of_phase < best_size:
            best_size, best_side = cut_of_phase, frozenset(merged[last])
        # merge last into prev
        for u, m in w[last].items():
            if u == prev:
                continue
            w[prev][u] = w[prev].get(u, 0) + m
            w[u][prev] = w[u].get(prev, 0) + m
            del w[u][last]
        w[prev].pop(last, None)
        del w[last]
        merged[prev] |= merged.pop(last)
        active.remove(last)
    side = best_side
    # report the side holding the least vertex for determinism
    if order[0] not in side:
        side = frozenset(g.vertices) - side
    return edge_cut(g, side)


def is_k_edge_connected(g: Multigraph, k: int) -> bool:
    if len(g) < 2:
        return True
    return min_edge_cut(g).size >= k


def bfs_path(g: Multigraph, s, t, allowed=None) -> list | None:
    """Shortest ``s``-``t`` path whose internal vertices lie in ``allowed``."""
    if s == t:
        return [s]
    prev = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in vsorted(g.neighbours(x)):
            if y in prev:
                continue
            if y != t and allowed is not None and y not in allowed:
                continue
            prev[y] = x
            if y == t:
                path = [t]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(y)
    return None


def path_edge_usage(paths: Iterable[list]) -> dict:
    """Count how often each unordered vertex pair is traversed."""
    use: dict = {}
    for p in paths:
        for x, y in zip(p, p[1:]):
            key = frozenset((x, y))
            use[key] = use.get(key, 0) + 1
    return use


def respects_multiplicities(g: Multigraph, paths: Iterable[list]) -> bool:
    for key, n in path_edge_usage(paths).items():
        if len(key) != 2:
            return False
        x, y = tuple(key)
        if g.mult(x, y) < n:
            return False
    return True
