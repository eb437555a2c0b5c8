"""Tree-cut decompositions: validation, adhesion, torsos, 3-centres and
width certificates.

A decomposition is a tree on hashable node ids plus a part (possibly empty)
for every node.  Torsos contract each component of ``T - t`` to a single
:class:`Peripheral` vertex named after ``t`` and the neighbour of ``t`` in
that component, so the same decomposition always yields the same torso.
"""
from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field

from .multigraph import Multigraph, _delete_in_place, _suppress_in_place, edges_between, quotient, vkey, vsorted
from .thinness import DEFAULT_CAP, AlmostThinWitness, check_witness, is_almost_alpha_thin


@dataclass(frozen=True)
class Peripheral:
    """Torso vertex standing for the component of ``T - node`` containing ``via``."""

    node: object
    via: object

    def sort_key(self):
        return (vkey(self.node), vkey(self.via))

    def __repr__(self):
        return f"P({self.node!r}->{self.via!r})"


@dataclass(frozen=True)
class TreeCutDecomposition:
    tree: tuple   # ((t1, t2), ...)
    parts: dict   # node -> frozenset

    def __post_init__(self):
        object.__setattr__(self, "parts", {t: frozenset(p) for t, p in self.parts.items()})
        object.__setattr__(self, "tree", tuple(tuple(e) for e in self.tree))

    @classmethod
    def trivial(cls, g: Multigraph, node=0) -> "TreeCutDecomposition":
        return cls((), {node: frozenset(g.vertices)})

    @property
    def nodes(self) -> list:
        return vsorted(self.parts)

    def tree_adjacency(self) -> dict:
        adj = {t: [] for t in self.parts}
        for a, b in self.tree:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        return {t: vsorted(nb) for t, nb in adj.items()}

    def node_of(self, v):
        for t, p in self.parts.items():
            if v in p:
                return t
        raise KeyError(v)

    def side(self, t, via) -> set:
        """Nodes of the component of ``T - t`` that contains ``via``."""
        adj = self.tree_adjacency()
        seen = {t, via}
        queue = deque([via])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        seen.discard(t)
        return seen

    def union(self, nodes) -> frozenset:
        out: set = set()
        for t in nodes:
            out |= self.parts[t]
        return frozenset(out)

    def to_json(self) -> dict:
        from .multigraph import vlabel
        return {
            "tree": [[vlabel(a), vlabel(b)] for a, b in self.tree],
            "parts": {vlabel(t): sorted(vlabel(v) for v in self.parts[t]) for t in self.nodes},
        }

    @classmethod
    def from_json(cls, data: dict, vertex_lookup: dict | None = None) -> "TreeCutDecomposition":
        """Inverse of :meth:`to_json`; node ids stay strings, vertices are
        translated through ``vertex_lookup`` (label -> id) when given."""
        look = vertex_lookup or {}
        parts = {t: frozenset(look.get(v, v) for v in vs) for t, vs in data["parts"].items()}
        tree = tuple((a, b) for a, b in data["tree"])
        return cls(tree, parts)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def validate(g: Multigraph, d: TreeCutDecomposition) -> list[str]:
    """All violations of the decomposition axioms; empty list means valid."""
    problems = []
    nodes = set(d.parts)
    if not nodes:
        problems.append("tree has no nodes")
    for a, b in d.tree:
        if a not in nodes or b not in nodes:
            problems.append(f"tree edge {a!r}-{b!r} uses a node without a part")
        if a == b:
            problems.append(f"tree loop at {a!r}")
    if len({frozenset(e) for e in d.tree}) != len(d.tree):
        problems.append("repeated tree edge")
    if nodes and len(d.tree) != len(nodes) - 1:
        problems.append(f"tree has {len(d.tree)} edges for {len(nodes)} nodes")
    elif nodes and not problems:
        adj = d.tree_adjacency()
        start = next(iter(nodes))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != nodes:
            problems.append("tree is disconnected")
    owner: dict = {}
    for t in vsorted(nodes):
        for v in d.parts[t]:
            if v not in g:
                problems.append(f"part {t!r} holds unknown vertex {v!r}")
            elif v in owner:
                problems.append(f"vertex {v!r} lies in parts {owner[v]!r} and {t!r}")
            else:
                owner[v] = t
    for v in g.sorted_vertices():
        if v not in owner:
            problems.append(f"vertex {v!r} is in no part")
    return problems


def is_valid(g: Multigraph, d: TreeCutDecomposition) -> bool:
    return not validate(g, d)


def _require_valid(g, d):
    problems = validate(g, d)
    if problems:
        raise ValueError("invalid tree-cut decomposition: " + "; ".join(problems))


def edge_sides(d: TreeCutDecomposition, edge) -> tuple[frozenset, frozenset]:
    """Vertex unions on the two sides of a tree edge."""
    a, b = edge
    return d.union(d.side(b, a)), d.union(d.side(a, b))


def adhesion(g: Multigraph, d: TreeCutDecomposition) -> tuple[int, dict]:
    _require_valid(g, d)
    per_edge = {}
    for e in d.tree:
        ya, yb = edge_sides(d, e)
        per_edge[tuple(e)] = edges_between(g, ya, yb)
    return max(per_edge.values(), default=0), per_edge


@dataclass(frozen=True)
class Torso:
    graph: Multigraph
    core: frozenset
    peripheral: dict  # Peripheral -> frozenset of tree nodes behind it
    node: object

    def behind(self, d: TreeCutDecomposition, p: Peripheral) -> frozenset:
        return d.union(self.peripheral[p])


def torso(g: Multigraph, d: TreeCutDecomposition, t, *, check: bool = True) -> Torso:
    if t not in d.parts:
        raise KeyError(f"unknown node {t!r}")
    if check:
        _require_valid(g, d)
    image = {}
    peripheral = {}
    for via in d.tree_adjacency()[t]:
        side = frozenset(d.side(t, via))
        p = Peripheral(t, via)
        peripheral[p] = side
        for v in d.union(side):
            image[v] = p
    h = quotient(g, image, extra=peripheral)
    return Torso(h, d.parts[t], peripheral, t)


@dataclass(frozen=True)
class ThreeCentre:
    graph: Multigraph
    protected: frozenset


def reduce_low_degree(h: Multigraph, protected=frozenset(), *, rng: random.Random | None = None,
                      log: list | None = None, suppress_ok=True, eligible=None) -> Multigraph:
    """Maximal sequence of deletions (degree <= 1) and suppressions (degree 2)
    of unprotected vertices.

    Without ``rng`` the least eligible vertex is reduced first; with ``rng``
    the choice is random.  ``log`` receives ``("delete", v, anchor)`` and
    ``("suppress", v, (u, w))`` steps, where ``anchor`` is a neighbour at the
    time of deletion or None.  ``eligible`` restricts which vertices may be
    reduced at all.
    """
    protected = frozenset(protected)
    adj = h.adjacency()

    def ok(v):
        if v in protected or (eligible is not None and v not in eligible):
            return False
        deg = sum(adj[v].values())
        return deg <= 1 or (deg == 2 and suppress_ok)

    todo = {v for v in adj if ok(v)}
    while todo:
        v = rng.choice(vsorted(todo)) if rng is not None else min(todo, key=vkey)
        todo.discard(v)
        if v not in adj or not ok(v):
            continue
        nb = list(adj[v])
        if sum(adj[v].values()) <= 1:
            _delete_in_place(adj, v)
            if log is not None:
                log.append(("delete", v, nb[0] if nb else None))
        else:
            u, w = _suppress_in_place(adj, v)
            if log is not None:
                log.append(("suppress", v, (u, w)))
        for x in nb:
            if x in adj and ok(x):
                todo.add(x)
    return Multigraph._from_adj(adj)


def three_centre(h: Multigraph, protected=frozenset(), *, rng: random.Random | None = None) -> ThreeCentre:
    protected = frozenset(protected)
    h._check_subset(protected)
    return ThreeCentre(reduce_low_degree(h, protected, rng=rng), protected)


MODES = ("3-centre", "degree-1", "torso")


def reduced_torso(tor: Torso, mode: str = "3-centre") -> Multigraph:
    """The graph whose almost-thinness is certified at a node.

    ``3-centre`` is the real notion; ``torso`` uses the torso itself and
    ``degree-1`` only deletes peripheral vertices of degree at most one,
    repeatedly.  The last two exist to exhibit why 3-centres are needed.
    """
    if mode == "3-centre":
        return three_centre(tor.graph, tor.core).graph
    if mode == "torso":
        return tor.graph
    if mode == "degree-1":
        return reduce_low_degree(tor.graph, tor.core, suppress_ok=False, eligible=set(tor.peripheral))
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class WidthCertificate:
    alpha: int
    adhesions: dict
    witnesses: dict  # node -> AlmostThinWitness of the reduced torso
    mode: str = "3-centre"


@dataclass
class WidthViolation:
    kind: str      # "adhesion" or "torso"
    locus: object  # tree edge or node
    detail: str

    def __str__(self):
        return f"{self.kind} violation at {self.locus!r}: {self.detail}"


def certify_width(g: Multigraph, d: TreeCutDecomposition, alpha: int, *, mode: str = "3-centre",
                  cap: int = DEFAULT_CAP):
    """Adhesion check, then almost-alpha-thinness of every reduced torso."""
    _, per_edge = adhesion(g, d)
    for e in sorted(per_edge, key=vkey):
        if per_edge[e] > alpha:
            return WidthViolation("adhesion", e, f"adhesion {per_edge[e]} exceeds {alpha}")
    witnesses = {}
    for t in d.nodes:
        core = reduced_torso(torso(g, d, t, check=False), mode)
        wit = is_almost_alpha_thin(core, alpha, cap)
        if wit is None:
            return WidthViolation("torso", t, f"reduced torso on {len(core)} vertices is not almost-{alpha}-thin")
        witnesses[t] = wit
    return WidthCertificate(alpha, per_edge, witnesses, mode)


def check_certificate(g: Multigraph, d: TreeCutDecomposition, cert: WidthCertificate) -> bool:
    """Re-verify a certificate without trusting the search that produced it."""
    if validate(g, d):
        return False
    _, per_edge = adhesion(g, d)
    if any(v > cert.alpha for v in per_edge.values()):
        return False
    for t in d.nodes:
        wit = cert.witnesses.get(t)
        if not isinstance(wit, AlmostThinWitness) or wit.alpha != cert.alpha:
            return False
        core = reduced_torso(torso(g, d, t, check=False), cert.mode)
        if set(wit.deleted) | set(wit.ordering.order) != set(core.vertices):
            return False
        if not check_witness(core, wit):
            return False
    return True


def glue(da: TreeCutDecomposition, db: TreeCutDecomposition, b, a) -> TreeCutDecomposition:
    """Join a decomposition of ``G^A`` (marker ``b``) and one of ``G^B``
    (marker ``a``) along an edge between the nodes holding the markers.

    Nodes are renamed to ``("A", t)`` and ``("B", t)``.
    """
    try:
        ta, tb = da.node_of(b), db.node_of(a)
    except KeyError as exc:
        raise ValueError(f"marker vertex {exc.args[0]!r} is missing") from None
    parts = {}
    for t, p in da.parts.items():
        parts[("A", t)] = p - {b}
    for t, p in db.parts.items():
        parts[("B", t)] = p - {a}
    tree = [(("A", x), ("A", y)) for x, y in da.tree]
    tree += [(("B", x), ("B", y)) for x, y in db.tree]
    tree.append((("A", ta), ("B", tb)))
    return TreeCutDecomposition(tuple(tree), parts)


def relabel_nodes(d: TreeCutDecomposition) -> TreeCutDecomposition:
    """Rename nodes to 0..n-1 in vkey order."""
    names = {t: i for i, t in enumerate(d.nodes)}
    return TreeCutDecomposition(tuple((names[a], names[b]) for a, b in d.tree),
                                {names[t]: p for t, p in d.parts.items()})


# ---------------------------------------------------------------------------
# bounded exhaustive search over decompositions

def _canonical(adj: dict, root) -> str:
    def enc(v, parent):
        return "(" + "".join(sorted(enc(u, v) for u in adj[v] if u != parent)) + ")"
    return enc(root, None)


def _centres(adj: dict) -> list:
    alive = set(adj)
    deg = {v: len(adj[v]) for v in adj}
    layer = [v for v in alive if deg[v] <= 1]
    while len(alive) > 2:
        nxt = []
        for v in layer:
            alive.discard(v)
            for u in adj[v]:
                if u in alive:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt
    return sorted(alive)


def free_trees(n: int) -> list[tuple]:
    """One edge list per isomorphism class of trees on nodes 0..n-1."""
    if n < 1:
        return []
    if n == 1:
        return [()]
    if n == 2:
        return [((0, 1),)]
    seen = {}
    for seq in itertools.product(range(n), repeat=n - 2):
        edges = _prufer_edges(list(seq), n)
        adj = {v: [] for v in range(n)}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        key = min(_canonical(adj, c) for c in _centres(adj))
        if key not in seen:
            seen[key] = tuple(edges)
    return [seen[k] for k in sorted(seen)]


def _prufer_edges(seq: list, n: int) -> list:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = [v for v in range(n) if degree[v] == 1]
    edges.append((u, w))
    return edges


def twin_classes(g: Multigraph) -> list[list]:
    """Classes of pairwise non-adjacent vertices with identical neighbourhoods
    (multiplicities included); swapping two members is an automorphism."""
    buckets: dict = {}
    for v in g.sorted_vertices():
        key = tuple(sorted(((vkey(u), m) for u, m in g.neighbours(v).items())))
        buckets.setdefault(key, []).append(v)
    return sorted(buckets.values(), key=lambda c: vkey(c[0]))


def _compositions(total: int, k: int):
    if k == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def normalised(d: TreeCutDecomposition) -> bool:
    """Leaves carry nonempty parts and no tree edge joins two empty parts."""
    adj = d.tree_adjacency()
    if len(d.parts) > 1 and any(len(adj[t]) == 1 and not d.parts[t] for t in d.parts):
        return False
    return not any(not d.parts[a] and not d.parts[b] for a, b in d.tree)


def _tree_paths(edges, n: int) -> dict:
    """Tree-edge indices on the path between every ordered pair of nodes."""
    adj = {v: [] for v in range(n)}
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    paths = {}
    for s in range(n):
        via = {s: ()}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, i in adj[x]:
                if y not in via:
                    via[y] = via[x] + (i,)
                    queue.append(y)
        for t, p in via.items():
            paths[(s, t)] = p
    return paths


def enumerate_decompositions(g: Multigraph, max_nodes: int, *, max_adhesion: int | None = None):
    """Normalised decompositions on at most ``max_nodes`` nodes, one per
    (tree shape, twin-class count vector).

    With ``max_adhesion`` set, decompositions whose adhesion exceeds it are
    skipped using a per-tree path table instead of full cut computations.
    """
    classes = twin_classes(g)
    edge_list = list(g.edges())
    for n in range(1, max_nodes + 1):
        for edges in free_trees(n):
            paths = _tree_paths(edges, n) if max_adhesion is not None else None
            per_class = [list(_compositions(len(c), n)) for c in classes]
            for choice in itertools.product(*per_class):
                parts = {t: [] for t in range(n)}
                where = {}
                for cls, counts in zip(classes, choice):
                    it = iter(cls)
                    for t, c in enumerate(counts):
                        for v in itertools.islice(it, c):
                            parts[t].append(v)
                            where[v] = t
                if paths is not None:
                    load = [0] * len(edges)
                    over = False
                    for u, v, m in edge_list:
                        for i in paths[(where[u], where[v])]:
                            load[i] += m
                            if load[i] > max_adhesion:
                                over = True
                                break
                        if over:
                            break
                    if over:
                        continue
                d = TreeCutDecomposition(edges, parts)
                if normalised(d):
                    yield d


@dataclass
class SearchResult:
    found: bool
    examined: int
    decomposition: TreeCutDecomposition | None = None
    certificate: WidthCertificate | None = None
    rejections: dict = field(default_factory=dict)  # violation kind -> count


def search_certificate(g: Multigraph, alpha: int, max_nodes: int, *, mode: str = "3-centre",
                       cap: int = DEFAULT_CAP) -> SearchResult:
    """Exhaustive search of the normalised space for a width certificate.

    Decompositions of too large adhesion are discarded during enumeration;
    ``examined`` counts only those that reached the torso checks.
    """
    res = SearchResult(False, 0)
    for d in enumerate_decompositions(g, max_nodes, max_adhesion=alpha):
        res.examined += 1
        out = certify_width(g, d, alpha, mode=mode, cap=cap)
        if isinstance(out, WidthCertificate):
            res.found, res.decomposition, res.certificate = True, d, out
            return res
        res.rejections[out.kind] = res.rejections.get(out.kind, 0) + 1
    return res
