"""Exact tree-width by branch and bound over elimination orderings, and the
conversion of a tree decomposition into a tree-cut decomposition."""
from __future__ import annotations

from dataclasses import dataclass

from ..multigraph import Multigraph, vkey, vsorted
from ..treecut import TreeCutDecomposition, adhesion, torso

TREEWIDTH_CAP = 30


@dataclass
class TreeDecomposition:
    bags: dict   # node -> frozenset
    tree: tuple  # ((n1, n2), ...)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


def validate_td(g: Multigraph, td: TreeDecomposition) -> list[str]:
    problems = []
    nodes = set(td.bags)
    if len(td.tree) != max(len(nodes) - 1, 0):
        problems.append("tree has the wrong number of edges")
    adj = {t: set() for t in nodes}
    for a, b in td.tree:
        if a not in nodes or b not in nodes:
            problems.append(f"tree edge {a!r}-{b!r} leaves the node set")
            return problems
        adj[a].add(b)
        adj[b].add(a)
    if nodes and len(_reach(adj, next(iter(nodes)), nodes)) != len(nodes):
        problems.append("tree is disconnected")
    for v in g.sorted_vertices():
        holders = {t for t, b in td.bags.items() if v in b}
        if not holders:
            problems.append(f"vertex {v!r} is in no bag")
        elif len(_reach(adj, next(iter(holders)), holders)) != len(holders):
            problems.append(f"bags holding {v!r} are not connected")
    for u, v, _ in g.edges():
        if not any(u in b and v in b for b in td.bags.values()):
            problems.append(f"edge {u!r}-{v!r} is in no bag")
    return problems


def _reach(adj, start, allowed) -> set:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in allowed and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _eliminate(adj: dict, v) -> dict:
    nb = adj[v]
    out = {x: (s - {v}) for x, s in adj.items() if x != v}
    for x in nb:
        out[x] |= nb - {x}
    return out


def _min_fill_order(adj: dict) -> tuple[list, int]:
    adj = {v: set(s) for v, s in adj.items()}
    order, width = [], 0
    while adj:
        def fill(v):
            nb = list(adj[v])
            return sum(1 for i in range(len(nb)) for j in range(i + 1, len(nb)) if nb[j] not in adj[nb[i]])
        v = min(vsorted(adj), key=lambda x: (fill(x), len(adj[x])))
        width = max(width, len(adj[v]))
        order.append(v)
        adj = _eliminate(adj, v)
    return order, width


def _degeneracy(adj: dict) -> int:
    """Maximum over subgraphs of the minimum degree (a tree-width lower bound)."""
    adj = {v: set(s) for v, s in adj.items()}
    best = 0
    while adj:
        v = min(adj, key=lambda x: len(adj[x]))
        best = max(best, len(adj[v]))
        for x in adj[v]:
            adj[x].discard(v)
        del adj[v]
    return best


def _minor_min_width(adj: dict) -> int:
    """Lower bound: contract a minimum-degree vertex into its neighbour of
    least degree, recording the largest minimum degree seen."""
    adj = {v: set(s) for v, s in adj.items()}
    best = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (len(adj[x]), vkey(x)))
        best = max(best, len(adj[v]))
        if not adj[v]:
            del adj[v]
            continue
        u = min(adj[v], key=lambda x: (len(adj[x]), vkey(x)))
        for x in adj[v]:
            adj[x].discard(v)
            if x != u:
                adj[x].add(u)
                adj[u].add(x)
        del adj[v]
    return best


def _almost_simplicial(adj, v) -> bool:
    """All neighbours but one form a clique."""
    nb = list(adj[v])
    for skip in nb:
        rest = [x for x in nb if x != skip]
        if all(rest[j] in adj[rest[i]] for i in range(len(rest)) for j in range(i + 1, len(rest))):
            return True
    return False


def _is_simplicial(adj, v) -> bool:
    nb = list(adj[v])
    return all(nb[j] in adj[nb[i]] for i in range(len(nb)) for j in range(i + 1, len(nb)))


def exact_treewidth(g: Multigraph, cap: int = TREEWIDTH_CAP) -> tuple[int, TreeDecomposition]:
    """Optimal width and a decomposition realising it.

    Depth-first search over elimination orderings with a min-fill upper
    bound, a minor-min-width lower bound, a memo keyed on the eliminated set
    and the rule that a simplicial vertex, or an almost simplicial one of
    degree at most the lower bound, may always be eliminated next.
    Multiplicities are ignored.
    """
    if len(g) > cap:
        raise ValueError(f"{len(g)} vertices exceed the tree-width cap of {cap}")
    if len(g) == 0:
        return -1, TreeDecomposition({}, ())
    adj0 = {v: set(g.neighbours(v)) for v in g.vertices}
    best_order, ub = _min_fill_order(adj0)
    lb = max(_degeneracy(adj0), _minor_min_width(adj0))
    memo: dict = {}
    best = [ub, best_order]

    def search(adj, eliminated, order, width):
        if width >= best[0]:
            return
        if not adj:
            best[0], best[1] = width, list(order)
            return
        key = frozenset(eliminated)
        if memo.get(key, 1 << 30) <= width:
            return
        memo[key] = width
        if max(width, _minor_min_width(adj)) >= best[0]:
            return
        if len(adj) <= width + 1:
            # every remaining order stays within the current width
            best[0], best[1] = width, list(order) + vsorted(adj)
            return
        simp = [v for v in vsorted(adj) if _is_simplicial(adj, v)
                or (len(adj[v]) <= max(lb, width) and _almost_simplicial(adj, v))]
        choices = simp[:1] if simp else sorted(vsorted(adj), key=lambda x: len(adj[x]))
        for v in choices:
            order.append(v)
            eliminated.add(v)
            search(_eliminate(adj, v), eliminated, order, max(width, len(adj[v])))
            eliminated.discard(v)
            order.pop()
            if best[0] <= lb:
                return

    if lb < ub:
        search(adj0, set(), [], 0)
    width, order = best
    td = decomposition_from_order(g, order)
    if td.width != width:
        raise AssertionError("elimination ordering and decomposition disagree")
    return width, td


def decomposition_from_order(g: Multigraph, order: list) -> TreeDecomposition:
    """Bag ``{v} + later neighbours in the filled graph`` per vertex, attached to
    the bag of the earliest-eliminated later neighbour."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbours(v)) for v in g.vertices}
    bags, parent = {}, {}
    for v in order:
        later = adj[v]
        bags[v] = frozenset({v} | later)
        parent[v] = min(later, key=pos.get) if later else None
        for x in later:
            adj[x] |= later - {x}
            adj[x].discard(v)
        del adj[v]
    roots = [v for v in order if parent[v] is None]
    tree = [(v, parent[v]) for v in order if parent[v] is not None]
    # join the trees of different components in a chain
    tree += list(zip(roots, roots[1:]))
    return TreeDecomposition(bags, tuple(tree))


class ConversionDefect(AssertionError):
    """The tree-cut conversion broke one of its asserted bounds."""


@dataclass
class ConversionBounds:
    width: int
    max_degree: int
    adhesion: int
    adhesion_bound: int
    torso_order: int
    torso_bound: int


def td_to_tcd(g: Multigraph, td: TreeDecomposition, *, check_bounds: bool = True):
    """Place every vertex in the bag nearest the root that holds it, then
    prune nodes whose whole subtree is empty.

    Returns ``(decomposition, bounds)``; with ``check_bounds`` a
    :class:`ConversionDefect` is raised when adhesion exceeds (2w+2)d or a
    torso has more than (d+1)(w+1) vertices, d the maximum degree.
    """
    nodes = vsorted(td.bags)
    if not nodes:
        raise ValueError("empty tree decomposition")
    adj = {t: [] for t in nodes}
    for a, b in td.tree:
        adj[a].append(b)
        adj[b].append(a)
    root = _pick_root(td, nodes)
    depth, parent = {root: 0}, {root: None}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in depth:
                depth[y], parent[y] = depth[x] + 1, x
                stack.append(y)
    home = {}
    for v in g.vertices:
        holders = [t for t in nodes if v in td.bags[t]]
        home[v] = min(holders, key=lambda t: (depth[t], vkey(t)))
    parts = {t: set() for t in nodes}
    for v, t in home.items():
        parts[t].add(v)
    alive = set(nodes)
    changed = True
    while changed:
        changed = False
        for t in vsorted(alive):
            kids = [y for y in adj[t] if y in alive and y != parent[t]]
            if t != root and not kids and not parts[t]:
                alive.discard(t)
                changed = True
    tree = tuple((t, parent[t]) for t in vsorted(alive) if parent[t] is not None)
    d = TreeCutDecomposition(tree, {t: parts[t] for t in alive})
    w = td.width
    deg = g.max_degree() if len(g) else 0
    top, _ = adhesion(g, d)
    order = max(len(torso(g, d, t, check=False).graph) for t in d.nodes)
    bounds = ConversionBounds(w, deg, top, (2 * w + 2) * deg, order, (deg + 1) * (w + 1))
    if check_bounds:
        if top > bounds.adhesion_bound:
            raise ConversionDefect(f"adhesion {top} exceeds (2w+2)d = {bounds.adhesion_bound}")
        if order > bounds.torso_bound:
            raise ConversionDefect(f"torso of order {order} exceeds (d+1)(w+1) = {bounds.torso_bound}")
    return d, bounds


def _pick_root(td, nodes):
    # a largest bag keeps the root-most placement stable
    return min(nodes, key=lambda t: (-len(td.bags[t]), vkey(t)))
