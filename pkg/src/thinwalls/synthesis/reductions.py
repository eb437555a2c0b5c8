"""Reductions to minimum degree 3 and to 3-edge-connected pieces, with
replay logs that lift decompositions and wall embeddings back up."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

from ..immersion import ImmersionEmbedding, check_embedding
from ..multigraph import (Multigraph, _delete_in_place, _suppress_in_place, bfs_path, min_edge_cut,
                          quotient, vkey, vsorted)
from ..treecut import TreeCutDecomposition, glue


@dataclass(frozen=True)
class Marker:
    """Vertex standing for a contracted side of a small cut."""

    index: int
    side: str  # "a" or "b"

    def sort_key(self):
        return ("marker", self.index, self.side)

    def __repr__(self):
        return f"M{self.index}{self.side}"


def reduce_min_degree3(g: Multigraph) -> tuple[Multigraph, list]:
    """Delete degree <= 1 and suppress degree 2 vertices, least first, until
    the minimum degree is 3 or one vertex is left.

    The log holds ``("delete", v, anchor)`` and ``("suppress", v, (u, w))``;
    ``anchor`` is the neighbour of a degree-1 vertex, else None.
    """
    adj = g.adjacency()
    log = []
    while len(adj) > 1:
        low = [v for v in adj if sum(adj[v].values()) <= 2]
        if not low:
            break
        v = min(low, key=vkey)
        if sum(adj[v].values()) <= 1:
            nb = list(adj[v])
            _delete_in_place(adj, v)
            log.append(("delete", v, nb[0] if nb else None))
        else:
            log.append(("suppress", v, _suppress_in_place(adj, v)))
    return Multigraph._from_adj(adj), log


def lift_min_degree3(d: TreeCutDecomposition, log: list) -> TreeCutDecomposition:
    """Undo the log on a decomposition: each removed vertex ``v`` gets its own
    node ``("lift", v)`` hung next to the node of a neighbour."""
    parts = dict(d.parts)
    tree = list(d.tree)
    home = {v: t for t, p in parts.items() for v in p}
    for kind, v, info in reversed(log):
        if kind == "delete":
            u = info if info is not None else min(home, key=vkey)
        else:
            u = info[0]
        t = ("lift", v)
        parts[t] = frozenset([v])
        tree.append((t, home[u]))
        home[v] = t
    return TreeCutDecomposition(tuple(tree), parts)


def _suppression_steps(g: Multigraph, log: list) -> list:
    """Multiplicity of ``uw`` just before each suppression, replayed on ``g``."""
    adj = g.adjacency()
    out = []
    for kind, v, info in log:
        if kind == "delete":
            _delete_in_place(adj, v)
            out.append(None)
        else:
            u, w = info
            out.append(adj[u].get(w, 0) if u != w else None)
            _suppress_in_place(adj, v)
    return out


def lift_embedding_min_degree3(g: Multigraph, log: list, emb: ImmersionEmbedding) -> ImmersionEmbedding:
    """Reroute one path through ``v`` whenever a suppressed edge ``uw`` is
    used more often than ``g`` allows."""
    paths = {k: list(p) for k, p in emb.paths.items()}
    before = _suppression_steps(g, log)
    for (kind, v, info), mult in zip(reversed(log), reversed(before)):
        if kind != "suppress" or mult is None:
            continue
        u, w = info
        users = [k for k in sorted(paths, key=vkey) if _uses(paths[k], u, w)]
        if len(users) > mult:
            p = paths[users[-1]]
            for i in range(len(p) - 1):
                if {p[i], p[i + 1]} == {u, w}:
                    paths[users[-1]] = p[: i + 1] + [v] + p[i + 1:]
                    break
    return ImmersionEmbedding(dict(emb.branch), paths, emb.mode)


def _uses(p, u, w) -> bool:
    return any({x, y} == {u, w} for x, y in zip(p, p[1:]))


# ---------------------------------------------------------------------------
# splitting along cuts of size at most 2

@dataclass
class Piece:
    graph: Multigraph


@dataclass
class Reduced:
    graph: Multigraph   # before reduction
    log: list
    child: object


@dataclass
class Split:
    graph: Multigraph
    side_a: frozenset
    side_b: frozenset
    cut: int
    marker_a: Marker    # stands for side_a inside the B-piece
    marker_b: Marker    # stands for side_b inside the A-piece
    child_a: object     # decomposition tree of G^A
    child_b: object


@dataclass
class SplitTree:
    root: object
    pieces: list = field(default_factory=list)  # Piece objects, in discovery order


def split_3ec(g: Multigraph) -> SplitTree:
    """Reduce to minimum degree 3, then split along a minimum cut while it has
    at most two edges, recursively.  Leaves are 3-edge-connected pieces or
    single vertices."""
    counter = count()
    pieces: list = []

    def build(h: Multigraph):
        r, log = reduce_min_degree3(h)
        if len(r) <= 1:
            inner = Piece(r)
            pieces.append(inner)
        else:
            cut = min_edge_cut(r)
            if cut.size >= 3:
                inner = Piece(r)
                pieces.append(inner)
            else:
                a = frozenset(cut.source_side)
                b = frozenset(r.vertices) - a
                i = next(counter)
                ma, mb = Marker(i, "a"), Marker(i, "b")
                ga = quotient(r, {v: mb for v in b})
                gb = quotient(r, {v: ma for v in a})
                inner = Split(r, a, b, cut.size, ma, mb, None, None)
                inner.child_a = build(ga)
                inner.child_b = build(gb)
        return Reduced(h, log, inner) if log else inner

    root = build(g)
    return SplitTree(root, pieces)


def lift_decomposition(tree: SplitTree, piece_decomps: dict, *, glue_log: list | None = None
                       ) -> TreeCutDecomposition:
    """Glue decompositions of the pieces (keyed by ``id(piece)``) back into one
    of the original graph.

    ``glue_log`` receives ``(tree edge, cut size)`` for every gluing edge,
    named as in the returned decomposition.
    """

    def lift(node):
        if isinstance(node, Piece):
            d = piece_decomps[id(node)]
            if not d.parts:
                d = TreeCutDecomposition((), {0: frozenset()})
            return d, []
        if isinstance(node, Reduced):
            d, edges = lift(node.child)
            return lift_min_degree3(d, node.log), edges
        (da, ea), (db, eb) = lift(node.child_a), lift(node.child_b)
        new = (("A", da.node_of(node.marker_b)), ("B", db.node_of(node.marker_a)))
        edges = [((("A", x), ("A", y)), c) for (x, y), c in ea]
        edges += [((("B", x), ("B", y)), c) for (x, y), c in eb]
        edges.append((new, node.cut))
        return glue(da, db, node.marker_b, node.marker_a), edges

    d, edges = lift(tree.root)
    if glue_log is not None:
        glue_log.extend(edges)
    return d


def lift_embedding(tree: SplitTree, piece: Piece, emb: ImmersionEmbedding, pattern: Multigraph) -> ImmersionEmbedding:
    """Carry an embedding found in ``piece`` up to the original graph."""
    chain = _chain_to(tree.root, piece)
    if chain is None:
        raise ValueError("piece does not belong to this split tree")
    for node, via in reversed(chain):
        if isinstance(node, Reduced):
            emb = lift_embedding_min_degree3(node.graph, node.log, emb)
        else:
            emb = _lift_through_contraction(node, via, emb)
    problems = check_embedding(pattern, tree.root.graph, emb)
    if problems:
        raise AssertionError(f"lifted embedding is invalid: {problems}")
    return emb


def _chain_to(node, target):
    """Ancestors of ``target`` with the branch taken at each split."""
    if node is target:
        return []
    if isinstance(node, Reduced):
        rest = _chain_to(node.child, target)
        return None if rest is None else [(node, None)] + rest
    if isinstance(node, Split):
        for via, child in (("a", node.child_a), ("b", node.child_b)):
            rest = _chain_to(child, target)
            if rest is not None:
                return [(node, via)] + rest
    return None


def _lift_through_contraction(node: Split, via: str, emb: ImmersionEmbedding) -> ImmersionEmbedding:
    """Replace the marker of the contracted side by real vertices.

    At most two cut edges exist, so the marker is either a branch vertex of
    degree at most 2, an inner vertex of a single path, or unused.
    """
    g = node.graph
    keep, other = (node.side_a, node.side_b) if via == "a" else (node.side_b, node.side_a)
    marker = node.marker_b if via == "a" else node.marker_a
    cut_edges = [(x, y) for x in vsorted(keep) for y, m in g.neighbours(x).items() if y in other
                 for _ in range(m)]
    free = list(cut_edges)

    def take(x):
        for i, (cx, cy) in enumerate(free):
            if cx == x:
                return free.pop(i)[1]
        raise AssertionError(f"no cut edge left at {x!r}")

    inside = g.subgraph(other)
    branch = dict(emb.branch)
    paths = {}
    owner = next((z for z, b in branch.items() if b == marker), None)
    anchor = None
    for key in sorted(emb.paths, key=vkey):
        p = list(emb.paths[key])
        if marker not in p:
            paths[key] = p
            continue
        i = p.index(marker)
        if 0 < i < len(p) - 1:
            y1, y2 = take(p[i - 1]), take(p[i + 1])
            link = bfs_path(inside, y1, y2)
            paths[key] = p[:i] + link + p[i + 1:]
        else:
            rev = i == 0
            q = p[::-1] if rev else p
            y = take(q[-2])
            if anchor is None:
                anchor = y
                q = q[:-1] + [y]
            else:
                q = q[:-1] + bfs_path(inside, y, anchor)
            paths[key] = q[::-1] if rev else q
    if owner is not None:
        branch[owner] = anchor if anchor is not None else min(other, key=vkey)
    return ImmersionEmbedding(branch, paths, emb.mode)


def check_split(tree: SplitTree) -> list[str]:
    """Structural checks: pieces are single vertices or 3-edge-connected and
    every split used a cut of at most two edges."""
    problems = []
    for piece in tree.pieces:
        h = piece.graph
        if len(h) > 1 and min_edge_cut(h).size < 3:
            problems.append(f"piece on {len(h)} vertices is not 3-edge-connected")

    def walk(node):
        if isinstance(node, Reduced):
            walk(node.child)
        elif isinstance(node, Split):
            if node.cut > 2:
                problems.append(f"split along a cut of size {node.cut}")
            walk(node.child_a)
            walk(node.child_b)

    walk(tree.root)
    return problems

