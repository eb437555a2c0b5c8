"""Strong and weak immersions: exact backtracking search, the spider and
apex-path constructions, composition, and the terminal-routing checks used
against tree-cut decompositions.

An embedding maps every vertex of the pattern ``H`` to a distinct host
vertex and every edge copy ``(u, v, i)`` (``u`` before ``v`` in vkey order,
``0 <= i < mult``) to a host path between the images.  Paths are pairwise
edge-disjoint up to multiplicity; in strong mode no path passes through an
image vertex.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import deque
from dataclasses import dataclass, field

from .flow import capped_vertex_paths, edge_connectivity
from .multigraph import Multigraph, respects_multiplicities, vkey, vsorted
from .treecut import TreeCutDecomposition, adhesion, edge_sides, three_centre, torso, twin_classes

PRESENT, ABSENT, INCONCLUSIVE = "present", "absent", "inconclusive"
MAX_PATTERN = 10
MAX_HOST = 40


def edge_keys(h: Multigraph) -> list[tuple]:
    return [(u, v, i) for u, v, m in h.edges() for i in range(m)]


@dataclass
class ImmersionEmbedding:
    branch: dict
    paths: dict  # (u, v, i) -> [branch[u], ..., branch[v]]
    mode: str = "strong"


def check_embedding(h: Multigraph, g: Multigraph, emb: ImmersionEmbedding) -> list[str]:
    """Independent validity check; returns the list of problems found."""
    problems = []
    if set(emb.branch) != set(h.vertices):
        problems.append("branch map does not cover V(H)")
    images = list(emb.branch.values())
    if len(set(images)) != len(images):
        problems.append("branch map is not injective")
    if any(x not in g for x in images):
        problems.append("branch image outside V(G)")
    if problems:
        return problems
    keys = edge_keys(h)
    if set(emb.paths) != set(keys):
        problems.append("path keys do not match the edge copies of H")
        return problems
    image_set = set(images)
    for (u, v, i), p in emb.paths.items():
        if not p or p[0] != emb.branch[u] or p[-1] != emb.branch[v]:
            problems.append(f"path for {(u, v, i)!r} has wrong ends")
        if len(set(p)) != len(p):
            problems.append(f"path for {(u, v, i)!r} repeats a vertex")
        if any(g.mult(x, y) == 0 for x, y in zip(p, p[1:])):
            problems.append(f"path for {(u, v, i)!r} uses a non-edge")
        if emb.mode == "strong" and any(x in image_set for x in p[1:-1]):
            problems.append(f"path for {(u, v, i)!r} passes through a branch vertex")
    if not problems and not respects_multiplicities(g, emb.paths.values()):
        problems.append("paths overuse some multiplicity")
    return problems


def is_valid_embedding(h, g, emb) -> bool:
    return not check_embedding(h, g, emb)


@dataclass
class ImmersionResult:
    status: str
    embedding: ImmersionEmbedding | None = None
    nodes: int = 0
    reason: str = ""

    @property
    def present(self) -> bool:
        return self.status == PRESENT


class _Budget(Exception):
    pass


class _Search:
    def __init__(self, h, g, strong, node_limit, deadline):
        self.h, self.g, self.strong = h, g, strong
        self.node_limit, self.deadline = node_limit, deadline
        self.nodes = 0
        self.rank = {v: i for i, v in enumerate(g.sorted_vertices())}
        self.order = self._vertex_order()
        pos = {x: i for i, x in enumerate(self.order)}
        # edge copies to route right after placing order[i]
        self.tasks = [[] for _ in self.order]
        for u, v, m in h.edges():
            last = max(pos[u], pos[v])
            self.tasks[last].extend((u, v, c) for c in range(m))
        self.twin_prev = {}
        for cls in twin_classes(h):
            members = sorted(cls, key=pos.get)
            for a, b in zip(members, members[1:]):
                if h.mult(a, b) == 0:
                    self.twin_prev[b] = a
        self.lam_h = {}
        for a, b in itertools.combinations(self.order, 2):
            lam = edge_connectivity(h, a, b)
            if lam:
                self.lam_h[frozenset((a, b))] = lam
        self.lam_cap = max(self.lam_h.values(), default=0)
        self.lam_g: dict = {}
        self.cands = vsorted(g.vertices)
        self.cands.sort(key=lambda c: -g.degree(c))
        self.branch: dict = {}
        self.image: set = set()
        self.used = {v: {} for v in g.vertices}
        self.load = {v: 0 for v in g.vertices}      # edge ends consumed
        self.internal = {v: 0 for v in g.vertices}  # paths through v
        self.paths: dict = {}

    def _vertex_order(self):
        # most constrained first: most edges back to the placed vertices,
        # then highest degree, then least id
        h = self.h
        left = h.sorted_vertices()
        order = []
        while left:
            placed = set(order)
            best = max(left, key=lambda x: (sum(m for y, m in h.neighbours(x).items() if y in placed),
                                            h.degree(x)))
            order.append(best)
            left.remove(best)
        return order

    def tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Budget("node limit")
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _Budget("time limit")

    def lam(self, a, b):
        key = frozenset((a, b))
        if key not in self.lam_g:
            self.lam_g[key] = edge_connectivity(self.g, a, b, limit=self.lam_cap)
        return self.lam_g[key]

    def free_degree(self, c):
        return self.g.degree(c) - self.load[c]

    def fits(self, x, c) -> bool:
        if c in self.image or self.free_degree(c) < self.h.degree(x):
            return False
        if self.strong and self.internal[c]:
            return False
        tw = self.twin_prev.get(x)
        if tw is not None and self.rank[c] < self.rank[self.branch[tw]]:
            return False
        for y, b in self.branch.items():
            need = self.lam_h.get(frozenset((x, y)))
            if need and self.lam(c, b) < need:
                return False
        return True

    def rest_feasible(self, i) -> bool:
        need = sorted((self.h.degree(x) for x in self.order[i:]), reverse=True)
        if not need:
            return True
        avail = sorted((self.free_degree(c) for c in self.g.vertices
                        if c not in self.image and not (self.strong and self.internal[c])), reverse=True)
        if len(avail) < len(need):
            return False
        return all(a >= n for a, n in zip(avail, need))

    def place(self, i) -> bool:
        if i == len(self.order):
            return True
        if not self.rest_feasible(i):
            return False
        x = self.order[i]
        for c in self.cands:
            if not self.fits(x, c):
                continue
            self.tick()
            self.branch[x] = c
            self.image.add(c)
            if self.route(i, 0):
                return True
            del self.branch[x]
            self.image.discard(c)
        return False

    def route(self, i, j) -> bool:
        tasks = self.tasks[i]
        if j == len(tasks):
            return self.place(i + 1)
        u, v, c = tasks[j]
        floor = None
        if c > 0:
            floor = tuple(vkey(z) for z in self.paths[(u, v, c - 1)])
        for p in self.simple_paths(self.branch[u], self.branch[v]):
            if floor is not None and tuple(vkey(z) for z in p) < floor:
                continue
            self.tick()
            self.apply(p, +1)
            self.paths[(u, v, c)] = p
            if self.route(i, j + 1):
                return True
            del self.paths[(u, v, c)]
            self.apply(p, -1)
        return False

    def apply(self, p, sign):
        for a, b in zip(p, p[1:]):
            self.used[a][b] = self.used[a].get(b, 0) + sign
            self.used[b][a] = self.used[b].get(a, 0) + sign
            self.load[a] += sign
            self.load[b] += sign
        for z in p[1:-1]:
            self.internal[z] += sign

    def residual(self, a, b):
        return self.g.mult(a, b) - self.used[a].get(b, 0)

    def passable(self, z):
        return not (self.strong and z in self.image)

    def simple_paths(self, s, t):
        g = self.g
        dist = {t: 0}
        queue = deque([t])
        while queue:
            x = queue.popleft()
            if x != t and not self.passable(x):
                continue
            for y in g.neighbours(x):
                if y not in dist and self.residual(x, y) > 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        if s not in dist:
            return
        nbrs = {}

        def step(x):
            if x not in nbrs:
                nb = [y for y in g.neighbours(x) if y in dist]
                nbrs[x] = sorted(nb, key=lambda y: (dist[y], vkey(y)))
            return nbrs[x]

        path = [s]
        on_path = {s}
        stack = [iter(step(s))]
        while stack:
            x = path[-1]
            for y in stack[-1]:
                if y in on_path or self.residual(x, y) <= 0:
                    continue
                if y == t:
                    yield path + [t]
                    continue
                if not self.passable(y):
                    continue
                path.append(y)
                on_path.add(y)
                stack.append(iter(step(y)))
                break
            else:
                stack.pop()
                on_path.discard(path.pop())


def find_immersion(h: Multigraph, g: Multigraph, mode: str = "strong", *, node_limit: int | None = 2_000_000,
                   timeout: float | None = None, max_pattern: int = MAX_PATTERN,
                   max_host: int = MAX_HOST) -> ImmersionResult:
    """Exact immersion test.

    Returns ``absent`` only after the search space is exhausted (or a
    necessary condition on sizes or degrees fails) and ``inconclusive`` when
    a size cap, the node limit or the timeout is hit.
    """
    if mode not in ("strong", "weak"):
        raise ValueError(f"unknown mode {mode!r}")
    if len(h) > len(g):
        return ImmersionResult(ABSENT, reason="pattern has more vertices than host")
    if h.num_edges() > g.num_edges():
        return ImmersionResult(ABSENT, reason="pattern has more edges than host")
    hd = sorted((h.degree(v) for v in h.vertices), reverse=True)
    gd = sorted((g.degree(v) for v in g.vertices), reverse=True)
    if any(a > b for a, b in zip(hd, gd)):
        return ImmersionResult(ABSENT, reason="degree sequence filter")
    # the filters above are exact at any size; only the search is capped
    if len(h) > max_pattern or len(g) > max_host:
        return ImmersionResult(INCONCLUSIVE, reason=f"size cap exceeded ({len(h)} > {max_pattern} or "
                                                     f"{len(g)} > {max_host})")
    deadline = None if timeout is None else time.monotonic() + timeout
    search = _Search(h, g, mode == "strong", node_limit, deadline)
    try:
        found = search.place(0)
    except _Budget as exc:
        return ImmersionResult(INCONCLUSIVE, nodes=search.nodes, reason=str(exc))
    if not found:
        return ImmersionResult(ABSENT, nodes=search.nodes, reason="exhaustive search")
    emb = ImmersionEmbedding(dict(search.branch), {k: list(p) for k, p in search.paths.items()}, mode)
    problems = check_embedding(h, g, emb)
    if problems:
        raise AssertionError(f"search produced an invalid embedding: {problems}")
    return ImmersionResult(PRESENT, emb, search.nodes, "embedding found")


def identity_embedding(g: Multigraph) -> ImmersionEmbedding:
    return ImmersionEmbedding({v: v for v in g.vertices}, {(u, v, i): [u, v] for u, v, i in edge_keys(g)})


# ---------------------------------------------------------------------------
# constructions

HUB = 0


def spider(k: int, n: int) -> Multigraph:
    """``S_{k,n}``: hub 0 joined to each of 1..n by k parallel edges."""
    if k < 1 or n < 1:
        raise ValueError("spider needs k, n >= 1")
    return Multigraph(range(n + 1), [(HUB, i, k) for i in range(1, n + 1)])


def embed_in_spider(h: Multigraph, k: int, n: int) -> ImmersionEmbedding:
    """Greedy strong embedding of a graph with at most n vertices and maximum
    degree at most k: vertices go to leaves, each edge to leaf-hub-leaf."""
    if len(h) > n:
        raise ValueError(f"pattern has {len(h)} > {n} vertices")
    if h.max_degree() > k:
        raise ValueError(f"pattern has maximum degree {h.max_degree()} > {k}")
    leaf = {v: i + 1 for i, v in enumerate(h.sorted_vertices())}
    paths = {(u, v, i): [leaf[u], HUB, leaf[v]] for u, v, i in edge_keys(h)}
    return ImmersionEmbedding(leaf, paths)


APEX = "apex"


def apex_path(n: int) -> Multigraph:
    """``P_n * v``: the path 0..n of length n plus an apex joined to all of it."""
    if n < 0:
        raise ValueError("path length must be nonnegative")
    edges = [(i, i + 1) for i in range(n)] + [(APEX, i) for i in range(n + 1)]
    return Multigraph(list(range(n + 1)) + [APEX], edges)


@dataclass
class SpiderSubdivision:
    """Subdivision of ``S_{3,k}``: hub, k leaves and three paths per leaf."""

    hub: object
    leaves: list
    paths: dict  # (j, copy) -> path from hub to leaves[j]

    def as_embedding(self) -> ImmersionEmbedding:
        branch = {HUB: self.hub}
        branch.update({j + 1: b for j, b in enumerate(self.leaves)})
        return ImmersionEmbedding(branch, {(HUB, j + 1, c): list(p) for (j, c), p in self.paths.items()})


def apex_to_spider_subdivision(k: int, path_length: int | None = None) -> tuple[Multigraph, SpiderSubdivision]:
    """Drop every third path edge of ``P_{3k-1} * v``; each remaining segment
    a-b-c gives the hub paths v-b, v-a-b and v-c-b."""
    if k < 1:
        raise ValueError("k must be positive")
    n = 3 * k - 1 if path_length is None else path_length
    if n < 3 * k - 1:
        raise ValueError(f"path of length {n} is too short for {k} segments")
    g = apex_path(n)
    leaves, paths = [], {}
    for j in range(k):
        a, b, c = 3 * j, 3 * j + 1, 3 * j + 2
        leaves.append(b)
        paths[(j, 0)] = [APEX, b]
        paths[(j, 1)] = [APEX, a, b]
        paths[(j, 2)] = [APEX, c, b]
    return g, SpiderSubdivision(APEX, leaves, paths)


def check_subdivision(g: Multigraph, sub: SpiderSubdivision, k: int) -> list[str]:
    """Subgraph check: the paths exist in g, run hub to leaf, three per leaf,
    and no vertex other than hub and leaves is shared or reused."""
    problems = []
    if len(sub.leaves) != k or len(set(sub.leaves)) != k or sub.hub in sub.leaves:
        problems.append("wrong branch vertices")
    if set(sub.paths) != {(j, c) for j in range(k) for c in range(3)}:
        problems.append("need exactly three paths per leaf")
        return problems
    inner_seen: set = set()
    edge_seen: set = set()
    branch = {sub.hub, *sub.leaves}
    for (j, c), p in sub.paths.items():
        if p[0] != sub.hub or p[-1] != sub.leaves[j]:
            problems.append(f"path {(j, c)} has wrong ends")
        for x, y in zip(p, p[1:]):
            if g.mult(x, y) == 0:
                problems.append(f"path {(j, c)} uses non-edge {x}-{y}")
            e = frozenset((x, y))
            if e in edge_seen:
                problems.append(f"edge {x}-{y} used twice")
            edge_seen.add(e)
        for z in p[1:-1]:
            if z in branch or z in inner_seen:
                problems.append(f"inner vertex {z!r} is shared")
            inner_seen.add(z)
    return problems


def _shortcut(walk: list) -> list:
    """Remove closed sub-walks so every vertex appears once."""
    out: list = []
    index: dict = {}
    for x in walk:
        if x in index:
            for z in out[index[x] + 1:]:
                del index[z]
            del out[index[x] + 1:]
        else:
            index[x] = len(out)
            out.append(x)
    return out


def compose(outer: ImmersionEmbedding, inner: ImmersionEmbedding, middle: Multigraph) -> ImmersionEmbedding:
    """Embedding of H in K from H in G (``outer``) and G in K (``inner``).

    Each traversal of a G edge is served by a distinct copy of its K path.
    """
    copies: dict = {}
    for (u, v, i), p in inner.paths.items():
        copies.setdefault((u, v), []).append(p)
        copies.setdefault((v, u), []).append(p[::-1])
    used: dict = {}
    paths = {}
    for key in sorted(outer.paths, key=vkey):
        walk = [inner.branch[outer.paths[key][0]]]
        for x, y in zip(outer.paths[key], outer.paths[key][1:]):
            pair = (x, y) if vkey(x) <= vkey(y) else (y, x)
            n = used.get(pair, 0)
            used[pair] = n + 1
            seg = copies[pair][n]
            if pair != (x, y):
                seg = seg[::-1]
            walk.extend(seg[1:])
        paths[key] = _shortcut(walk)
    mode = "strong" if outer.mode == inner.mode == "strong" else "weak"
    branch = {x: inner.branch[b] for x, b in outer.branch.items()}
    return ImmersionEmbedding(branch, paths, mode)


# ---------------------------------------------------------------------------
# terminal routing and the orientation towards a sink

@dataclass
class PropertyStarReport:
    ok: bool
    checked: int
    exhaustive: bool
    failure: tuple | None = None  # (A, B, separator)
    witnesses: list = field(default_factory=list)


def verify_property_star(g: Multigraph, zu, u, *, samples: int = 200, seed: int = 0,
                         exhaustive_limit: int = 6, keep_witnesses: bool = False) -> PropertyStarReport:
    """For disjoint equal-size A, B in ``zu``: |A| edge-disjoint A-B paths
    such that every vertex of ``u`` lies on at most one of them."""
    zu = vsorted(zu)
    u = set(u)
    if not set(zu) <= u:
        raise ValueError("zU must be a subset of U")
    g._check_subset(u)
    if len(zu) <= exhaustive_limit:
        pairs = ((a, b) for k in range(1, len(zu) // 2 + 1)
                 for a in itertools.combinations(zu, k)
                 for b in itertools.combinations([z for z in zu if z not in a], k)
                 if vkey(a[0]) < vkey(b[0]))
        exhaustive = True
    else:
        rng = random.Random(seed)

        def sample():
            for _ in range(samples):
                k = rng.randint(1, len(zu) // 2)
                pick = rng.sample(zu, 2 * k)
                yield tuple(pick[:k]), tuple(pick[k:])

        pairs = sample()
        exhaustive = False
    checked = 0
    wits = []
    for a, b in pairs:
        checked += 1
        res = capped_vertex_paths(g, a, b, len(a), u)
        if not res.found:
            return PropertyStarReport(False, checked, exhaustive, (a, b, res.separator))
        if keep_witnesses:
            wits.append((a, b, res.paths))
    return PropertyStarReport(True, checked, exhaustive, witnesses=wits)


class OrientationError(ValueError):
    """The hypotheses behind the sink argument fail for this input."""


@dataclass
class Orientation:
    heads: dict  # tree edge -> node it points to
    sink: object
    counts: dict  # tree edge -> (terminals on side of e[0], on side of e[1])


def orient_by_terminals(g: Multigraph, d: TreeCutDecomposition, zu, alpha: int,
                        *, check_hypotheses: bool = True) -> Orientation:
    zu = set(zu)
    g._check_subset(zu)
    if check_hypotheses:
        if len(zu) < 2 * (alpha + 1):
            raise OrientationError(f"need at least {2 * (alpha + 1)} terminals, got {len(zu)}")
        top, _ = adhesion(g, d)
        if top > alpha:
            raise OrientationError(f"adhesion {top} exceeds {alpha}")
        for a, b in itertools.combinations(vsorted(zu), 2):
            if edge_connectivity(g, a, b, limit=3) < 3:
                raise OrientationError(f"terminals {a!r}, {b!r} are not 3-edge-connected")
    heads, counts = {}, {}
    for e in d.tree:
        ya, yb = edge_sides(d, e)
        ca, cb = len(zu & ya), len(zu & yb)
        counts[e] = (ca, cb)
        big_a, big_b = ca >= alpha + 1, cb >= alpha + 1
        if big_a == big_b:
            raise OrientationError(f"tree edge {e!r} splits terminals {ca}/{cb}")
        heads[e] = e[0] if big_a else e[1]
    out_deg = {t: 0 for t in d.parts}
    for (a, b), head in heads.items():
        out_deg[a if head == b else b] += 1
    sinks = [t for t in d.nodes if out_deg[t] == 0]
    if len(sinks) != 1:
        raise OrientationError(f"expected a unique sink, found {sinks!r}")
    return Orientation(heads, sinks[0], counts)


def terminals_in_centre(g: Multigraph, d: TreeCutDecomposition, zu, node) -> tuple[set, bool]:
    """The torso image of ``zu`` at ``node`` and whether it survives in the
    3-centre of that torso."""
    zu = set(zu)
    tor = torso(g, d, node)
    zh = {z for z in zu if z in tor.core}
    for p in tor.peripheral:
        if zu & tor.behind(d, p):
            zh.add(p)
    centre = three_centre(tor.graph, tor.core).graph
    return zh, zh <= set(centre.vertices)
