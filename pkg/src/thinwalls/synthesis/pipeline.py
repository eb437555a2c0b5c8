"""End-to-end synthesis: a certified tree-cut decomposition, or a strong
immersion of the wall harvested from whichever structural check failed.

Stages, per 3-edge-connected piece ``H``:

1. the auxiliary graph ``A`` of pairs joined by more than ``6 l^2`` edges;
   a vertex with ``2 l^2`` neighbours in ``A`` gives a spider, hence a wall;
2. per component ``C`` of ``A``, a star minor in ``A[C]`` gives a spider,
   otherwise a small vertex set ``X_C`` leaves disjoint paths;
3. a vertex seeing ``6 l^2`` vertices of one such path, or a comb of ``A[C]``
   with ``6 l^2`` teeth next to another component, gives an apex path and
   then a wall;
4. otherwise ``H`` is contracted along ``A``, decomposed with exact tree-width
   and converted; parts are expanded back to branch sets.

Decompositions of the pieces are glued back through the reductions and the
whole is certified at the least alpha that works.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..immersion import (APEX, HUB, ImmersionEmbedding, apex_path, apex_to_spider_subdivision, check_embedding,
                         compose, edge_keys, embed_in_spider, find_immersion, spider)
from ..multigraph import Multigraph, bfs_path, components, contract, vkey, vsorted
from ..thinness import DEFAULT_CAP, CapExceeded, jump_profile, min_almost_thinness
from ..treecut import (TreeCutDecomposition, WidthCertificate, adhesion, certify_width, reduced_torso,
                       three_centre, torso, validate)
from ..walls import build_wall
from .finders import LinearForestCover, StarMinorWitness, find_star_or_comb, linear_forest_cover
from .parameters import Parameters
from .reductions import Piece, lift_decomposition, lift_embedding, split_3ec
from .treewidth import TREEWIDTH_CAP, exact_treewidth, td_to_tcd

CERTIFICATE, WALL, INCONCLUSIVE = "certificate", "wall", "inconclusive"


class Inconclusive(Exception):
    """A cap or budget was hit; the message says which."""


@dataclass
class AuxiliaryGraph:
    graph: Multigraph          # simple graph on V(g)
    components: list           # frozensets, ordered by least vertex
    threshold: int

    @property
    def max_degree(self) -> int:
        return self.graph.max_degree() if len(self.graph) else 0


def build_auxiliary(g: Multigraph, ell: int) -> AuxiliaryGraph:
    p = 6 * ell * ell
    edges = [(u, v) for u, v, m in g.edges() if m > p]
    a = Multigraph(g.vertices, edges)
    return AuxiliaryGraph(a, components(a), p)


def contract_auxiliary(g: Multigraph, aux: AuxiliaryGraph):
    """``G'``: every component of ``A`` becomes one vertex named by its least
    member.  Returns ``(G', branch sets by name)``."""
    gp, image = contract(g, aux.components)
    branch: dict = {}
    for v, name in image.items():
        branch.setdefault(name, set()).add(v)
    return gp, {k: frozenset(s) for k, s in branch.items()}


@dataclass
class SynthesisConfig:
    ell: int = 2
    params: Parameters | None = None
    thin_cap: int = DEFAULT_CAP
    treewidth_cap: int = TREEWIDTH_CAP
    precheck: bool = True
    node_limit: int = 500_000
    timeout: float | None = 30.0


@dataclass
class PieceReport:
    vertices: int
    treewidth: int | None = None
    bounds: object = None
    constructive_alpha: int | None = None
    auxiliary_edges: int = 0


@dataclass
class SynthesisResult:
    status: str
    decomposition: TreeCutDecomposition | None = None
    certificate: WidthCertificate | None = None
    alpha: int | None = None
    closed_form: dict = field(default_factory=dict)
    embedding: ImmersionEmbedding | None = None
    route: str = ""
    pieces: list = field(default_factory=list)
    trace: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# wall harvests; each returns an embedding of the wall in the piece

def _wall_in_spider(ell: int) -> tuple[Multigraph, ImmersionEmbedding]:
    wall = build_wall(ell).graph
    return wall, embed_in_spider(wall, 3, 2 * ell * ell)


def wall_from_spider(ell: int, spider_emb: ImmersionEmbedding, host: Multigraph) -> ImmersionEmbedding:
    wall, inner = _wall_in_spider(ell)
    emb = compose(inner, spider_emb, spider(3, 2 * ell * ell))
    _require(wall, host, emb, "spider route")
    return emb


def wall_from_apex_path(ell: int, apex_emb: ImmersionEmbedding, host: Multigraph) -> ImmersionEmbedding:
    k = 2 * ell * ell
    wall, w_in_s = _wall_in_spider(ell)
    pv, sub = apex_to_spider_subdivision(k)
    w_in_pv = compose(w_in_s, sub.as_embedding(), spider(3, k))
    emb = compose(w_in_pv, apex_emb, pv)
    _require(wall, host, emb, "apex-path route")
    return emb


def _require(pattern, host, emb, what):
    problems = check_embedding(pattern, host, emb)
    if problems:
        raise AssertionError(f"{what} produced an invalid embedding: {problems[:3]}")


def harvest_heavy_vertex(h: Multigraph, aux: AuxiliaryGraph, ell: int) -> ImmersionEmbedding | None:
    """A vertex with ``2 l^2`` heavy neighbours carries ``S_{3, 2 l^2}``."""
    k = 2 * ell * ell
    for v in aux.graph.sorted_vertices():
        nb = vsorted(aux.graph.neighbours(v))
        if len(nb) >= k:
            branch = {HUB: v, **{j + 1: y for j, y in enumerate(nb[:k])}}
            paths = {(HUB, j + 1, c): [v, y] for j, y in enumerate(nb[:k]) for c in range(3)}
            return wall_from_spider(ell, ImmersionEmbedding(branch, paths), h)
    return None


def harvest_star_minor(h: Multigraph, aux: AuxiliaryGraph, ell: int, w: StarMinorWitness) -> ImmersionEmbedding:
    """Route ``S_{3, 2 l^2}`` along a star minor of ``A``: three copies of a
    tree path inside the centre set, then the edge to the leaf."""
    k = 2 * ell * ell
    hub = min(w.centre, key=vkey)
    inner = aux.graph.subgraph(w.centre)
    branch = {HUB: hub}
    paths = {}
    for j, y in enumerate(w.leaves[:k]):
        x = min((c for c in w.centre if aux.graph.mult(c, y)), key=vkey)
        route = bfs_path(inner, hub, x) + [y]
        branch[j + 1] = y
        for c in range(3):
            paths[(HUB, j + 1, c)] = list(route)
    return wall_from_spider(ell, ImmersionEmbedding(branch, paths), h)


def _apex_embedding(n: int, teeth: list, links: list, spokes: list, apex) -> ImmersionEmbedding:
    """``P_n * v`` given the teeth in path order, the host path between
    consecutive teeth and the host path from each tooth to the apex."""
    branch = {i: t for i, t in enumerate(teeth)}
    branch[APEX] = apex
    paths = {}
    for u, v, c in edge_keys(apex_path(n)):
        if v == APEX:
            paths[(u, v, c)] = list(spokes[u])
        else:
            paths[(u, v, c)] = list(links[u])
    return ImmersionEmbedding(branch, paths)


def harvest_apex_on_path(h: Multigraph, ell: int, path: list) -> ImmersionEmbedding | None:
    """A vertex off ``path`` adjacent to ``6 l^2`` of its vertices."""
    need = 6 * ell * ell
    on = set(path)
    for x in h.sorted_vertices():
        if x in on:
            continue
        hits = [i for i, y in enumerate(path) if h.mult(x, y)]
        if len(hits) >= need:
            hits = hits[:need]
            teeth = [path[i] for i in hits]
            links = [path[hits[i]: hits[i + 1] + 1] for i in range(need - 1)]
            spokes = [[t, x] for t in teeth]
            emb = _apex_embedding(need - 1, teeth, links, spokes, x)
            return wall_from_apex_path(ell, emb, h)
    return None


def harvest_comb(h: Multigraph, aux: AuxiliaryGraph, ell: int, c: frozenset, c2: frozenset,
                 budget: int = 200_000) -> ImmersionEmbedding | None:
    """A comb of ``A[C]`` with ``6 l^2`` teeth adjacent to ``C'``, closed up by
    heavy paths inside ``C'`` to one apex."""
    need = 6 * ell * ell
    u = {x for x in c if any(h.mult(x, y) for y in c2)}
    if len(u) < need:
        return None
    sub = aux.graph.subgraph(c)
    w = find_star_or_comb(sub, u, 2 * ell * ell, need, budget=budget)
    if w is None or not hasattr(w, "spine"):
        return None
    legs = w.legs[:need]
    pos = {v: i for i, v in enumerate(w.spine)}
    legs.sort(key=lambda leg: pos[leg[0]])
    teeth = [leg[-1] for leg in legs]
    # legs are disjoint, so consecutive attachment points are distinct
    links = [a[::-1] + w.spine[pos[a[0]] + 1: pos[b[0]]] + b for a, b in zip(legs, legs[1:])]
    apex = min(c2, key=vkey)
    inner = aux.graph.subgraph(c2)
    spokes = []
    for t in teeth:
        y = min((z for z in c2 if h.mult(t, z)), key=vkey)
        spokes.append([t] + bfs_path(inner, y, apex))
    emb = _apex_embedding(need - 1, teeth, links, spokes, apex)
    return wall_from_apex_path(ell, emb, h)


# ---------------------------------------------------------------------------
# the decomposition branch

def _covers(aux: AuxiliaryGraph, ell: int) -> dict:
    """Star-minor witness or path cover for every component of ``A``."""
    out = {}
    for comp in aux.components:
        sub = aux.graph.subgraph(comp)
        try:
            out[comp] = linear_forest_cover(sub, 2 * ell * ell)
        except ValueError as exc:
            raise Inconclusive(str(exc)) from None
    return out


def constructive_alpha(h: Multigraph, d: TreeCutDecomposition, t, covers: dict, branch: dict) -> int:
    """Width of the explicit enumeration: delete the cover vertices, then list
    each component's paths in order, component by least vertex, and the
    peripheral vertices last."""
    tor = torso(h, d, t, check=False)
    core = tor.core
    comps = [c for c in covers if c <= core]
    x = set()
    for c in comps:
        x |= covers[c].x
    order = []
    for name in vsorted(n for n in branch if branch[n] <= core):
        cover = covers[branch[name]]
        for p in cover.paths:
            order.extend(p)
    order.extend(vsorted(tor.peripheral))
    rest = tor.graph.remove_vertices(x)
    jumps = jump_profile(rest, order)
    nbrs = max((tor.graph.num_neighbours(v) for v in x), default=0)
    return max(len(x), nbrs, max(jumps, default=0))


def _decompose_piece(h: Multigraph, cfg: SynthesisConfig, trace: list):
    """Returns ``("wall", embedding, route)`` or ``("tcd", decomposition, report)``."""
    ell = cfg.ell
    rep = PieceReport(len(h))
    if len(h) <= 1:
        return "tcd", TreeCutDecomposition.trivial(h), rep
    aux = build_auxiliary(h, ell)
    rep.auxiliary_edges = aux.graph.num_edges()
    trace.append(f"piece on {len(h)} vertices: A has {rep.auxiliary_edges} edges, max degree {aux.max_degree}")
    emb = harvest_heavy_vertex(h, aux, ell)
    if emb is not None:
        return "wall", emb, "heavy vertex in A"
    covers = _covers(aux, ell)
    for comp, cov in covers.items():
        if isinstance(cov, StarMinorWitness):
            return "wall", harvest_star_minor(h, aux, ell, cov), "star minor in A"
    for comp, cov in covers.items():
        for p in cov.paths:
            emb = harvest_apex_on_path(h, ell, p)
            if emb is not None:
                return "wall", emb, "apex over a path of A"
    for c in aux.components:
        for c2 in aux.components:
            if c != c2:
                try:
                    emb = harvest_comb(h, aux, ell, c, c2)
                except RuntimeError as exc:
                    raise Inconclusive(str(exc)) from None
                if emb is not None:
                    return "wall", emb, "comb between components of A"
    gp, branch = contract_auxiliary(h, aux)
    try:
        tw, td = exact_treewidth(gp, cfg.treewidth_cap)
    except ValueError as exc:
        raise Inconclusive(str(exc)) from None
    dp, bounds = td_to_tcd(gp, td)
    rep.treewidth, rep.bounds = tw, bounds
    trace.append(f"contracted to {len(gp)} vertices, tree-width {tw}, adhesion {bounds.adhesion} "
                 f"<= {bounds.adhesion_bound}, torso {bounds.torso_order} <= {bounds.torso_bound}")
    parts = {t: frozenset().union(*(branch[v] for v in p)) if p else frozenset() for t, p in dp.parts.items()}
    d = TreeCutDecomposition(dp.tree, parts)
    problems = validate(h, d)
    if problems:
        raise AssertionError(f"expanded decomposition is invalid: {problems}")
    for t in d.nodes:
        tor = torso(h, d, t, check=False)
        if three_centre(tor.graph, tor.core).graph != tor.graph:
            raise AssertionError(f"torso at {t!r} differs from its 3-centre in a 3-edge-connected piece")
    rep.constructive_alpha = max(
        [adhesion(h, d)[0]] + [constructive_alpha(h, d, t, covers, branch) for t in d.nodes])
    return "tcd", d, rep


def instance_alpha(g: Multigraph, d: TreeCutDecomposition, cap: int = DEFAULT_CAP) -> int:
    """Least alpha for which ``d`` certifies: adhesion, and the minimal
    almost-thinness parameter of every 3-centre."""
    best = adhesion(g, d)[0]
    for t in d.nodes:
        core = reduced_torso(torso(g, d, t, check=False), "3-centre")
        best = max(best, min_almost_thinness(core, cap)[0])
    return best


def synthesize(g: Multigraph, ell: int = 2, params: Parameters | None = None,
               config: SynthesisConfig | None = None) -> SynthesisResult:
    cfg = config or SynthesisConfig(ell=ell, params=params)
    cfg.ell = ell
    if params is not None:
        cfg.params = params
    if ell < 2:
        raise ValueError("wall size must be at least 2")
    trace: list = []
    closed = (cfg.params or Parameters(ell)).report()
    wall = build_wall(ell).graph
    start = time.monotonic()
    if cfg.precheck:
        res = find_immersion(wall, g, node_limit=cfg.node_limit, timeout=cfg.timeout,
                             max_pattern=max(16, len(wall)))
        trace.append(f"direct immersion check: {res.status} ({res.reason})")
        if res.present:
            return SynthesisResult(WALL, embedding=res.embedding, route="direct search",
                                   closed_form=closed, trace=trace)
    tree = split_3ec(g)
    trace.append(f"split into {len(tree.pieces)} piece(s)")
    decomps, reports = {}, []
    try:
        for piece in tree.pieces:
            kind, obj, info = _decompose_piece(piece.graph, cfg, trace)
            if kind == "wall":
                emb = lift_embedding(tree, piece, obj, wall)
                trace.append(f"wall harvested via {info}")
                return SynthesisResult(WALL, embedding=emb, route=info, closed_form=closed, trace=trace)
            decomps[id(piece)] = obj
            reports.append(info)
        d = lift_decomposition(tree, decomps)
        problems = validate(g, d)
        if problems:
            raise AssertionError(f"lifted decomposition is invalid: {problems}")
        alpha = instance_alpha(g, d, cfg.thin_cap)
        cert = certify_width(g, d, alpha, cap=cfg.thin_cap)
    except (Inconclusive, CapExceeded) as exc:
        trace.append(f"stopped: {exc}")
        return SynthesisResult(INCONCLUSIVE, closed_form=closed, pieces=reports, trace=trace)
    if not isinstance(cert, WidthCertificate):
        raise AssertionError(f"certification failed at the instance alpha: {cert}")
    trace.append(f"certified at alpha = {alpha} in {time.monotonic() - start:.2f}s")
    return SynthesisResult(CERTIFICATE, d, cert, alpha, closed, pieces=reports, trace=trace)
