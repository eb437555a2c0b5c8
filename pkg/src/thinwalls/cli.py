"""Command line entry point.

Exit codes: 0 affirmative verdict or success, 1 negative verdict (absent,
violation, wall found instead of a decomposition), 2 inconclusive (cap,
budget or timeout), 3 input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .immersion import ABSENT, PRESENT, find_immersion
from .multigraph import Multigraph, vlabel, vsorted
from .thinness import (CapExceeded, ThinOrdering, is_almost_alpha_thin, is_alpha_thin, min_almost_thinness,
                       min_thinness, search_space_size)
from .treecut import MODES, TreeCutDecomposition, WidthCertificate, certify_width, validate
from .walls import Wall, build_wall, certify_three_connected_pairs, certify_well_linked, well_linked_set

OK, NEGATIVE, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialisation

def graph_to_json(g: Multigraph) -> dict:
    """Vertices as sorted labels; edges ``[u, v, m]`` with ``u < v`` as strings."""
    label = {v: vlabel(v) for v in g.vertices}
    if len(set(label.values())) != len(label):
        raise ValueError("vertex labels collide")
    edges = []
    for u, v, m in g.edges():
        a, b = sorted((label[u], label[v]))
        edges.append([a, b, m])
    return {"vertices": sorted(label.values()), "edges": sorted(edges)}


def graph_from_json(data) -> Multigraph:
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise InputError('graph JSON needs "vertices" and "edges"')
    vs = data["vertices"]
    if not all(isinstance(v, str) for v in vs):
        raise InputError("vertex labels must be strings")
    edges = []
    for e in data["edges"]:
        if not (isinstance(e, list) and len(e) in (2, 3)):
            raise InputError(f"malformed edge {e!r}")
        u, v, m = (e + [1])[:3]
        if u not in vs or v not in vs:
            raise InputError(f"edge {e!r} uses an unknown vertex")
        if not isinstance(m, int) or m < 1:
            raise InputError(f"edge {e!r} has a bad multiplicity")
        edges.append((u, v, m))
    try:
        return Multigraph(vs, edges)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def graph_to_dot(g: Multigraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in g.sorted_vertices():
        lines.append(f'  "{vlabel(v)}";')
    for u, v, m in g.edges():
        attr = f' [label="{m}"]' if m > 1 else ""
        lines.append(f'  "{vlabel(u)}" -- "{vlabel(v)}"{attr};')
    lines.append("}")
    return "\n".join(lines)


def tcd_to_dot(d: TreeCutDecomposition) -> str:
    lines = ["graph T {"]
    for t in d.nodes:
        part = ", ".join(vlabel(v) for v in vsorted(d.parts[t]))
        lines.append(f'  "{vlabel(t)}" [label="{vlabel(t)}: {{{part}}}"];')
    for a, b in d.tree:
        lines.append(f'  "{vlabel(a)}" -- "{vlabel(b)}";')
    lines.append("}")
    return "\n".join(lines)


def ordering_to_json(o: ThinOrdering) -> dict:
    return {"alpha": o.alpha, "order": [vlabel(v) for v in o.order], "jumps": list(o.jump_profile)}


def certificate_to_json(c: WidthCertificate) -> dict:
    return {
        "alpha": c.alpha,
        "mode": c.mode,
        "adhesions": [[vlabel(a), vlabel(b), s] for (a, b), s in sorted(c.adhesions.items(),
                                                                        key=lambda kv: vlabel(kv[0]))],
        "torsos": {vlabel(t): {"deleted": sorted(vlabel(v) for v in w.deleted),
                               "order": [vlabel(v) for v in w.ordering.order]}
                   for t, w in c.witnesses.items()},
    }


def _load_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_graph(path: str) -> Multigraph:
    return graph_from_json(_load_json(path))


def _load_tcd(path: str, g: Multigraph) -> TreeCutDecomposition:
    data = _load_json(path)
    if not isinstance(data, dict) or "tree" not in data or "parts" not in data:
        raise InputError('decomposition JSON needs "tree" and "parts"')
    return TreeCutDecomposition.from_json(data)


def _emit(args, payload: dict, dot: str | None = None, out: str | None = None) -> None:
    text = dot if (args.dot and dot is not None) else json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands

def cmd_gen_wall(args) -> int:
    w = build_wall(args.ell)
    g = w.graph.relabel({v: vlabel(v) for v in w.graph.vertices})
    _emit(args, graph_to_json(g), graph_to_dot(g, f"W{args.ell}"), args.out)
    return OK


def _wall_from_json(g: Multigraph) -> Wall:
    """Read back a wall written by gen-wall: labels ``"i,j"`` become (i, j)."""
    try:
        coords = {v: tuple(int(x) for x in v.split(",")) for v in g.vertices}
    except ValueError:
        raise InputError("wall vertices must be labelled 'column,row'") from None
    if any(len(c) != 2 for c in coords.values()):
        raise InputError("wall vertices must be labelled 'column,row'")
    h = g.relabel(coords)
    ell = max((c[1] for c in coords.values()), default=1)
    if h != build_wall(ell).graph:
        raise InputError(f"input is not the wall of size {ell}")
    return Wall(ell, h)


def cmd_certify_wall(args) -> int:
    if (args.ell is None) == (args.input is None):
        raise InputError("give exactly one of --ell and --in")
    w = build_wall(args.ell) if args.input is None else _wall_from_json(_load_graph(args.input))
    if w.ell < 3:
        raise InputError("the well-linked set needs a wall of size at least 3")
    z = well_linked_set(w)
    wl = certify_well_linked(w, z, exhaustive_limit=args.exhaustive_limit, samples=args.samples, seed=args.seed)
    tc = certify_three_connected_pairs(w, z)
    payload = {"ell": w.ell, "z": sorted(vlabel(v) for v in z),
               "well_linked": {"ok": wl.ok, "checked": wl.checked, "exhaustive": wl.exhaustive},
               "three_connected": {"ok": tc.ok}}
    _emit(args, payload)
    return OK if wl.ok and tc.ok else NEGATIVE


def cmd_check_thin(args) -> int:
    g = _load_graph(args.input)
    cap = args.cap
    try:
        if args.alpha is None:
            if args.almost:
                a, wit = min_almost_thinness(g, cap)
                payload = {"almost": True, "alpha": a, "deleted": sorted(wit.deleted),
                           "ordering": ordering_to_json(wit.ordering)}
            else:
                a, o = min_thinness(g, cap)
                payload = {"almost": False, "alpha": a, "ordering": ordering_to_json(o)}
            _emit(args, payload)
            return OK
        if args.almost:
            wit = is_almost_alpha_thin(g, args.alpha, cap)
            payload = {"almost": True, "alpha": args.alpha, "holds": wit is not None}
            if wit is not None:
                payload.update(deleted=sorted(wit.deleted), ordering=ordering_to_json(wit.ordering))
        else:
            o = is_alpha_thin(g, args.alpha, cap)
            payload = {"almost": False, "alpha": args.alpha, "holds": o is not None}
            if o is not None:
                payload["ordering"] = ordering_to_json(o)
        if not payload["holds"]:
            payload["status"] = "absent"
            payload["deletion_sets_searched"] = search_space_size(g, args.alpha) if args.almost else 1
    except CapExceeded as exc:
        _emit(args, {"status": "inconclusive", "reason": str(exc)})
        return INCONCLUSIVE
    _emit(args, payload)
    return OK if payload["holds"] else NEGATIVE


def cmd_check_immersion(args) -> int:
    h = _load_graph(args.pattern)
    g = _load_graph(args.host)
    res = find_immersion(h, g, args.mode, node_limit=args.node_limit, timeout=args.timeout,
                         max_pattern=args.max_pattern, max_host=args.max_host)
    payload = {"status": res.status, "reason": res.reason, "nodes": res.nodes}
    if res.embedding is not None:
        payload["branch"] = {k: res.embedding.branch[k] for k in vsorted(res.embedding.branch)}
        payload["paths"] = [[u, v, i, p] for (u, v, i), p in sorted(res.embedding.paths.items())]
    _emit(args, payload)
    return {PRESENT: OK, ABSENT: NEGATIVE}.get(res.status, INCONCLUSIVE)


def cmd_certify(args) -> int:
    g = _load_graph(args.input)
    d = _load_tcd(args.tcd, g)
    problems = validate(g, d)
    if problems:
        raise InputError("invalid decomposition: " + "; ".join(problems))
    try:
        res = certify_width(g, d, args.alpha, mode=args.mode, cap=args.cap)
    except CapExceeded as exc:
        _emit(args, {"status": "inconclusive", "reason": str(exc)})
        return INCONCLUSIVE
    if isinstance(res, WidthCertificate):
        _emit(args, {"status": "certified", "certificate": certificate_to_json(res)})
        return OK
    _emit(args, {"status": "violation", "kind": res.kind, "locus": vlabel(res.locus) if res.kind == "torso"
                 else [vlabel(x) for x in res.locus], "detail": str(res)})
    return NEGATIVE


def cmd_decompose(args) -> int:
    from .synthesis.parameters import Parameters
    from .synthesis.pipeline import CERTIFICATE, WALL, SynthesisConfig, synthesize
    g = _load_graph(args.input)
    params = Parameters.from_json(args.ell, _load_json(args.params)) if args.params else Parameters(args.ell)
    cfg = SynthesisConfig(ell=args.ell, params=params, thin_cap=args.cap)
    res = synthesize(g, args.ell, params, cfg)
    payload = {"status": res.status, "trace": res.trace, "closed_form": res.closed_form}
    if res.status == CERTIFICATE:
        payload["alpha"] = res.alpha
        payload["decomposition"] = res.decomposition.to_json()
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(res.decomposition.to_json(), fh, indent=2, sort_keys=True)
        if args.cert:
            with open(args.cert, "w") as fh:
                json.dump(certificate_to_json(res.certificate), fh, indent=2, sort_keys=True)
        _emit(args, payload, tcd_to_dot(res.decomposition))
        return OK
    if res.status == WALL:
        payload["route"] = res.route
        payload["branch"] = {vlabel(k): res.embedding.branch[k] for k in vsorted(res.embedding.branch)}
        _emit(args, payload)
        return NEGATIVE
    _emit(args, payload)
    return INCONCLUSIVE


def cmd_corpus(args) -> int:
    from .corpus import run_all
    try:
        report = run_all(args.only)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    return OK if all(r["ok"] for r in report.values()) else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thinwalls", description="Walls, thinness and tree-cut decompositions.")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    p.add_argument("--cap", type=int, default=20, help="vertex cap for exact thinness search")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--dot", action="store_true", help="DOT output where available")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-wall", help="build the wall W_ell (2 ell^2 - 2 vertices, max degree 3)")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen_wall)

    s = sub.add_parser("certify-wall", help="check the canonical well-linked set of the top row")
    s.add_argument("--ell", type=int)
    s.add_argument("--in", dest="input", help="wall JSON written by gen-wall")
    s.add_argument("--exhaustive-limit", type=int, default=8)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_certify_wall)

    s = sub.add_parser("check-thin", help="decide (almost) alpha-thinness, or compute the least alpha")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--alpha", type=int)
    s.add_argument("--almost", action="store_true")
    s.set_defaults(func=cmd_check_thin)

    s = sub.add_parser("check-immersion", help="exact strong or weak immersion test")
    s.add_argument("--pattern", required=True)
    s.add_argument("--host", required=True)
    s.add_argument("--mode", choices=("strong", "weak"), default="strong")
    s.add_argument("--node-limit", type=int, default=2_000_000)
    s.add_argument("--timeout", type=float)
    s.add_argument("--max-pattern", type=int, default=16)
    s.add_argument("--max-host", type=int, default=40)
    s.set_defaults(func=cmd_check_immersion)

    s = sub.add_parser("certify", help="check adhesion and almost-thin reduced torsos of a decomposition")
    s.add_argument("--in", "--graph", dest="input", required=True)
    s.add_argument("--tcd", required=True)
    s.add_argument("--alpha", type=int, required=True)
    s.add_argument("--mode", choices=MODES, default="3-centre")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("decompose", help="certified decomposition or a wall immersion")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--params", help="JSON with g/w/h constants or lookup tables")
    s.add_argument("--out", help="write the decomposition here")
    s.add_argument("--cert", help="write the width certificate here")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("corpus", help="regression fixtures")
    cs = s.add_subparsers(dest="action", required=True)
    r = cs.add_parser("run", help="run every fixture verdict and print a JSON report")
    r.add_argument("--only", help="run a single fixture family")
    r.set_defaults(func=cmd_corpus)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else INPUT_ERROR
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
