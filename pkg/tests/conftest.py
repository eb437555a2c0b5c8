import random

from hypothesis import settings, strategies as st

from thinwalls.multigraph import Multigraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def multigraphs(draw, min_n=1, max_n=7, max_mult=3, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mults = draw(st.lists(st.integers(0, max_mult), min_size=len(pairs), max_size=len(pairs)))
    edges = {p: m for p, m in zip(pairs, mults) if m}
    if connected:
        for v in range(1, n):
            u = draw(st.integers(0, v - 1))
            edges.setdefault((u, v), 1)
    return Multigraph(range(n), [(u, v, m) for (u, v), m in edges.items()])


def random_multigraph(rng: random.Random, n: int, p: float = 0.4, max_mult: int = 3,
                      connected: bool = False) -> Multigraph:
    edges = {}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges[(u, v)] = rng.randint(1, max_mult)
    if connected:
        for v in range(1, n):
            edges.setdefault((rng.randrange(v), v), rng.randint(1, max_mult))
    return Multigraph(range(n), [(u, v, m) for (u, v), m in edges.items()])


def to_nx(g: Multigraph):
    import networkx as nx
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    for u, v, m in g.edges():
        h.add_edge(u, v, weight=m, capacity=m)
    return h


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
