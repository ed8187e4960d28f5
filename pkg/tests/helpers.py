"""Shared builders, brute-force oracles and hypothesis strategies."""

from __future__ import annotations

import itertools
from pathlib import Path

from hypothesis import strategies as st

from symcolor.graph import Graph, build_graph, parse_dimacs

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name: str) -> Graph:
    return parse_dimacs((DATA / f"{name}.col").read_text())


def labelled(n: int, edges: list[str], labels: str) -> Graph:
    """Graph from two-letter edge names such as ``"AB"``."""
    idx = {c: i for i, c in enumerate(labels)}
    return build_graph(n, [(idx[a], idx[b]) for a, b in edges], list(labels))


def square() -> Graph:
    return labelled(4, ["AB", "BC", "CD", "DA"], "ABCD")


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return build_graph(n, list(itertools.combinations(range(n), 2)))


# ---- brute-force oracles ---------------------------------------------------


def components(n: int, edges, removed_nodes=()) -> int:
    removed = set(removed_nodes)
    adj: dict[int, set[int]] = {v: set() for v in range(n) if v not in removed}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    seen: set[int] = set()
    count = 0
    for s in adj:
        if s in seen:
            continue
        count += 1
        todo = [s]
        seen.add(s)
        while todo:
            x = todo.pop()
            for y in adj[x] - seen:
                seen.add(y)
                todo.append(y)
    return count


def brute_involutions(g: Graph) -> list[tuple[int, ...]]:
    edges = set(g.edges)
    out = []
    for perm in itertools.permutations(range(g.node_count)):
        if all(perm[perm[v]] == v for v in range(g.node_count)) and perm != tuple(range(g.node_count)):
            if all(tuple(sorted((perm[u], perm[v]))) in edges for u, v in edges):
                out.append(perm)
    return out


def brute_colorings(g: Graph, K: int) -> list[tuple[int, ...]]:
    """Valid colourings as tuples over nodes 0..N-1, in mixed-radix order."""
    out = []
    # product varies the last position fastest; reverse so node 0 is least significant
    for rev in itertools.product(range(1, K + 1), repeat=g.node_count):
        c = rev[::-1]
        if all(c[u] != c[v] for u, v in g.edges):
            out.append(c)
    return out


def brute_chromatic(g: Graph) -> int:
    K = 1
    while not brute_colorings(g, K):
        K += 1
    return K


def cq(n: int) -> int:
    # worst-case qubit complexity evaluated from its ingredients: K = n, A = n(n-1)/2
    return n * n + n * (n - 1) // 2 + 1


# ---- strategies ------------------------------------------------------------


@st.composite
def connected_graphs(draw, min_nodes: int = 1, max_nodes: int = 6) -> Graph:
    n = draw(st.integers(min_nodes, max_nodes))
    edges = set()
    for v in range(1, n):
        edges.add((draw(st.integers(0, v - 1)), v))
    pairs = list(itertools.combinations(range(n), 2))
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs)))
        edges |= set(extra)
    return build_graph(n, sorted(edges))


@st.composite
def graphs(draw, max_nodes: int = 6) -> Graph:
    n = draw(st.integers(1, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, chosen)


def planted_graph(rng, max_nodes: int = 10) -> tuple[Graph, tuple[int, ...]]:
    """A random connected graph invariant under a random involution.

    Edge orbits under the involution are switched on independently; the
    graph is redrawn until connected.
    """
    while True:
        n = int(rng.integers(2, max_nodes + 1))
        h = int(rng.integers(1, n // 2 + 1))
        nodes = list(rng.permutation(n))
        sigma = list(range(n))
        for i in range(h):
            a, b = nodes[2 * i], nodes[2 * i + 1]
            sigma[a], sigma[b] = b, a
        orbits = {}
        for u, v in itertools.combinations(range(n), 2):
            key = frozenset({(u, v), tuple(sorted((sigma[u], sigma[v])))})
            orbits[key] = None
        p = float(rng.uniform(0.2, 0.7))
        edges = [e for key in orbits if rng.random() < p for e in key]
        g = build_graph(n, edges)
        if g.is_connected():
            return g, tuple(sigma)
