"""Classical brute-force ground truth for K-colouring."""

from __future__ import annotations

from collections.abc import Callable, Iterator

from .graph import ColoringSequence, Graph

__all__ = [
    "BudgetExceeded",
    "ENUMERATION_BUDGET",
    "CHROMATIC_MAX_NODES",
    "chromatic_number",
    "count_valid",
    "enumerate_valid",
    "has_coloring",
    "mixed_radix_index",
]

ENUMERATION_BUDGET = 10**7
CHROMATIC_MAX_NODES = 16


class BudgetExceeded(ValueError):
    pass


def _search_order(g: Graph) -> list[int]:
    return sorted(g.nodes, key=lambda v: (-g.degree(v), v))


def _backtrack(
    g: Graph,
    K: int,
    allowed: Callable[[int, int], bool] | None = None,
) -> Iterator[list[int]]:
    """Yield colour arrays (``colors[v]`` in ``1..K``) for every valid colouring.

    ``allowed(v, c)`` optionally restricts the colours of individual nodes.
    The yielded list is reused between solutions.
    """
    order = _search_order(g)
    colors = [0] * g.node_count
    adj = g.adjacency

    def rec(i: int) -> Iterator[list[int]]:
        if i == len(order):
            yield colors
            return
        v = order[i]
        used = {colors[w] for w in adj[v]}
        for c in range(1, K + 1):
            if c in used or (allowed is not None and not allowed(v, c)):
                continue
            colors[v] = c
            yield from rec(i + 1)
        colors[v] = 0

    yield from rec(0)


def mixed_radix_index(colors: list[int], K: int) -> int:
    idx = 0
    for c in reversed(colors):
        idx = idx * K + (c - 1)
    return idx


def _check_budget(g: Graph, K: int) -> None:
    if K**g.node_count > ENUMERATION_BUDGET:
        raise BudgetExceeded(
            f"K^N = {K}^{g.node_count} exceeds the enumeration budget {ENUMERATION_BUDGET}"
        )


def enumerate_valid(
    g: Graph,
    K: int,
    allowed: Callable[[int, int], bool] | None = None,
) -> list[ColoringSequence]:
    """All valid K-colourings in mixed-radix index order (node 0 least significant)."""
    _check_budget(g, K)
    found = [tuple(c) for c in _backtrack(g, K, allowed)]
    found.sort(key=lambda c: mixed_radix_index(list(c), K))
    order = tuple(g.nodes)
    return [ColoringSequence(c, K, order) for c in found]


def count_valid(g: Graph, K: int) -> int:
    _check_budget(g, K)
    return sum(1 for _ in _backtrack(g, K))


def has_coloring(g: Graph, K: int) -> bool:
    return next(_backtrack(g, K), None) is not None


def _greedy_clique_size(g: Graph) -> int:
    best = 1
    for start in g.nodes:
        clique = [start]
        for v in _search_order(g):
            if v != start and all(g.has_edge(v, u) for u in clique):
                clique.append(v)
        best = max(best, len(clique))
    return best


def chromatic_number(g: Graph) -> int:
    if g.node_count > CHROMATIC_MAX_NODES:
        raise BudgetExceeded(
            f"chromatic number limited to {CHROMATIC_MAX_NODES} nodes, got {g.node_count}"
        )
    k = _greedy_clique_size(g)
    while not has_coloring(g, k):
        k += 1
    return k
