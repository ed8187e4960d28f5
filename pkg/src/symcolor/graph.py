"""Undirected simple graphs, colourings and DIMACS ``.col`` I/O.

Nodes are dense integers ``0..N-1``. Edges are stored as sorted ``(u, v)``
pairs with ``u < v``; the position of an edge in :attr:`Graph.edges` is its
edge index (the ancilla layout in :mod:`symcolor.qsim` depends on it).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "ColoringSequence",
    "DimacsError",
    "Graph",
    "GraphError",
    "NodeMap",
    "build_graph",
    "connected_components",
    "induced_subgraph",
    "is_valid_coloring",
    "parse_dimacs",
    "serialize_dimacs",
]


class GraphError(ValueError):
    """Invalid graph construction or graph operation."""


class DimacsError(GraphError):
    """Malformed DIMACS input."""


Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise GraphError("a graph needs at least one node")
        if self.labels is not None and len(self.labels) != self.node_count:
            raise GraphError("labels must name every node")

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in self.nodes]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def _edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def id(self, label: str) -> int:
        """Node id carrying display name ``label``."""
        if self.labels is None:
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def ids(self, labels: Iterable[str]) -> list[int]:
        return [self.id(x) for x in labels]

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1


def build_graph(
    node_count: int,
    edges: Iterable[Sequence[int]],
    labels: Sequence[str] | None = None,
) -> Graph:
    """Normalise an edge list into a :class:`Graph`.

    Duplicate edges are dropped silently; self-loops and out-of-range
    endpoints raise :class:`GraphError`.
    """
    if node_count < 1:
        raise GraphError("a graph needs at least one node")
    canon = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{node_count - 1}")
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        canon.add((min(u, v), max(u, v)))
    return Graph(node_count, tuple(sorted(canon)), tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class ColoringSequence:
    """Colours ``1..K`` listed against ``node_order``."""

    colors: tuple[int, ...]
    K: int
    node_order: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.colors) != len(self.node_order):
            raise GraphError("colour list and node order differ in length")
        if len(set(self.node_order)) != len(self.node_order):
            raise GraphError("node listed twice in a colouring")
        for c in self.colors:
            if not 1 <= c <= self.K:
                raise GraphError(f"colour {c} outside 1..{self.K}")

    @classmethod
    def from_mapping(cls, colors: Mapping[int, int], K: int) -> ColoringSequence:
        order = tuple(sorted(colors))
        return cls(tuple(colors[v] for v in order), K, order)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.node_order, self.colors))

    def color_of(self, v: int) -> int:
        return self.colors[self.node_order.index(v)]

    def sorted(self) -> ColoringSequence:
        return ColoringSequence.from_mapping(self.as_dict(), self.K)

    def with_K(self, K: int) -> ColoringSequence:
        return ColoringSequence(self.colors, K, self.node_order)

    def __len__(self) -> int:
        return len(self.colors)


@dataclass(frozen=True)
class NodeMap:
    """``parent[i]`` is the parent-graph id of daughter node ``i``."""

    parent: tuple[int, ...]
    _inverse: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        inv = {p: i for i, p in enumerate(self.parent)}
        if len(inv) != len(self.parent):
            raise GraphError("node map is not injective")
        object.__setattr__(self, "_inverse", inv)

    def to_parent(self, v: int) -> int:
        return self.parent[v]

    def to_daughter(self, p: int) -> int:
        return self._inverse[p]

    def __contains__(self, p: int) -> bool:
        return p in self._inverse

    def __len__(self) -> int:
        return len(self.parent)

    def lift(self, s: ColoringSequence) -> ColoringSequence:
        """Re-express a daughter colouring in parent ids."""
        return ColoringSequence(s.colors, s.K, tuple(self.parent[v] for v in s.node_order))


def is_valid_coloring(g: Graph, s: ColoringSequence) -> bool:
    if sorted(s.node_order) != list(g.nodes):
        raise GraphError(
            f"colouring covers {len(s)} nodes, graph has {g.node_count}"
        )
    col = s.as_dict()
    if any(not 1 <= c <= s.K for c in s.colors):
        return False
    return all(col[u] != col[v] for u, v in g.edges)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, NodeMap]:
    kept = sorted(set(keep))
    if not kept:
        raise GraphError("cannot take the subgraph on an empty node set")
    if kept[0] < 0 or kept[-1] >= g.node_count:
        raise GraphError("subgraph node set is not a subset of the graph's nodes")
    index = {p: i for i, p in enumerate(kept)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = [g.labels[p] for p in kept] if g.labels is not None else [str(p) for p in kept]
    return build_graph(len(kept), edges, labels), NodeMap(tuple(kept))


def connected_components(
    g: Graph,
    removed_nodes: Iterable[int] = (),
    removed_edges: Iterable[Edge] = (),
) -> list[frozenset[int]]:
    """Components of ``g`` minus the given nodes and edges, ordered by smallest member."""
    gone = set(removed_nodes)
    cut = {(min(u, v), max(u, v)) for u, v in removed_edges}
    seen: set[int] = set()
    comps = []
    for start in g.nodes:
        if start in gone or start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w in gone or w in comp or (min(u, w), max(u, w)) in cut:
                    continue
                comp.add(w)
                stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def parse_dimacs(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if n < 1:
                raise DimacsError(f"line {lineno}: node count must be positive")
        elif parts[0] == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge before the problem line")
            if len(parts) != 3:
                raise DimacsError(f"line {lineno}: malformed edge {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed edge {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"line {lineno}: node index out of range 1..{n}")
            if u == v:
                raise DimacsError(f"line {lineno}: self-loop at node {u}")
            edges.append((u - 1, v - 1))
        else:
            raise DimacsError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise DimacsError("missing problem line")
    return build_graph(n, edges)


def serialize_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.node_count} {g.edge_count}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
