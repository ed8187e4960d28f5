"""Detection and classification of reducing cuts.

A symmetric axis is an involutive automorphism whose fixed nodes and
crossed edges ``{u, sigma(u)}`` separate the graph into two halves that the
involution exchanges. Cut vertices and bridges give the non-symmetric
node and edge cuts.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from . import estimator
from .graph import Edge, Graph, GraphError, connected_components

__all__ = [
    "ALL_KINDS",
    "Axis",
    "DisconnectedGraphError",
    "Involution",
    "ReductionPolicy",
    "axis_score",
    "axis_through",
    "classify_axis",
    "enumerate_axes",
    "find_bridges",
    "find_cut_vertices",
    "find_involutions",
    "is_admissible",
    "select_axis",
]

ALL_KINDS = frozenset({"1.a", "2.a", "3.a", "1.b", "2.b"})


class DisconnectedGraphError(GraphError):
    pass


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise DisconnectedGraphError("graph is disconnected; reduce each component separately")


@dataclass(frozen=True)
class Involution:
    sigma: tuple[int, ...]

    @property
    def fixed(self) -> frozenset[int]:
        return frozenset(v for v, w in enumerate(self.sigma) if v == w)

    def __call__(self, v: int) -> int:
        return self.sigma[v]

    def is_automorphism_of(self, g: Graph) -> bool:
        if len(self.sigma) != g.node_count or sorted(self.sigma) != list(g.nodes):
            return False
        return all(g.has_edge(self.sigma[u], self.sigma[v]) for u, v in g.edges)

    def is_involution(self) -> bool:
        s = self.sigma
        return all(s[s[v]] == v for v in range(len(s))) and any(s[v] != v for v in range(len(s)))


@dataclass(frozen=True)
class Axis:
    """A classified cut of a graph.

    For node cuts (1.a, 3.a, 1.b) both sides contain ``fixed_nodes``.
    ``critical_pairs`` lists ``(c_i, c_j)`` with ``c_i`` in ``side1`` and
    ``c_j`` in ``side2``, one pair per crossed edge.
    """

    kind: str
    fixed_nodes: frozenset[int]
    crossed_edges: tuple[Edge, ...]
    side1: frozenset[int]
    side2: frozenset[int]
    critical_pairs: tuple[tuple[int, int], ...]
    involution: Involution | None = None

    @property
    def m(self) -> int:
        return len(self.fixed_nodes)

    @property
    def p(self) -> int:
        return len(self.crossed_edges)

    @property
    def n1(self) -> int:
        return len(self.side1)

    @property
    def n2(self) -> int:
        return len(self.side2)

    @property
    def symmetric(self) -> bool:
        return self.involution is not None

    def flipped(self) -> Axis:
        """The same cut with the two sides exchanged."""
        return Axis(
            self.kind,
            self.fixed_nodes,
            self.crossed_edges,
            self.side2,
            self.side1,
            tuple((b, a) for a, b in self.critical_pairs),
            self.involution,
        )

    def sort_key(self) -> tuple:
        return (
            self.kind,
            tuple(sorted(self.fixed_nodes)),
            self.crossed_edges,
            tuple(sorted(self.side1)),
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "p": self.p,
            "fixed_nodes": sorted(self.fixed_nodes),
            "crossed_edges": [list(e) for e in self.crossed_edges],
            "side1": sorted(self.side1),
            "side2": sorted(self.side2),
            "critical_pairs": [list(c) for c in self.critical_pairs],
            "involution": list(self.involution.sigma) if self.involution else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Axis:
        return cls(
            d["kind"],
            frozenset(d["fixed_nodes"]),
            tuple(tuple(e) for e in d["crossed_edges"]),
            frozenset(d["side1"]),
            frozenset(d["side2"]),
            tuple(tuple(c) for c in d["critical_pairs"]),
            Involution(tuple(d["involution"])) if d["involution"] is not None else None,
        )


def _refine(g: Graph) -> list[int]:
    """Stable colour refinement; automorphisms preserve the resulting classes."""
    colors = [g.degree(v) for v in g.nodes]
    while True:
        sigs = [(colors[v], tuple(sorted(Counter(colors[w] for w in g.adjacency[v]).items()))) for v in g.nodes]
        relabel = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [relabel[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def find_involutions(g: Graph) -> list[Involution]:
    """Every non-identity involutive automorphism, in lexicographic order of images."""
    n = g.node_count
    cls = _refine(g)
    adj = g.adjacency
    sigma = [-1] * n
    out: list[Involution] = []

    def consistent(v: int) -> bool:
        img = sigma[v]
        for a in range(n):
            if sigma[a] < 0:
                continue
            if (a in adj[v]) != (sigma[a] in adj[img]):
                return False
        return True

    def rec(i: int) -> None:
        while i < n and sigma[i] >= 0:
            i += 1
        if i == n:
            if any(sigma[v] != v for v in range(n)):
                out.append(Involution(tuple(sigma)))
            return
        for j in range(i, n):
            if sigma[j] >= 0 or cls[j] != cls[i]:
                continue
            sigma[i], sigma[j] = j, i
            if consistent(i) and (j == i or consistent(j)):
                rec(i + 1)
            sigma[i] = sigma[j] = -1

    rec(0)
    return out


def classify_axis(g: Graph, inv: Involution) -> Axis | None:
    """Turn an involution into an :class:`Axis`, or ``None`` if it does not separate ``g``."""
    s = inv.sigma
    fixed = inv.fixed
    crossed = tuple(sorted((min(u, s[u]), max(u, s[u])) for u in g.nodes if u < s[u] and g.has_edge(u, s[u])))
    m, p = len(fixed), len(crossed)
    if m == 0 and p == 0:
        return None
    comps = connected_components(g, removed_nodes=fixed, removed_edges=crossed)
    if not comps:
        return None
    half1: set[int] = set()
    half2: set[int] = set()
    seen: set[frozenset[int]] = set()
    for comp in comps:
        if comp in seen:
            continue
        image = frozenset(s[v] for v in comp)
        if image == comp:
            return None
        seen |= {comp, image}
        # The half holding the larger node id goes to side 1.
        if max(comp) > max(image):
            half1 |= comp
            half2 |= image
        else:
            half1 |= image
            half2 |= comp
    if m and p:
        kind = "3.a"
    elif m:
        kind = "1.a"
    else:
        kind = "2.a"
    side1, side2 = frozenset(half1 | fixed), frozenset(half2 | fixed)
    pairs = tuple(sorted((u, s[u]) for u in half1 if g.has_edge(u, s[u])))
    return Axis(kind, frozenset(fixed), crossed, side1, side2, pairs, inv)


def _lowlink(g: Graph) -> tuple[set[int], set[Edge]]:
    """Articulation points and bridges by iterative DFS low-link."""
    disc = [-1] * g.node_count
    low = [0] * g.node_count
    cut_vertices: set[int] = set()
    bridges: set[Edge] = set()
    timer = 0
    for root in g.nodes:
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(sorted(g.adjacency[root])))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] >= 0:
                    low[v] = min(low[v], disc[w])
                    continue
                disc[w] = low[w] = timer
                timer += 1
                if v == root:
                    root_children += 1
                stack.append((w, v, iter(sorted(g.adjacency[w]))))
                advanced = True
                break
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    bridges.add((min(parent, v), max(parent, v)))
                if parent != root and low[v] >= disc[parent]:
                    cut_vertices.add(parent)
        if root_children > 1:
            cut_vertices.add(root)
    return cut_vertices, bridges


def find_cut_vertices(g: Graph) -> list[int]:
    _require_connected(g)
    return sorted(_lowlink(g)[0])


def find_bridges(g: Graph) -> list[Edge]:
    _require_connected(g)
    return sorted(_lowlink(g)[1])


def _cut_vertex_axes(g: Graph, v: int) -> list[Axis]:
    comps = connected_components(g, removed_nodes=[v])
    everyone = frozenset(g.nodes)
    chunks = comps[:1] if len(comps) == 2 else comps
    axes = []
    for comp in chunks:
        side1 = frozenset(comp | {v})
        side2 = frozenset(everyone - comp)
        axes.append(Axis("1.b", frozenset({v}), (), side1, side2, ()))
    return axes


def _bridge_axis(g: Graph, e: Edge) -> Axis:
    u, v = e
    comps = connected_components(g, removed_edges=[e])
    side_u = next(c for c in comps if u in c)
    side_v = next(c for c in comps if v in c)
    return Axis("2.b", frozenset(), (e,), frozenset(side_u), frozenset(side_v), ((u, v),))


def enumerate_axes(g: Graph) -> list[Axis]:
    """All classified cuts: symmetric axes, then cut-vertex splits, then bridges."""
    _require_connected(g)
    axes = []
    for inv in find_involutions(g):
        ax = classify_axis(g, inv)
        if ax is not None:
            axes.append(ax)
    cut_vertices, bridges = _lowlink(g)
    for v in sorted(cut_vertices):
        axes.extend(_cut_vertex_axes(g, v))
    for e in sorted(bridges):
        axes.append(_bridge_axis(g, e))
    return axes


def axis_through(g: Graph, fixed_nodes: Iterable[int], kind: str | None = None) -> Axis:
    """The first classified axis (in :meth:`Axis.sort_key` order) with exactly these fixed nodes."""
    want = frozenset(fixed_nodes)
    hits = [ax for ax in enumerate_axes(g) if ax.fixed_nodes == want and (kind is None or ax.kind == kind)]
    if not hits:
        raise GraphError(f"no axis fixes exactly {sorted(want)}")
    return min(hits, key=Axis.sort_key)


@dataclass(frozen=True)
class ReductionPolicy:
    """Knobs for axis selection and recursive reduction.

    A cut is admissible only if each daughter keeps at least ``min_size``
    nodes and its kind is in ``kinds``.
    """

    min_size: int = 3
    max_depth: int | None = None
    kinds: frozenset[str] = field(default=ALL_KINDS)


def axis_score(g: Graph, ax: Axis) -> int:
    """Qubit-complexity saving of cutting ``g`` along ``ax``."""
    return estimator.delta_cq(ax.kind, g.node_count, m=ax.m, n1=ax.n1, n2=ax.n2)


def is_admissible(g: Graph, ax: Axis, policy: ReductionPolicy) -> bool:
    if ax.kind not in policy.kinds:
        return False
    return min(ax.n1, ax.n2) >= policy.min_size


def select_axis(
    g: Graph,
    axes: Sequence[Axis] | Iterable[Axis],
    policy: ReductionPolicy = ReductionPolicy(),
) -> Axis | None:
    """Pick the admissible axis with the largest saving, or ``None``.

    When both node-symmetric (1.a) and edge-symmetric (2.a) axes are
    admissible, the 1.a/2.a comparison rule settles which family competes.
    Ties go to the smallest ``(kind, fixed nodes, crossed edges)``.
    """
    scored = []
    for ax in axes:
        if not is_admissible(g, ax, policy):
            continue
        score = axis_score(g, ax)
        if score > 0:
            scored.append((score, ax))
    if not scored:
        return None
    kinds = {ax.kind for _, ax in scored}
    N = g.node_count
    if "1.a" in kinds and "2.a" in kinds:
        m = min(ax.m for _, ax in scored if ax.kind == "1.a")
        if m >= 2:
            loser = "2.a" if estimator.compare_techniques(N, m).technique == "1.a" else "1.a"
            scored = [(s, ax) for s, ax in scored if ax.kind != loser]
    best = max(s for s, _ in scored)
    return min((ax for s, ax in scored if s == best), key=Axis.sort_key)
