"""Cutting graphs into daughter graphs, recursively."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from typing import Any

from .graph import Graph, GraphError, NodeMap, build_graph, induced_subgraph
from .symmetry import (
    Axis,
    ReductionPolicy,
    _require_connected,
    axis_score,
    enumerate_axes,
    select_axis,
)

__all__ = [
    "Link",
    "MIRROR",
    "CONSTRAINED",
    "SHARED_NODE",
    "ReductionStep",
    "ReductionTree",
    "cut",
    "cut_type_1a",
    "cut_type_1b",
    "cut_type_2a",
    "cut_type_2b",
    "cut_type_3a",
    "reduce_recursive",
    "reglue",
]

MIRROR = "solve-one-and-mirror"
CONSTRAINED = "solve-both-constrained"
SHARED_NODE = "solve-both-shared-node"


@dataclass(frozen=True)
class Link:
    """A cross-cut constraint in parent ids: ``a`` (side 1) vs. ``b`` (side 2)."""

    kind: str  # "differ" or "equal"
    a: int
    b: int


@dataclass(frozen=True)
class ReductionStep:
    axis: Axis
    daughter1: Graph
    map1: NodeMap
    daughter2: Graph
    map2: NodeMap
    solve_mode: str
    links: tuple[Link, ...]
    first: int  # daughter solved first (0 or 1)
    delta_cq: int

    @property
    def daughters(self) -> tuple[Graph, Graph]:
        return self.daughter1, self.daughter2

    @property
    def maps(self) -> tuple[NodeMap, NodeMap]:
        return self.map1, self.map2

    @property
    def common(self) -> frozenset[int]:
        return self.axis.fixed_nodes


def _check_kind(axis: Axis, kind: str) -> None:
    if axis.kind != kind:
        raise GraphError(f"expected a {kind} axis, got {axis.kind}")


def _split(g: Graph, axis: Axis) -> tuple[Graph, NodeMap, Graph, NodeMap]:
    d1, m1 = induced_subgraph(g, axis.side1)
    d2, m2 = induced_subgraph(g, axis.side2)
    return d1, m1, d2, m2


def _smaller_first(axis: Axis) -> int:
    return 1 if axis.n1 > axis.n2 else 0


def cut_type_1a(g: Graph, axis: Axis) -> ReductionStep:
    _check_kind(axis, "1.a")
    d1, m1, d2, m2 = _split(g, axis)
    return ReductionStep(axis, d1, m1, d2, m2, MIRROR, (), 0, axis_score(g, axis))


def cut_type_3a(g: Graph, axis: Axis) -> ReductionStep:
    _check_kind(axis, "3.a")
    d1, m1, d2, m2 = _split(g, axis)
    links = tuple(Link("differ", a, b) for a, b in axis.critical_pairs)
    return ReductionStep(axis, d1, m1, d2, m2, MIRROR, links, 0, axis_score(g, axis))


def cut_type_2a(g: Graph, axis: Axis) -> ReductionStep:
    _check_kind(axis, "2.a")
    d1, m1, d2, m2 = _split(g, axis)
    links = tuple(Link("differ", a, b) for a, b in axis.critical_pairs)
    return ReductionStep(axis, d1, m1, d2, m2, CONSTRAINED, links, 0, axis_score(g, axis))


def cut_type_1b(g: Graph, axis: Axis) -> ReductionStep:
    _check_kind(axis, "1.b")
    d1, m1, d2, m2 = _split(g, axis)
    (v,) = axis.fixed_nodes
    return ReductionStep(
        axis, d1, m1, d2, m2, SHARED_NODE, (Link("equal", v, v),), _smaller_first(axis), axis_score(g, axis)
    )


def cut_type_2b(g: Graph, axis: Axis) -> ReductionStep:
    _check_kind(axis, "2.b")
    d1, m1, d2, m2 = _split(g, axis)
    links = tuple(Link("differ", a, b) for a, b in axis.critical_pairs)
    return ReductionStep(axis, d1, m1, d2, m2, CONSTRAINED, links, _smaller_first(axis), axis_score(g, axis))


_CUTTERS = {
    "1.a": cut_type_1a,
    "2.a": cut_type_2a,
    "3.a": cut_type_3a,
    "1.b": cut_type_1b,
    "2.b": cut_type_2b,
}


def cut(g: Graph, axis: Axis) -> ReductionStep:
    return _CUTTERS[axis.kind](g, axis)


@dataclass(frozen=True)
class ReductionTree:
    """A graph with either no step (a leaf) or a step and two daughter subtrees.

    For mirror steps the second child is never reduced or solved; its
    colouring is obtained from the first child's.
    """

    graph: Graph
    step: ReductionStep | None = None
    children: tuple[ReductionTree, ...] = ()
    order: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.step is None

    @property
    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(c.depth for c in self.children)

    def walk(self) -> Iterator[ReductionTree]:
        yield self
        for c in self.children:
            yield from c.walk()

    def walk_with_paths(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], ReductionTree]]:
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk_with_paths(path + (i,))

    def subtree(self, path: tuple[int, ...]) -> ReductionTree:
        t = self
        for i in path:
            t = t.children[i]
        return t

    def solved_children(self) -> tuple[int, ...]:
        if self.step is None:
            return ()
        if self.step.solve_mode == MIRROR:
            return (0,)
        return (self.step.first, 1 - self.step.first)

    def solved_leaves(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], ReductionTree]]:
        """Leaves that are handed to the quantum solver, in solve order."""
        if self.is_leaf:
            yield path, self
            return
        for i in self.solved_children():
            yield from self.children[i].solved_leaves(path + (i,))

    def solve_path_by_order(self) -> list[list[Graph]]:
        """Graphs on the solved side at each reduction order (order 0 is the root)."""
        levels: list[list[Graph]] = []
        frontier = [self]
        while frontier:
            levels.append([t.graph for t in frontier])
            nxt = []
            for t in frontier:
                nxt.extend(t.children[i] for i in t.solved_children())
            frontier = nxt
        return levels

    def replace(self, path: tuple[int, ...], new: ReductionTree) -> ReductionTree:
        if not path:
            return new
        i, rest = path[0], path[1:]
        kids = list(self.children)
        kids[i] = kids[i].replace(rest, new)
        return ReductionTree(self.graph, self.step, tuple(kids), self.order)

    def to_dict(self) -> dict[str, Any]:
        g = self.graph
        d: dict[str, Any] = {
            "order": self.order,
            "node_count": g.node_count,
            "edges": [list(e) for e in g.edges],
            "labels": list(g.labels) if g.labels is not None else None,
        }
        if self.step is None:
            d["step"] = None
            return d
        st = self.step
        d["step"] = {
            "axis": st.axis.to_dict(),
            "solve_mode": st.solve_mode,
            "first": st.first,
            "delta_cq": st.delta_cq,
            "maps": [list(st.map1.parent), list(st.map2.parent)],
            "constraints": [{"kind": l.kind, "a": l.a, "b": l.b} for l in st.links],
        }
        d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ReductionTree:
        g = build_graph(d["node_count"], d["edges"], d["labels"])
        if d["step"] is None:
            return cls(g, None, (), d["order"])
        sd = d["step"]
        kids = tuple(cls.from_dict(c) for c in d["children"])
        st = ReductionStep(
            axis=Axis.from_dict(sd["axis"]),
            daughter1=kids[0].graph,
            map1=NodeMap(tuple(sd["maps"][0])),
            daughter2=kids[1].graph,
            map2=NodeMap(tuple(sd["maps"][1])),
            solve_mode=sd["solve_mode"],
            links=tuple(Link(c["kind"], c["a"], c["b"]) for c in sd["constraints"]),
            first=sd["first"],
            delta_cq=sd["delta_cq"],
        )
        return cls(g, st, kids, d["order"])


def reduce_recursive(
    g: Graph,
    policy: ReductionPolicy = ReductionPolicy(),
    root_axis: Axis | None = None,
    _order: int = 0,
) -> ReductionTree:
    """Greedily cut ``g`` until no admissible axis with positive saving remains.

    ``root_axis`` forces the first cut (it must be an axis of ``g``); deeper
    levels always use :func:`symmetry.select_axis`.
    """
    if _order == 0:
        _require_connected(g)
    if policy.max_depth is not None and _order >= policy.max_depth:
        return ReductionTree(g, order=_order)
    axis = root_axis
    if axis is None:
        if g.node_count <= policy.min_size:
            return ReductionTree(g, order=_order)
        axis = select_axis(g, enumerate_axes(g), policy)
    if axis is None:
        return ReductionTree(g, order=_order)
    step = cut(g, axis)
    kids = []
    for i, d in enumerate(step.daughters):
        if step.solve_mode == MIRROR and i == 1:
            kids.append(ReductionTree(d, order=_order + 1))
        else:
            kids.append(reduce_recursive(d, policy, None, _order + 1))
    return ReductionTree(g, step, tuple(kids), _order)


def reglue(tree: ReductionTree) -> Graph:
    """Rebuild the parent graph of a step from its daughters and recorded metadata."""
    if tree.step is None:
        return tree.graph
    st = tree.step
    edges = set()
    for child, nm in zip(tree.children, st.maps):
        sub = reglue(child)
        edges |= {tuple(sorted((nm.to_parent(u), nm.to_parent(v)))) for u, v in sub.edges}
    edges |= {(l.a, l.b) if l.a < l.b else (l.b, l.a) for l in st.links if l.kind == "differ"}
    return build_graph(tree.graph.node_count, sorted(edges), tree.graph.labels)
