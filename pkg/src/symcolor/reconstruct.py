"""Rebuilding a parent colouring from daughter colourings."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from .graph import ColoringSequence, Graph, is_valid_coloring
from .reducer import CONSTRAINED, MIRROR, SHARED_NODE, ReductionStep, ReductionTree
from .symmetry import Involution

__all__ = [
    "ReconstructionError",
    "RecolorError",
    "concatenate",
    "merge_step",
    "mirror_sequence",
    "pop_common",
    "recolor_critical",
    "reconstruct_tree",
]


class ReconstructionError(ValueError):
    def __init__(self, message: str, path: tuple[int, ...] | None = None):
        super().__init__(f"step at {list(path)}: {message}" if path is not None else message)
        self.path = path


class RecolorError(ReconstructionError):
    pass


def mirror_sequence(s1: ColoringSequence, inv: Involution, step: ReductionStep) -> ColoringSequence:
    """Carry a side-1 colouring (parent ids) across the involution onto side 2."""
    if step.solve_mode != MIRROR:
        raise ReconstructionError(f"cannot mirror a {step.solve_mode} step")
    if set(s1.node_order) != set(step.axis.side1):
        raise ReconstructionError("colouring does not cover daughter 1")
    return ColoringSequence(s1.colors, s1.K, tuple(inv(v) for v in s1.node_order))


def pop_common(s2: ColoringSequence, common: Iterable[int]) -> ColoringSequence:
    common = set(common)
    missing = common - set(s2.node_order)
    if missing:
        raise ReconstructionError(f"common nodes {sorted(missing)} are not in the sequence")
    keep = [(v, c) for v, c in zip(s2.node_order, s2.colors) if v not in common]
    return ColoringSequence(tuple(c for _, c in keep), s2.K, tuple(v for v, _ in keep))


def concatenate(s1: ColoringSequence, s2p: ColoringSequence) -> ColoringSequence:
    overlap = set(s1.node_order) & set(s2p.node_order)
    if overlap:
        raise ReconstructionError(f"nodes {sorted(overlap)} coloured twice")
    return ColoringSequence(s1.colors + s2p.colors, max(s1.K, s2p.K), s1.node_order + s2p.node_order)


def recolor_critical(
    s: ColoringSequence,
    g: Graph,
    pairs: Sequence[tuple[int, int]],
    K: int,
) -> ColoringSequence:
    """Repair clashing critical pairs by greedily recolouring their second member.

    Raises :class:`RecolorError` when no colour in ``1..K`` is free.
    """
    col = s.as_dict()
    for a, b in pairs:
        if col[a] != col[b]:
            continue
        taken = {col[w] for w in g.adjacency[b]}
        free = next((c for c in range(1, K + 1) if c not in taken), None)
        if free is None:
            raise RecolorError(f"no free colour for critical node {b} within K={K}")
        col[b] = free
    out = ColoringSequence(tuple(col[v] for v in s.node_order), max(K, s.K), s.node_order)
    if not is_valid_coloring(g, out.sorted()):
        raise RecolorError("colouring still invalid after critical recolouring")
    return out


def merge_step(
    tree: ReductionTree,
    child_colorings: Sequence[ColoringSequence | None],
    K: int,
    path: tuple[int, ...] = (),
) -> ColoringSequence:
    """Colour ``tree.graph`` from colourings of its daughters (daughter-local ids)."""
    st = tree.step
    assert st is not None
    if st.solve_mode == MIRROR:
        s1 = child_colorings[0]
        if s1 is None:
            raise ReconstructionError("daughter 1 is uncoloured", path)
        lifted = st.map1.lift(s1)
        s2 = mirror_sequence(lifted, st.axis.involution, st)
        s = concatenate(lifted, pop_common(s2, st.common))
        if st.links:
            try:
                s = recolor_critical(s, tree.graph, [(l.a, l.b) for l in st.links], K)
            except RecolorError as exc:
                raise RecolorError(str(exc), path) from None
    else:
        if any(c is None for c in child_colorings):
            raise ReconstructionError("both daughters must be coloured", path)
        s1 = st.map1.lift(child_colorings[0])
        s2 = st.map2.lift(child_colorings[1])
        c1, c2 = s1.as_dict(), s2.as_dict()
        for link in st.links:
            if link.kind == "differ" and c1[link.a] == c2[link.b]:
                raise ReconstructionError(f"critical nodes {link.a} and {link.b} share colour {c1[link.a]}", path)
            if link.kind == "equal" and c1[link.a] != c2[link.b]:
                raise ReconstructionError(f"common node {link.a} coloured {c1[link.a]} and {c2[link.b]}", path)
        if st.solve_mode == SHARED_NODE:
            s2 = pop_common(s2, st.common)
        else:
            assert st.solve_mode == CONSTRAINED
        s = concatenate(s1, s2)
    s = s.sorted().with_K(max(K, s.K))
    if not is_valid_coloring(tree.graph, s):
        raise ReconstructionError("merged colouring is invalid", path)
    return s


def reconstruct_tree(
    tree: ReductionTree,
    leaf_colorings: Mapping[tuple[int, ...], ColoringSequence],
    K: int | None = None,
) -> ColoringSequence:
    """Colour the root bottom-up; ``leaf_colorings`` is keyed by solved-leaf path."""
    if K is None:
        K = max((s.K for s in leaf_colorings.values()), default=1)

    def rec(t: ReductionTree, path: tuple[int, ...]) -> ColoringSequence:
        if t.is_leaf:
            try:
                s = leaf_colorings[path]
            except KeyError:
                raise ReconstructionError("leaf has no colouring", path) from None
            if not is_valid_coloring(t.graph, s.sorted()):
                raise ReconstructionError("leaf colouring is invalid", path)
            return s.sorted()
        kids: list[ColoringSequence | None] = [None] * len(t.children)
        for i in t.solved_children():
            kids[i] = rec(t.children[i], path + (i,))
        return merge_step(t, kids, K, path)

    return rec(tree, ())
