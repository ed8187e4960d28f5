"""End-to-end colouring: reduce, solve the leaves, reconstruct."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import oracle, qsim
from .graph import ColoringSequence, Graph, is_valid_coloring
from .qsim import CrossConstraint
from .reconstruct import RecolorError, ReconstructionError, merge_step, reconstruct_tree
from .reducer import MIRROR, SHARED_NODE, Link, ReductionStep, ReductionTree, reduce_recursive
from .symmetry import Axis, ReductionPolicy

__all__ = ["ColoringResult", "Unsolvable", "color_graph", "solve_tree"]

log = logging.getLogger(__name__)


class Unsolvable(Exception):
    """No colouring with the requested number of colours exists."""


@dataclass
class ColoringResult:
    coloring: ColoringSequence
    valid: bool
    tree: ReductionTree
    effective_tree: ReductionTree
    leaf_colorings: dict[tuple[int, ...], ColoringSequence]
    fallbacks: list[tuple[int, ...]] = field(default_factory=list)
    resolved: list[tuple[int, ...]] = field(default_factory=list)

    def leaf_bitstrings(self) -> dict[tuple[int, ...], str]:
        return {
            path: qsim.encode_onehot_bitstring(s, self.effective_tree.subtree(path).graph)
            for path, s in self.leaf_colorings.items()
        }


def _child_seed(seed: int, path: tuple[int, ...], salt: int) -> int:
    ss = np.random.SeedSequence([seed, salt, len(path), *path])
    return int(ss.generate_state(1)[0])


def _restrict(constraints: list[CrossConstraint], nm_to_local: dict[int, int]) -> list[CrossConstraint]:
    out = []
    for c in constraints:
        if c.node not in nm_to_local:
            continue
        if c.other_is_node:
            if c.other not in nm_to_local:
                continue
            out.append(CrossConstraint(c.kind, nm_to_local[c.node], nm_to_local[c.other], True))
        else:
            out.append(CrossConstraint(c.kind, nm_to_local[c.node], c.other))
    return out


class _Infeasible(Exception):
    """Proof that no colouring of the current subtree exists."""


class _Solver:
    """Recursive leaf solving.

    :meth:`run` is exact: it returns a colouring of the subtree's graph that
    satisfies ``extra`` or ``None`` when none exists. A mixed-axis step whose
    mirrored colouring cannot be repaired re-solves its second daughter under
    the first daughter's colours (recorded in ``rewired``). Steps whose
    daughters still cannot be reconciled are collapsed into a direct solve of
    their graph (recorded in ``collapsed``).
    """

    def __init__(self, K: int, seed: int, state_cap: int):
        self.K = K
        self.seed = seed
        self.state_cap = state_cap
        self.leaves: dict[tuple[int, ...], ColoringSequence] = {}
        self.collapsed: set[tuple[int, ...]] = set()
        self.rewired: dict[tuple[int, ...], ReductionStep] = {}

    def _reset(self, path: tuple[int, ...]) -> None:
        n = len(path)
        self.leaves = {p: s for p, s in self.leaves.items() if p[:n] != path}
        self.collapsed = {p for p in self.collapsed if p[:n] != path}
        self.rewired = {p: st for p, st in self.rewired.items() if p[:n] != path}

    def leaf(self, g: Graph, K: int, extra: list[CrossConstraint], path: tuple[int, ...]) -> ColoringSequence | None:
        s = qsim.solve(g, K, extra, seed=_child_seed(self.seed, path, K), state_cap=self.state_cap)
        if s is not None:
            self.leaves[path] = s.with_K(self.K)
        return s

    def run(self, t: ReductionTree, K: int, extra: list[CrossConstraint], path: tuple[int, ...]) -> ColoringSequence | None:
        self._reset(path)
        if t.is_leaf:
            return self.leaf(t.graph, K, extra, path)
        try:
            s = self._run_step(t, K, extra, path)
        except _Infeasible:
            self._reset(path)
            return None
        except (ReconstructionError, qsim.RetryBudgetExhausted) as exc:
            log.debug("step at %s failed: %s", list(path), exc)
            s = None
        if s is not None and is_valid_coloring(t.graph, s) and qsim.satisfies(s, extra):
            return s
        log.debug("collapsing step at %s into a direct solve", list(path))
        self._reset(path)
        self.collapsed.add(path)
        return self.leaf(t.graph, K, extra, path)

    def _run_step(self, t: ReductionTree, K: int, extra: list[CrossConstraint], path: tuple[int, ...]) -> ColoringSequence | None:
        st = t.step
        if st.solve_mode == MIRROR:
            inv = st.axis.involution
            local = {p: i for i, p in enumerate(st.map1.parent)}
            mapped = []
            for c in extra:
                # side-2 nodes inherit the colour of their mirror image
                node = c.node if c.node in local else inv(c.node)
                other = c.other
                if c.other_is_node and other not in local:
                    other = inv(other)
                mapped.append(CrossConstraint(c.kind, node, other, c.other_is_node))
            s1 = self.run(t.children[0], K, _restrict(mapped, local), path + (0,))
            if s1 is None:
                if not extra:
                    # daughter 1 is an induced subgraph of the parent
                    raise _Infeasible
                return None
            try:
                return merge_step(t, [s1, None], K, path)
            except RecolorError as exc:
                log.debug("re-solving daughter 2 at %s: %s", list(path), exc)
                return self._resolve_second(t, s1, K, extra, path)

        colorings: list[ColoringSequence | None] = [None, None]
        first = st.first
        second = 1 - first
        maps = st.maps
        k_first = self._required_colors(st.daughters[first], K)
        if k_first > K:
            raise _Infeasible
        local_first = {p: i for i, p in enumerate(maps[first].parent)}
        for k in range(k_first, K + 1):
            colorings[first] = self.run(t.children[first], k, _restrict(extra, local_first), path + (first,))
            if colorings[first] is not None:
                break
        s_first = colorings[first]
        if s_first is None:
            raise _Infeasible
        parent_colors = maps[first].lift(s_first).as_dict()

        local_second = {p: i for i, p in enumerate(maps[second].parent)}
        cons = _restrict(extra, local_second)
        for link in st.links:
            mine, theirs = (link.b, link.a) if second == 1 else (link.a, link.b)
            if st.solve_mode == SHARED_NODE:
                cons.append(CrossConstraint.equal(local_second[mine], parent_colors[theirs]))
            else:
                cons.append(CrossConstraint.differ(local_second[mine], parent_colors[theirs]))
        for k in range(max(max(s_first.colors), 1), K + 1):
            colorings[second] = self.run(t.children[second], k, cons, path + (second,))
            if colorings[second] is not None:
                break
        if colorings[second] is None:
            return None
        return merge_step(t, [c.with_K(K) for c in colorings], K, path)

    def _resolve_second(
        self, t: ReductionTree, s1: ColoringSequence, K: int, extra: list[CrossConstraint], path: tuple[int, ...]
    ) -> ColoringSequence | None:
        """Colour daughter 2 directly, agreeing on fixed nodes and differing across crossed edges."""
        st = t.step
        links = tuple(Link("equal", v, v) for v in sorted(st.common)) + st.links
        rewired = replace(st, solve_mode=SHARED_NODE, links=links, first=0)
        col1 = st.map1.lift(s1).as_dict()
        local2 = {p: i for i, p in enumerate(st.map2.parent)}
        cons = _restrict(extra, local2)
        for link in links:
            if link.kind == "equal":
                cons.append(CrossConstraint.equal(local2[link.b], col1[link.a]))
            else:
                cons.append(CrossConstraint.differ(local2[link.b], col1[link.a]))
        s2 = self.leaf(t.children[1].graph, K, cons, path + (1,))
        if s2 is None:
            return None
        self.rewired[path] = rewired
        return merge_step(ReductionTree(t.graph, rewired, t.children, t.order), [s1, s2], K, path)

    @staticmethod
    def _required_colors(g: Graph, K: int) -> int:
        if g.node_count > oracle.CHROMATIC_MAX_NODES:
            return 1
        return oracle.chromatic_number(g)


def _rewire(tree: ReductionTree, steps: dict[tuple[int, ...], ReductionStep]) -> ReductionTree:
    for path, st in steps.items():
        node = tree.subtree(path)
        tree = tree.replace(path, ReductionTree(node.graph, st, node.children, node.order))
    return tree


def _collapse(tree: ReductionTree, paths: list[tuple[int, ...]]) -> ReductionTree:
    # shallowest first so nested collapses are absorbed
    for path in sorted(set(paths), key=len):
        node = tree.subtree(path) if _exists(tree, path) else None
        if node is not None and not node.is_leaf:
            tree = tree.replace(path, ReductionTree(node.graph, order=node.order))
    return tree


def _exists(tree: ReductionTree, path: tuple[int, ...]) -> bool:
    t = tree
    for i in path:
        if i >= len(t.children):
            return False
        t = t.children[i]
    return True


def solve_tree(
    tree: ReductionTree,
    K: int,
    seed: int = 0,
    state_cap: int = qsim.DEFAULT_STATE_CAP,
    extra: list[CrossConstraint] | None = None,
) -> ColoringResult:
    """Colour every solved leaf of ``tree`` and reconstruct the root colouring.

    Mixed-axis steps whose mirrored colouring cannot be repaired re-solve
    their second daughter; steps whose daughters still cannot be reconciled
    are collapsed into a direct solve of that step's graph. Raises :class:`Unsolvable` when no
    ``K``-colouring exists.
    """
    solver = _Solver(K, seed, state_cap)
    s = solver.run(tree, K, list(extra or []), ())
    if s is None:
        raise Unsolvable(f"no valid colouring with K={K}")
    effective = _collapse(_rewire(tree, solver.rewired), list(solver.collapsed))
    leaves = {p: c for p, c in solver.leaves.items() if _exists(effective, p) and effective.subtree(p).is_leaf}
    final = reconstruct_tree(effective, leaves, K)
    if final != s.sorted().with_K(K):
        raise ReconstructionError("replayed reconstruction disagrees with the solve")
    return ColoringResult(
        coloring=final,
        valid=is_valid_coloring(tree.graph, final),
        tree=tree,
        effective_tree=effective,
        leaf_colorings=leaves,
        fallbacks=sorted(p for p in solver.collapsed if _exists(effective, p)),
        resolved=sorted(p for p in solver.rewired if _exists(effective, p) and not effective.subtree(p).is_leaf),
    )


def color_graph(
    g: Graph,
    K: int,
    policy: ReductionPolicy = ReductionPolicy(),
    seed: int = 0,
    state_cap: int = qsim.DEFAULT_STATE_CAP,
    root_axis: Axis | None = None,
) -> ColoringResult:
    tree = reduce_recursive(g, policy, root_axis=root_axis)
    return solve_tree(tree, K, seed=seed, state_cap=state_cap)
