"""Subspace simulation of the Grover-amplified colouring procedure.

The state lives on the ``K**N`` one-hot-reachable basis states (one per
candidate colouring) instead of the full qubit register. Index ``i``
encodes colouring ``c`` in mixed radix with node 0 least significant:
``i = sum((c[n] - 1) * K**n)``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .graph import ColoringSequence, Graph, GraphError, is_valid_coloring

__all__ = [
    "DEFAULT_RETRIES",
    "DEFAULT_STATE_CAP",
    "ColoringState",
    "CrossConstraint",
    "RetryBudgetExhausted",
    "SimulationError",
    "StateCapExceeded",
    "amplify",
    "decode_index",
    "encode_onehot_bitstring",
    "grover_optimal_iterations",
    "init_uniform",
    "mark_valid",
    "marked_probability",
    "sample",
    "satisfies",
    "solve",
]

DEFAULT_STATE_CAP = 2**24
DEFAULT_RETRIES = 64


class SimulationError(ValueError):
    pass


class StateCapExceeded(SimulationError):
    pass


class RetryBudgetExhausted(SimulationError):
    pass


@dataclass(frozen=True)
class CrossConstraint:
    """``node`` must differ from / equal ``other``.

    ``other`` is a fixed colour when ``other_is_node`` is false, otherwise a
    second local node id.
    """

    kind: str  # "must-differ" or "must-equal"
    node: int
    other: int
    other_is_node: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("must-differ", "must-equal"):
            raise SimulationError(f"unknown constraint kind {self.kind!r}")

    @classmethod
    def differ(cls, node: int, color: int) -> CrossConstraint:
        return cls("must-differ", node, color)

    @classmethod
    def equal(cls, node: int, color: int) -> CrossConstraint:
        return cls("must-equal", node, color)


@dataclass
class ColoringState:
    """Amplitudes over the ``K**N`` colourings.

    ``weights`` holds each amplitude times ``sqrt(P)``, so the uniform state
    is all ones and amplification stays in exactly representable numbers
    as long as possible.
    """

    N: int
    K: int
    weights: np.ndarray
    marked: np.ndarray  # boolean mask over indices

    @classmethod
    def from_amplitudes(cls, N: int, K: int, amplitudes: np.ndarray, marked: np.ndarray) -> ColoringState:
        return cls(N, K, np.asarray(amplitudes, dtype=float) * math.sqrt(len(amplitudes)), marked)

    @property
    def P(self) -> int:
        return len(self.weights)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.weights / math.sqrt(self.P)

    @property
    def marked_indices(self) -> np.ndarray:
        return np.flatnonzero(self.marked)

    @property
    def k(self) -> int:
        return int(self.marked.sum())

    def copy(self) -> ColoringState:
        return ColoringState(self.N, self.K, self.weights.copy(), self.marked.copy())


def init_uniform(N: int, K: int, state_cap: int = DEFAULT_STATE_CAP) -> ColoringState:
    if N < 1 or K < 1:
        raise SimulationError("need N >= 1 and K >= 1")
    P = K**N
    if P > state_cap:
        raise StateCapExceeded(f"K^N = {K}^{N} = {P} exceeds the state cap {state_cap}")
    return ColoringState(N, K, np.ones(P), np.zeros(P, dtype=bool))


def _factor(N: int, K: int, nodes: Sequence[int], table: np.ndarray) -> np.ndarray:
    """Broadcast a truth table over ``nodes`` onto the ``(K,) * N`` state grid.

    Node 0 is least significant, so it is the last grid axis.
    """
    shape = [1] * N
    axes = [N - 1 - n for n in nodes]
    order = np.argsort(axes)
    for n in nodes:
        shape[N - 1 - n] = K
    return np.transpose(table, order).reshape(shape)


def mark_valid(
    state: ColoringState,
    g: Graph,
    extra: Sequence[CrossConstraint] = (),
) -> ColoringState:
    if g.node_count != state.N:
        raise SimulationError(f"state has {state.N} nodes, graph has {g.node_count}")
    N, K = state.N, state.K
    ok = np.ones((K,) * N, dtype=bool)
    differ = ~np.eye(K, dtype=bool)
    for u, v in g.edges:
        ok &= _factor(N, K, (u, v), differ)
    for c in extra:
        nodes = [c.node] + ([c.other] if c.other_is_node else [])
        if any(not 0 <= n < N for n in nodes):
            raise SimulationError(f"constraint references missing node in {c}")
        if c.other_is_node:
            if c.other == c.node:
                table = np.full(K, c.kind == "must-equal")
                ok &= _factor(N, K, (c.node,), table)
                continue
            table = differ if c.kind == "must-differ" else ~differ
            ok &= _factor(N, K, (c.node, c.other), table)
        else:
            table = np.arange(1, K + 1) == c.other
            ok &= _factor(N, K, (c.node,), ~table if c.kind == "must-differ" else table)
    return ColoringState(N, K, state.weights, ok.reshape(-1))


def grover_optimal_iterations(P: int, k: int) -> int:
    """Iteration count maximising the success probability ``sin^2((2t+1) theta)``."""
    if k < 1:
        raise SimulationError("no marked states: the instance is unsolvable")
    if k > P:
        raise SimulationError("more marked states than basis states")
    theta = math.asin(math.sqrt(k / P))
    return max(0, round(math.pi / (4 * theta) - 0.5))


def amplify(state: ColoringState, t: int) -> ColoringState:
    """Apply ``t`` rounds of phase flip on marked states and inversion about the mean."""
    if not state.marked.any():
        raise SimulationError("cannot amplify without marked states")
    w = state.weights.copy()
    sign = np.where(state.marked, -1.0, 1.0)
    for _ in range(t):
        w *= sign
        w = 2.0 * w.mean() - w
    return ColoringState(state.N, state.K, w, state.marked)


def marked_probability(state: ColoringState) -> float:
    w = state.weights[state.marked]
    return float(np.dot(w, w)) / state.P


def decode_index(index: int, N: int, K: int) -> ColoringSequence:
    colors = []
    for _ in range(N):
        index, d = divmod(index, K)
        colors.append(d + 1)
    return ColoringSequence(tuple(colors), K, tuple(range(N)))


def sample(state: ColoringState, seed: int | np.random.Generator) -> ColoringSequence:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    cdf = np.cumsum(state.weights**2)
    i = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return decode_index(min(i, state.P - 1), state.N, state.K)


def encode_onehot_bitstring(s: ColoringSequence, g: Graph) -> str:
    """Register contents after marking, printed most significant bit first.

    Bit ``n*K + (K - c(n))`` holds node ``n``'s colour; bit ``N*K + e`` is the
    ancilla of edge ``e``; bit ``N*K + A`` flags a fully valid colouring.
    """
    N, K, A = g.node_count, s.K, g.edge_count
    if sorted(s.node_order) != list(g.nodes):
        raise GraphError("colouring does not cover the graph")
    col = s.as_dict()
    bits = [0] * (N * K + A + 1)
    for n in g.nodes:
        c = col[n]
        if not 1 <= c <= K:
            raise GraphError(f"colour {c} outside 1..{K}")
        bits[n * K + (K - c)] = 1
    for e, (u, v) in enumerate(g.edges):
        bits[N * K + e] = int(col[u] != col[v])
    bits[N * K + A] = int(all(bits[N * K : N * K + A]))
    return "".join(str(b) for b in reversed(bits))


def satisfies(s: ColoringSequence, extra: Sequence[CrossConstraint]) -> bool:
    col = s.as_dict()
    for c in extra:
        rhs = col[c.other] if c.other_is_node else c.other
        if (col[c.node] != rhs) != (c.kind == "must-differ"):
            return False
    return True


def solve(
    g: Graph,
    K: int,
    extra: Sequence[CrossConstraint] = (),
    seed: int = 0,
    state_cap: int = DEFAULT_STATE_CAP,
    retries: int = DEFAULT_RETRIES,
) -> ColoringSequence | None:
    """Colour ``g`` with at most ``K`` colours by amplified sampling.

    Returns ``None`` when no colouring satisfies the graph and ``extra``.
    """
    state = mark_valid(init_uniform(g.node_count, K, state_cap), g, extra)
    k = state.k
    if k == 0:
        return None
    state = amplify(state, grover_optimal_iterations(state.P, k))
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        s = sample(state, rng)
        if is_valid_coloring(g, s) and satisfies(s, extra):
            return s
    raise RetryBudgetExhausted(f"no valid colouring drawn in {retries} measurements")
