"""Closed-form resource accounting for the reduced colouring procedure.

All polynomial counts are evaluated in exact integer or rational
arithmetic; floating point only enters at the final square root of the
iteration estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .graph import Graph
    from .reducer import ReductionTree

__all__ = [
    "EstimatorError",
    "GateCounts",
    "Recommendation",
    "ResourceReport",
    "RuntimeExponent",
    "RUNTIME_BASE",
    "THRESHOLD_1A_DIVISOR",
    "coloring_matrices",
    "compare_techniques",
    "cq_daughters_2a",
    "cq_worst",
    "delta",
    "delta_cq",
    "delta_cq_1a",
    "delta_cq_1b",
    "delta_cq_2a",
    "delta_cq_2b",
    "delta_cq_3a",
    "gate_counts",
    "iteration_estimate",
    "iteration_estimate_general",
    "qubits_exact",
    "report",
    "runtime_exponent",
]

RUNTIME_BASE = 1.9575
# Used verbatim; the asymptotic root of delta = 0 is 1/(sqrt(2) - 1).
THRESHOLD_1A_DIVISOR = Fraction("2.4446303")


class EstimatorError(ValueError):
    pass


def _exact(x: Fraction) -> int:
    if x.denominator != 1:
        raise EstimatorError(f"expected an integer value, got {x}")
    return x.numerator


def qubits_exact(N: int, K: int, A: int) -> int:
    """Qubits of the unreduced circuit: one-hot colour registers, edge ancillas, flag."""
    if A < 0 or A > N * (N - 1) // 2:
        raise EstimatorError(f"edge count {A} impossible for {N} nodes")
    return N * K + A + 1


def cq_worst(N: int) -> int:
    if N < 1:
        raise EstimatorError("N must be positive")
    return (3 * N * N - N) // 2 + 1


def _check_symmetric(N: int, m: int) -> None:
    if N < 3 or not 1 <= m < N:
        raise EstimatorError(f"need N >= 3 and 1 <= m < N, got N={N}, m={m}")
    if (N - m) % 2:
        raise EstimatorError(f"m={m} and N={N} must have the same parity")


def delta_cq_1a(N: int, m: int) -> int:
    _check_symmetric(N, m)
    return _exact(Fraction(9 * N * N - 3 * m * m - 6 * N * m - 2 * N + 2 * m, 8))


def delta_cq_3a(N: int, m: int) -> int:
    # Daughter size (N + m) / 2 does not depend on the crossed edges.
    return delta_cq_1a(N, m)


def cq_daughters_2a(N: int) -> int:
    """Qubit complexity summed over both half-size daughters."""
    if N < 2 or N % 2:
        raise EstimatorError(f"edge-symmetric graphs have an even node count, got {N}")
    n = N // 2
    return 3 * n * n - n + 2


def delta_cq_2a(N: int) -> int:
    if N < 2 or N % 2:
        raise EstimatorError(f"edge-symmetric graphs have an even node count, got {N}")
    n = N // 2
    return 3 * n * n - 1


def delta_cq_1b(n1: int, n2: int) -> int:
    if n1 < 2 or n2 < 2:
        raise EstimatorError("both sides of a cut vertex hold at least 2 nodes")
    return 3 * (n1 - 1) * (n2 - 1) - 2


def delta_cq_2b(n1: int, n2: int) -> int:
    if n1 < 1 or n2 < 1:
        raise EstimatorError("both sides of a bridge hold at least 1 node")
    return 3 * n1 * n2 - 1


def delta_cq(kind: str, N: int, m: int = 0, n1: int = 0, n2: int = 0) -> int:
    """Dispatch on the cut kind."""
    if kind == "1.a":
        return delta_cq_1a(N, m)
    if kind == "3.a":
        return delta_cq_3a(N, m)
    if kind == "2.a":
        return delta_cq_2a(N)
    if kind == "1.b":
        return delta_cq_1b(n1, n2)
    if kind == "2.b":
        return delta_cq_2b(n1, n2)
    raise EstimatorError(f"unknown cut kind {kind!r}")


def coloring_matrices(N: int, K: int) -> int:
    return K**N


@dataclass(frozen=True)
class GateCounts:
    init: int
    mark: int
    amplify: int

    @property
    def total(self) -> int:
        return self.init + self.mark + self.amplify

    def __add__(self, other: GateCounts) -> GateCounts:
        return GateCounts(self.init + other.init, self.mark + other.mark, self.amplify + other.amplify)

    def to_dict(self) -> dict[str, int]:
        return {"init": self.init, "mark": self.mark, "amplify": self.amplify, "total": self.total}


def gate_counts(N: int) -> GateCounts:
    if N < 1:
        raise EstimatorError("N must be positive")
    return GateCounts(
        init=4 * N * N - 3 * N,
        mark=(N**3 - N * N) // 2,
        amplify=N**3 + 11 * N * N - 8 * N + 9,
    )


def _ceil_quarter_pi_sqrt(P: int, k: int) -> int:
    try:
        ratio = P / k
        value = math.pi / 4 * math.sqrt(ratio)
    except OverflowError:
        value = math.exp(math.log(math.pi / 4) + (math.log(P) - math.log(k)) / 2)
    return math.ceil(value)


def iteration_estimate_general(P: int, k: int) -> int:
    """Grover iterations with the ceiling convention, ``ceil(pi/4 * sqrt(P/k))``."""
    if k < 1:
        raise EstimatorError("no valid colourings: the instance is unsolvable")
    if P < k:
        raise EstimatorError("more solutions than states")
    return _ceil_quarter_pi_sqrt(P, k)


def iteration_estimate(N: int) -> int:
    """Worst-case iterations taking ``P = N^N`` states and ``k = N!`` solutions."""
    if N < 1:
        raise EstimatorError("N must be positive")
    return iteration_estimate_general(N**N, math.factorial(N))


@dataclass(frozen=True)
class RuntimeExponent:
    """``multiplicity * base ** exponent``, kept symbolic."""

    exponent: int
    multiplicity: int = 1
    base: float = RUNTIME_BASE

    @property
    def log10(self) -> float:
        return self.exponent * math.log10(self.base) + math.log10(self.multiplicity)

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": self.base,
            "exponent": self.exponent,
            "multiplicity": self.multiplicity,
            "log10": self.log10,
        }


def runtime_exponent(N: int, multiplicity: int = 1) -> RuntimeExponent:
    if N < 0:
        raise EstimatorError("N must be non-negative")
    return RuntimeExponent(N, multiplicity)


def delta(N: int, m: int) -> Fraction:
    """Difference between the 1.a and 2.a qubit savings for the same graph."""
    return Fraction(3 * N * N - 3 * m * m - 6 * N * m - 2 * N + 2 * m + 8, 8)


@dataclass(frozen=True)
class Recommendation:
    technique: str  # "1.a" or "2.a"
    rule: str  # "threshold-2a", "threshold-1a" or "band"
    delta: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {"technique": self.technique, "rule": self.rule, "delta": str(self.delta)}


def compare_techniques(N: int, m: int) -> Recommendation:
    """Choose between a node axis through ``m`` nodes and an edge axis on ``N`` nodes."""
    if N < 4 or N % 2 or not 2 <= m < N:
        raise EstimatorError(
            f"comparison needs even N >= 4 and 2 <= m < N, got N={N}, m={m}"
        )
    d = delta(N, m)
    if 7 * m >= 3 * N:
        return Recommendation("2.a", "threshold-2a", d)
    if m * THRESHOLD_1A_DIVISOR < N:
        return Recommendation("1.a", "threshold-1a", d)
    return Recommendation("1.a" if d > 0 else "2.a", "band", d)


@dataclass
class ResourceReport:
    """Resource figures for one stage (parent graph, or all solved leaves)."""

    node_counts: list[int]
    qubits_exact: int
    cq: int
    coloring_matrices: int
    gates: GateCounts
    iterations: int
    runtime: list[RuntimeExponent]
    delta_cq: list[dict[str, Any]] = field(default_factory=list)
    matrices_per_order: list[int] = field(default_factory=list)
    recommendation: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "node_counts": self.node_counts,
            "qubits_exact": self.qubits_exact,
            "cq": self.cq,
            # exact big integer as a decimal string
            "coloring_matrices": str(self.coloring_matrices),
            "gates": self.gates.to_dict(),
            "iterations": self.iterations,
            "runtime": [r.to_dict() for r in self.runtime],
            "delta_cq": self.delta_cq,
            "matrices_per_order": [str(x) for x in self.matrices_per_order],
            "recommendation": self.recommendation,
        }


def _stage(graphs: list[Graph], K: int | None) -> ResourceReport:
    def colours(g: Graph) -> int:
        return K if K is not None else g.node_count

    gates = GateCounts(0, 0, 0)
    for g in graphs:
        gates = gates + gate_counts(g.node_count)
    return ResourceReport(
        node_counts=[g.node_count for g in graphs],
        qubits_exact=sum(qubits_exact(g.node_count, colours(g), g.edge_count) for g in graphs),
        cq=sum(cq_worst(g.node_count) for g in graphs),
        coloring_matrices=sum(coloring_matrices(g.node_count, colours(g)) for g in graphs),
        gates=gates,
        iterations=sum(iteration_estimate(g.node_count) for g in graphs),
        runtime=[runtime_exponent(g.node_count) for g in graphs],
    )


def report(g: Graph, tree: ReductionTree, K: int | None = None) -> tuple[ResourceReport, ResourceReport]:
    """Before/after resource reports for colouring ``g`` directly vs. via ``tree``.

    ``cq``, gate and iteration figures use the worst-case substitutions
    (K = N, complete edge set). ``qubits_exact`` and ``coloring_matrices`` use
    the instance's edges and the given ``K`` (``N`` of each graph if omitted).
    """
    from .symmetry import enumerate_axes

    before = _stage([g], K)
    leaves = [t.graph for _, t in tree.solved_leaves()]
    after = _stage(leaves, K)

    # Equal-size solved leaves are grouped, so an edge-axis cut reads 2 * base^(N/2).
    runtime: list[RuntimeExponent] = []
    sizes: dict[int, int] = {}
    for leaf in leaves:
        sizes[leaf.node_count] = sizes.get(leaf.node_count, 0) + 1
    for n in sorted(sizes, reverse=True):
        runtime.append(runtime_exponent(n, sizes[n]))
    after.runtime = runtime

    steps = []
    for path, t in tree.walk_with_paths():
        if t.step is None:
            continue
        ax = t.step.axis
        steps.append(
            {
                "path": list(path),
                "kind": ax.kind,
                "N": t.graph.node_count,
                "m": ax.m,
                "p": ax.p,
                "daughters": [t.step.daughter1.node_count, t.step.daughter2.node_count],
                "delta_cq": t.step.delta_cq,
            }
        )
    after.delta_cq = steps

    before.matrices_per_order = [before.coloring_matrices]
    after.matrices_per_order = [
        sum(coloring_matrices(h.node_count, K if K is not None else h.node_count) for h in level)
        for level in tree.solve_path_by_order()
    ]

    if g.is_connected():
        kinds: dict[str, list[int]] = {}
        for ax in enumerate_axes(g):
            kinds.setdefault(ax.kind, []).append(ax.m)
        root_kind = tree.step.axis.kind if tree.step is not None else None
        rec: dict[str, Any] = {"applied": root_kind}
        N = g.node_count
        if "1.a" in kinds and "2.a" in kinds and N >= 4:
            m = min(x for x in kinds["1.a"] if x >= 2) if any(x >= 2 for x in kinds["1.a"]) else None
            if m is not None:
                rec["comparison"] = compare_techniques(N, m).to_dict()
                rec["comparison"]["m"] = m
        rec["rationale"] = (
            "largest qubit-complexity saving among admissible cuts"
            if root_kind is not None
            else "no admissible cut with positive saving"
        )
        after.recommendation = rec
    return before, after
