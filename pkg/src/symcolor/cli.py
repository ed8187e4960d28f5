"""Command-line front end.

Every command prints one JSON document with the fields ``tool_version``,
``command``, ``input``, ``result`` and ``diagnostics``. Node numbers in the
output follow the 1-based numbering of the DIMACS input.

Exit codes: 0 success, 1 usage or parse error, 2 precondition failure
(disconnected graph, state or enumeration cap), 3 unsolvable with the
requested colours, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import Any

from . import __version__, estimator, oracle, qsim
from .graph import DimacsError, Graph, GraphError, parse_dimacs
from .pipeline import ColoringResult, Unsolvable, solve_tree
from .reconstruct import ReconstructionError
from .reducer import ReductionTree, reduce_recursive
from .symmetry import ALL_KINDS, DisconnectedGraphError, ReductionPolicy, axis_through, enumerate_axes

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_UNSOLVABLE = 3
EXIT_MISMATCH = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _kinds(text: str) -> frozenset[str]:
    kinds = frozenset(k.strip() for k in text.split(",") if k.strip())
    bad = kinds - ALL_KINDS
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"unknown cut kinds {sorted(bad)}; choose from {sorted(ALL_KINDS)}")
    return kinds


def _node_list(text: str) -> list[int]:
    try:
        nodes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node numbers, got {text!r}") from None
    if not nodes:
        raise argparse.ArgumentTypeError("empty node list")
    return nodes


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_non_negative, default=0, help="measurement RNG seed (default 0)")
    common.add_argument("--min-size", type=_positive, default=3, help="smallest admissible daughter (default 3)")
    common.add_argument("--max-depth", type=_non_negative, default=None, help="reduction depth limit (default unlimited)")
    common.add_argument("--state-cap", type=_positive, default=qsim.DEFAULT_STATE_CAP, help="largest simulated K^N (default 2^24)")
    common.add_argument("--kinds", type=_kinds, default=ALL_KINDS, help="comma-separated cut kinds to consider")
    common.add_argument("--axis", type=_node_list, default=None, metavar="NODES", help="force the first cut to the axis fixing exactly these nodes")
    common.add_argument("--pretty", action="store_true", help="render the JSON document as an aligned table")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = _Parser(prog="symcolor", description="Reduce special graphs and colour them with a simulated Grover search.")
    p.add_argument("--version", action="version", version=f"symcolor {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("reduce", parents=[common], help="print the reduction tree")
    r.add_argument("input")
    c = sub.add_parser("color", parents=[common], help="colour a graph end to end")
    c.add_argument("input")
    c.add_argument("--colors", "-K", type=_positive, required=True, dest="K")
    e = sub.add_parser("estimate", parents=[common], help="before/after resource report")
    e.add_argument("input")
    e.add_argument("--colors", "-K", type=_positive, default=None, dest="K")
    v = sub.add_parser("verify", parents=[common], help="cross-check simulator, oracle and formulas")
    v.add_argument("input")
    v.add_argument("--colors", "-K", type=_positive, required=True, dest="K")
    cm = sub.add_parser("compare", parents=[common], help="node axis versus edge axis recommendation")
    cm.add_argument("input", nargs="?")
    cm.add_argument("--nodes", type=_positive, default=None)
    cm.add_argument("--m", type=_positive, default=None)
    return p


class CommandError(Exception):
    def __init__(self, code: int, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.code = code
        self.details = details or {}


# ---- helpers ---------------------------------------------------------------


def _load(path: str) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CommandError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_dimacs(text)
    except GraphError as exc:
        raise CommandError(EXIT_USAGE, f"{path}: {exc}") from None


def _policy(args: argparse.Namespace) -> ReductionPolicy:
    return ReductionPolicy(min_size=args.min_size, max_depth=args.max_depth, kinds=args.kinds)


def _tree(g: Graph, args: argparse.Namespace) -> ReductionTree:
    root_axis = None
    if not g.is_connected():
        raise DisconnectedGraphError("graph is disconnected; reduce each component separately")
    if args.axis is not None:
        if any(not 1 <= v <= g.node_count for v in args.axis):
            raise CommandError(EXIT_USAGE, f"--axis nodes must lie in 1..{g.node_count}")
        try:
            root_axis = axis_through(g, [v - 1 for v in args.axis])
        except GraphError as exc:
            raise CommandError(EXIT_USAGE, str(exc)) from None
    return reduce_recursive(g, _policy(args), root_axis=root_axis)


def _root_ids(tree: ReductionTree) -> dict[tuple[int, ...], list[int]]:
    """For each tree path, the 1-based root number of every local node."""
    out = {(): [v + 1 for v in tree.graph.nodes]}
    for path, t in tree.walk_with_paths():
        if t.step is None:
            continue
        here = out[path]
        for i, nm in enumerate(t.step.maps):
            out[path + (i,)] = [here[p] for p in nm.parent]
    return out


def _pair(ids: list[int], a: int, b: int) -> list[int]:
    return [ids[a], ids[b]]


def _describe_tree(tree: ReductionTree) -> dict[str, Any]:
    ids = _root_ids(tree)
    solved = {p for p, _ in tree.solved_leaves()}
    steps, leaves = [], []
    for path, t in tree.walk_with_paths():
        here = ids[path]
        if t.step is None:
            leaves.append(
                {
                    "path": list(path),
                    "order": t.order,
                    "nodes": here,
                    "edges": [_pair(here, u, v) for u, v in t.graph.edges],
                    "solved": path in solved,
                }
            )
            continue
        st, ax = t.step, t.step.axis
        steps.append(
            {
                "path": list(path),
                "order": t.order,
                "kind": ax.kind,
                "m": ax.m,
                "p": ax.p,
                "fixed_nodes": sorted(here[v] for v in ax.fixed_nodes),
                "crossed_edges": [_pair(here, u, v) for u, v in ax.crossed_edges],
                "daughters": [ids[path + (i,)] for i in range(2)],
                "solve_mode": st.solve_mode,
                "first": st.first,
                "constraints": [{"kind": l.kind, "pair": _pair(here, l.a, l.b)} for l in st.links],
                "delta_cq": st.delta_cq,
            }
        )
    return {
        "nodes": tree.graph.node_count,
        "edges": tree.graph.edge_count,
        "depth": tree.depth,
        "steps": steps,
        "leaves": leaves,
        "tree": tree.to_dict(),
    }


def _chromatic(g: Graph) -> int | None:
    try:
        return oracle.chromatic_number(g)
    except oracle.BudgetExceeded:
        return None


# ---- commands --------------------------------------------------------------


def cmd_reduce(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, Any]]:
    g = _load(args.input)
    tree = _tree(g, args)
    return _describe_tree(tree), {}


def _coloring_result(res: ColoringResult) -> dict[str, Any]:
    ids = _root_ids(res.effective_tree)
    bits = res.leaf_bitstrings()
    leaves = []
    for path, s in sorted(res.leaf_colorings.items()):
        here = ids[path]
        leaves.append(
            {
                "path": list(path),
                "nodes": [here[v] for v in s.node_order],
                "coloring": list(s.colors),
                "bitstring": bits[path],
            }
        )
    return {
        "K": res.coloring.K,
        "coloring": list(res.coloring.colors),
        "valid": res.valid,
        "leaves": leaves,
        "fallbacks": [list(p) for p in res.fallbacks],
        "resolved": [list(p) for p in res.resolved],
    }


def _color(g: Graph, tree: ReductionTree, args: argparse.Namespace) -> ColoringResult:
    try:
        return solve_tree(tree, args.K, seed=args.seed, state_cap=args.state_cap)
    except Unsolvable:
        chi = _chromatic(g)
        msg = f"no valid colouring with K={args.K}"
        if chi is not None:
            msg += f"; chromatic number is {chi}"
        raise CommandError(EXIT_UNSOLVABLE, msg, {"chromatic_number": chi}) from None


def cmd_color(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, Any]]:
    g = _load(args.input)
    tree = _tree(g, args)
    res = _color(g, tree, args)
    result = _coloring_result(res)
    result["reduction"] = {k: v for k, v in _describe_tree(res.effective_tree).items() if k != "tree"}
    return result, {}


def cmd_estimate(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, Any]]:
    g = _load(args.input)
    tree = _tree(g, args)
    before, after = estimator.report(g, tree, args.K)
    diag = {}
    if args.K is None:
        diag["note"] = "colour count defaults to the node count of each graph"
    return {"K": args.K, "depth": tree.depth, "before": before.to_dict(), "after": after.to_dict()}, diag


def _direct_delta(kind: str, N: int, m: int, n1: int, n2: int) -> int:
    cq = estimator.cq_worst
    if kind in ("1.a", "3.a"):
        return cq(N) - cq((N + m) // 2)
    if kind == "2.a":
        return cq(N) - 2 * cq(N // 2)
    return cq(N) - cq(n1) - cq(n2)


def cmd_verify(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, Any]]:
    g = _load(args.input)
    tree = _tree(g, args)
    K = args.K
    checks: list[dict[str, Any]] = []
    failures: list[dict[str, Any]] = []

    def record(name: str, ok: bool, **info: Any) -> None:
        entry = {"check": name, "pass": ok, **info}
        checks.append(entry)
        if not ok:
            failures.append(entry)

    # marked set of the simulator versus the oracle, for the root and every solved leaf
    ids = _root_ids(tree)
    targets = [((), tree)] + [(p, t) for p, t in tree.solved_leaves() if p != ()]
    root_k = None
    for path, t in targets:
        h = t.graph
        if K**h.node_count > min(args.state_cap, oracle.ENUMERATION_BUDGET):
            record("marked-set", True, path=list(path), skipped=f"K^N = {K}^{h.node_count} above the cap")
            continue
        state = qsim.mark_valid(qsim.init_uniform(h.node_count, K, args.state_cap), h)
        sim = [int(i) for i in state.marked_indices]
        orc = [oracle.mixed_radix_index(list(s.colors), K) for s in oracle.enumerate_valid(h, K)]
        ok = sim == orc
        info: dict[str, Any] = {"path": list(path), "nodes": ids[path], "k": len(orc)}
        if not ok:
            info["simulator_only"] = sorted(set(sim) - set(orc))
            info["oracle_only"] = sorted(set(orc) - set(sim))
        record("marked-set", ok, **info)
        if path == ():
            root_k = len(orc)

    for path, t in tree.walk_with_paths():
        if t.step is None:
            continue
        ax = t.step.axis
        N = t.graph.node_count
        direct = _direct_delta(ax.kind, N, ax.m, ax.n1, ax.n2)
        record("delta-cq", direct == t.step.delta_cq, path=list(path), kind=ax.kind, formula=t.step.delta_cq, direct=direct)
        if ax.symmetric:
            want = N // 2 if ax.kind == "2.a" else (N + ax.m) // 2
            sizes = [t.step.daughter1.node_count, t.step.daughter2.node_count]
            record("size-law", sizes == [want, want] and (N - ax.m) % 2 == 0, path=list(path), sizes=sizes, expected=want)

    try:
        res = _color(g, tree, args)
        record("reconstruction", res.valid, coloring=list(res.coloring.colors), fallbacks=[list(p) for p in res.fallbacks])
    except CommandError as exc:
        solvable = root_k is None or root_k > 0
        record("reconstruction", not solvable, unsolvable=True, error=str(exc))
    except ReconstructionError as exc:
        record("reconstruction", False, error=str(exc))

    result = {"K": K, "pass": not failures, "k": root_k, "checks": checks}
    if failures:
        raise CommandError(EXIT_MISMATCH, f"{len(failures)} check(s) failed", {"result": result})
    return result, {}


def cmd_compare(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, Any]]:
    diag: dict[str, Any] = {}
    if args.input is not None:
        g = _load(args.input)
        if not g.is_connected():
            raise DisconnectedGraphError("graph is disconnected")
        N = g.node_count
        ms = sorted({ax.m for ax in enumerate_axes(g) if ax.kind == "1.a" and ax.m >= 2})
        if args.m is not None:
            m = args.m
        elif ms:
            m = ms[0]
        else:
            raise CommandError(EXIT_PRECONDITION, "graph has no node axis with m >= 2; pass --m")
        diag["node_axis_m_values"] = ms
    else:
        if args.nodes is None or args.m is None:
            raise CommandError(EXIT_USAGE, "compare needs an input graph or both --nodes and --m")
        N, m = args.nodes, args.m
    try:
        rec = estimator.compare_techniques(N, m)
    except estimator.EstimatorError as exc:
        raise CommandError(EXIT_PRECONDITION, str(exc)) from None
    out = {"N": N, "m": m, **rec.to_dict()}
    out["delta_float"] = float(rec.delta)
    if N % 2 == 0 and (N - m) % 2 == 0:
        out["delta_cq_1a"] = estimator.delta_cq_1a(N, m)
    out["delta_cq_2a"] = estimator.delta_cq_2a(N)
    return out, diag


COMMANDS = {
    "reduce": cmd_reduce,
    "color": cmd_color,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


# ---- output ----------------------------------------------------------------


def _flatten(prefix: str, obj: Any, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict) and obj:
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list) and obj and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(obj)))


def render(doc: dict[str, Any], pretty: bool = False) -> str:
    if not pretty:
        return json.dumps(doc, sort_keys=False, separators=(",", ":"))
    rows: list[tuple[str, str]] = []
    _flatten("", doc, rows)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"symcolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)

    doc: dict[str, Any] = {
        "tool_version": __version__,
        "command": args.command,
        "input": {"path": args.input, "flags": _flags(args)},
        "result": None,
        "diagnostics": {},
    }
    code = EXIT_OK
    try:
        result, diag = COMMANDS[args.command](args)
        doc["result"] = result
        doc["diagnostics"] = diag
    except CommandError as exc:
        code = exc.code
        doc["result"] = exc.details.pop("result", None)
        doc["diagnostics"] = {"error": str(exc), **exc.details}
    except (DisconnectedGraphError, qsim.StateCapExceeded, oracle.BudgetExceeded) as exc:
        code = EXIT_PRECONDITION
        doc["diagnostics"] = {"error": str(exc)}
    except (DimacsError, GraphError) as exc:
        code = EXIT_USAGE
        doc["diagnostics"] = {"error": str(exc)}
    doc["diagnostics"]["exit_code"] = code
    print(render(doc, args.pretty))
    if code:
        print(f"symcolor: {doc['diagnostics']['error']}", file=sys.stderr)
    return code


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key in ("K", "seed", "min_size", "max_depth", "state_cap", "kinds", "axis", "nodes", "m"):
        if not hasattr(args, key):
            continue
        v = getattr(args, key)
        if isinstance(v, frozenset):
            v = sorted(v)
        out[key] = v
    return out


if __name__ == "__main__":
    raise SystemExit(main())
