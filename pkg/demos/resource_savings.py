"""
Resource figures before and after a reduction
=============================================

Cycles are symmetric in many ways. One cut through two opposite nodes
of C20 leaves an 11-node daughter; an edge axis leaves two 10-node halves.
"""

from symcolor import estimator as est
from symcolor.graph import build_graph
from symcolor.reducer import reduce_recursive
from symcolor.symmetry import ReductionPolicy


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def show(title, g, policy, K=None):
    before, after = est.report(g, reduce_recursive(g, policy), K)
    print(title)
    print(f"  nodes      {before.node_counts} -> {after.node_counts}")
    print(f"  cq         {before.cq} -> {after.cq}")
    print(f"  gates      {before.gates.total} -> {after.gates.total}")
    print(f"  iterations {before.iterations} -> {after.iterations}")
    runtime = " + ".join(f"{r.multiplicity}*{r.base}^{r.exponent}" for r in after.runtime)
    print(f"  runtime    {before.runtime[0].base}^{before.runtime[0].exponent} -> {runtime}")


show("C20, node axis", cycle(20), ReductionPolicy(max_depth=1, kinds=frozenset({"1.a"})))
show("C20, edge axis", cycle(20), ReductionPolicy(max_depth=1, kinds=frozenset({"2.a"})))
show("C10, best axis", cycle(10), ReductionPolicy(max_depth=1))

# %%
# Repeated node cuts on the square shrink the number of colouring
# matrices at every order.
sq = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
_, after = est.report(sq, reduce_recursive(sq, ReductionPolicy(min_size=2, kinds=frozenset({"1.a"}))), K=2)
print("square cascade, matrices per order:", after.matrices_per_order)
