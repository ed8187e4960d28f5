"""
Random graphs with a planted reflection
=======================================

Draw graphs that are invariant under a random involution, reduce them and
colour them with their chromatic number. The output counts the cut kinds
used and how often a step needed a fallback.
"""

import itertools
from collections import Counter

import numpy as np

from symcolor import color_graph, oracle
from symcolor.graph import build_graph

rng = np.random.default_rng(0)


def planted(n):
    while True:
        nodes = rng.permutation(n)
        sigma = list(range(n))
        for i in range(int(rng.integers(1, n // 2 + 1))):
            a, b = nodes[2 * i], nodes[2 * i + 1]
            sigma[a], sigma[b] = b, a
        orbits = {frozenset({(u, v), tuple(sorted((sigma[u], sigma[v])))}) for u, v in itertools.combinations(range(n), 2)}
        g = build_graph(n, [e for orbit in orbits if rng.random() < 0.35 for e in orbit])
        if g.is_connected():
            return g


kinds, fallbacks, resolved = Counter(), 0, 0
for _ in range(40):
    g = planted(int(rng.integers(4, 10)))
    K = oracle.chromatic_number(g)
    res = color_graph(g, K, seed=int(rng.integers(2**31)))
    assert res.valid
    kinds.update(t.step.axis.kind for t in res.tree.walk() if t.step is not None)
    fallbacks += len(res.fallbacks)
    resolved += len(res.resolved)

print("cut kinds used:", dict(sorted(kinds.items())))
print("second daughters re-solved:", resolved, " steps collapsed:", fallbacks)
