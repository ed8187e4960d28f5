"""
Node axis or edge axis?
=======================

A graph with both kinds of symmetry can be cut either way. The node axis
keeps its m fixed nodes on both sides; the edge axis halves the graph but
adds constraints. The rule below settles which saves more.
"""

from fractions import Fraction

from symcolor import estimator as est

for N, m in [(50, 21), (50, 10), (50, 30), (20, 2), (100, 41)]:
    rec = est.compare_techniques(N, m)
    print(f"N={N:3d} m={m:2d}  use {rec.technique}  ({rec.rule}, delta={rec.delta})")

# %%
# Crossover: for each even N, the first m at which the edge axis wins.
for N in range(10, 101, 10):
    first = next(m for m in range(2, N) if est.compare_techniques(N, m).technique == "2.a")
    print(f"N={N:3d}: edge axis from m={first} (ratio {Fraction(first, N)})")
