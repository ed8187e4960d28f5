"""
Colouring the square through its diagonal axis
==============================================

The 4-cycle A-B-C-D has a reflection fixing B and D that swaps A with C.
Cutting along that axis leaves a three-node path to be solved;
the other half is its mirror image.
"""

from symcolor import color_graph, reduce_recursive
from symcolor.graph import build_graph
from symcolor import qsim
from symcolor.symmetry import axis_through

g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], list("ABCD"))

# Force the axis through B and D instead of the default A, C choice.
axis = axis_through(g, g.ids("BD"))
tree = reduce_recursive(g, root_axis=axis)
d1 = tree.step.daughter1
print("axis kind:", axis.kind, "fixed:", [g.labels[v] for v in sorted(axis.fixed_nodes)])
print("daughter nodes:", [g.labels[v] for v in tree.step.map1.parent], "edges:", d1.edges)

# %%
# The simulator marks every valid 2-colouring of the daughter.
state = qsim.mark_valid(qsim.init_uniform(d1.node_count, 2), d1)
for i in state.marked_indices:
    print("marked index", int(i), "->", qsim.decode_index(int(i), 3, 2).colors)

t = qsim.grover_optimal_iterations(state.P, state.k)
print("iterations:", t, "success probability:", qsim.marked_probability(qsim.amplify(state, t)))

# %%
# Different measurement seeds land on the two colourings; the mirror step
# turns each into a colouring of the square.
for seed in range(4):
    res = color_graph(g, 2, seed=seed, root_axis=axis)
    (bits,) = res.leaf_bitstrings().values()
    print(f"seed {seed}: register {bits}  square colouring {res.coloring.colors}  valid={res.valid}")
