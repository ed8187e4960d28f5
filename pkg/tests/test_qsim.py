import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcolor import oracle, qsim
from symcolor.graph import ColoringSequence, build_graph, is_valid_coloring
from symcolor.qsim import CrossConstraint

from helpers import brute_colorings, complete, graphs, load, path_graph, square


def marked_colorings(state):
    return {qsim.decode_index(int(i), state.N, state.K).colors for i in state.marked_indices}


def closed_form(P, k, t):
    return math.sin((2 * t + 1) * math.asin(math.sqrt(k / P))) ** 2


class TestInit:
    def test_p3_states(self):
        s = qsim.init_uniform(3, 2)
        assert s.P == 8 and np.allclose(s.amplitudes**2, 1 / 8) and s.k == 0

    def test_trivial(self):
        s = qsim.init_uniform(1, 1)
        assert s.amplitudes.tolist() == [1.0]

    def test_square_matrices(self):
        assert qsim.init_uniform(4, 2).P == 16

    def test_cap(self):
        with pytest.raises(qsim.StateCapExceeded):
            qsim.init_uniform(25, 2)
        with pytest.raises(qsim.StateCapExceeded):
            qsim.init_uniform(4, 2, state_cap=15)

    def test_bad_args(self):
        with pytest.raises(qsim.SimulationError):
            qsim.init_uniform(0, 2)


class TestMark:
    def test_p3(self):
        s = qsim.mark_valid(qsim.init_uniform(3, 2), path_graph(3))
        assert marked_colorings(s) == {(2, 1, 2), (1, 2, 1)}

    def test_edgeless(self):
        s = qsim.mark_valid(qsim.init_uniform(3, 3), build_graph(3, []))
        assert s.k == 27

    def test_fixed_colour_constraint(self):
        # P3 is B-C-D, so node B has id 0
        s = qsim.mark_valid(qsim.init_uniform(3, 2), path_graph(3), [CrossConstraint.differ(0, 2)])
        assert marked_colorings(s) == {(1, 2, 1)}

    def test_node_constraints(self):
        g = build_graph(3, [])
        s = qsim.mark_valid(qsim.init_uniform(3, 2), g, [CrossConstraint("must-equal", 0, 2, True)])
        assert all(c[0] == c[2] for c in marked_colorings(s)) and s.k == 4
        s = qsim.mark_valid(qsim.init_uniform(3, 2), g, [CrossConstraint("must-differ", 0, 0, True)])
        assert s.k == 0

    def test_amplitudes_unchanged(self):
        s0 = qsim.init_uniform(3, 2)
        s1 = qsim.mark_valid(s0, path_graph(3))
        assert np.array_equal(s0.amplitudes, s1.amplitudes)

    def test_errors(self):
        with pytest.raises(qsim.SimulationError):
            qsim.mark_valid(qsim.init_uniform(2, 2), path_graph(3))
        with pytest.raises(qsim.SimulationError):
            qsim.mark_valid(qsim.init_uniform(3, 2), path_graph(3), [CrossConstraint.differ(5, 1)])
        with pytest.raises(qsim.SimulationError):
            CrossConstraint("must-be", 0, 1)

    @settings(max_examples=80, deadline=None)
    @given(graphs(max_nodes=6), st.integers(1, 3))
    def test_equals_oracle(self, g, K):
        s = qsim.mark_valid(qsim.init_uniform(g.node_count, K), g)
        want = [oracle.mixed_radix_index(list(c.colors), K) for c in oracle.enumerate_valid(g, K)]
        assert s.marked_indices.tolist() == want
        assert marked_colorings(s) == set(brute_colorings(g, K))

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_nodes=5), st.integers(2, 3), st.data())
    def test_constraints_equal_filter(self, g, K, data):
        n = g.node_count
        cons = data.draw(
            st.lists(
                st.builds(
                    CrossConstraint,
                    st.sampled_from(["must-differ", "must-equal"]),
                    st.integers(0, n - 1),
                    st.integers(1, K),
                ),
                max_size=3,
            )
        )
        s = qsim.mark_valid(qsim.init_uniform(n, K), g, cons)
        want = {
            c
            for c in brute_colorings(g, K)
            if all((c[x.node] != x.other) == (x.kind == "must-differ") for x in cons)
        }
        assert marked_colorings(s) == want


class TestIterations:
    def test_eight_two(self):
        assert qsim.grover_optimal_iterations(8, 2) == 1

    def test_all_marked(self):
        assert qsim.grover_optimal_iterations(16, 16) == 0

    def test_single_in_million(self):
        # argmax of the closed-form success probability
        P = 2**20
        t = qsim.grover_optimal_iterations(P, 1)
        best = max(range(700, 900), key=lambda x: closed_form(P, 1, x))
        assert t == best == 804
        assert closed_form(P, 1, t) >= 0.999999

    def test_no_solutions(self):
        with pytest.raises(qsim.SimulationError):
            qsim.grover_optimal_iterations(8, 0)

    @given(st.integers(1, 12), st.data())
    def test_is_argmax(self, j, data):
        P = 2**j
        k = data.draw(st.integers(1, P))
        t = qsim.grover_optimal_iterations(P, k)
        theta = math.asin(math.sqrt(k / P))
        # first rise of sin^2((2x+1) theta)
        horizon = range(0, int((math.pi / theta - 1) / 2) + 1)
        assert closed_form(P, k, t) >= max(closed_form(P, k, x) for x in horizon) - 1e-12


class TestAmplify:
    def p3_state(self):
        return qsim.mark_valid(qsim.init_uniform(3, 2), path_graph(3))

    def test_one_round(self):
        s = qsim.amplify(self.p3_state(), 1)
        assert qsim.marked_probability(s) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(s.amplitudes[s.marked] ** 2, 0.5)

    def test_zero_rounds(self):
        s0 = self.p3_state()
        assert np.array_equal(qsim.amplify(s0, 0).amplitudes, s0.amplitudes)

    def test_overshoot(self):
        assert qsim.marked_probability(qsim.amplify(self.p3_state(), 2)) == pytest.approx(0.25, abs=1e-12)

    def test_requires_marks(self):
        with pytest.raises(qsim.SimulationError):
            qsim.amplify(qsim.init_uniform(2, 2), 1)

    @given(st.integers(1, 10), st.data())
    def test_closed_form_and_norm(self, j, data):
        P = 2**j
        k = data.draw(st.integers(1, P))
        t = data.draw(st.integers(0, 12))
        marked = np.zeros(P, dtype=bool)
        marked[:k] = True
        s = qsim.ColoringState.from_amplitudes(j, 2, np.full(P, P**-0.5), marked)
        out = qsim.amplify(s, t)
        assert abs(qsim.marked_probability(out) - closed_form(P, k, t)) < 1e-9
        assert abs(float(np.dot(out.amplitudes, out.amplitudes)) - 1.0) < 1e-9


class TestSample:
    def test_amplified_p3(self):
        s = qsim.amplify(qsim.mark_valid(qsim.init_uniform(3, 2), path_graph(3)), 1)
        for seed in range(20):
            assert qsim.sample(s, seed).colors in {(2, 1, 2), (1, 2, 1)}

    def test_deterministic_state(self):
        amps = np.zeros(8)
        amps[5] = 1.0
        s = qsim.ColoringState.from_amplitudes(3, 2, amps, np.zeros(8, dtype=bool))
        assert qsim.sample(s, 0).colors == (2, 1, 2)

    def test_reproducible(self):
        s = qsim.init_uniform(4, 3)
        assert [qsim.sample(s, 7).colors for _ in range(3)] == [qsim.sample(s, 7).colors] * 3

    def test_decode(self):
        assert qsim.decode_index(5, 3, 2).colors == (2, 1, 2)


class TestBitstring:
    def test_square_daughter_strings(self):
        g = path_graph(3)
        assert qsim.encode_onehot_bitstring(ColoringSequence((2, 1, 2), 2, (0, 1, 2)), g) == "111011001"
        assert qsim.encode_onehot_bitstring(ColoringSequence((1, 2, 1), 2, (0, 1, 2)), g) == "111100110"

    def test_invalid_edge(self):
        # node registers "01","01" (colour 1 sets bit K-1), ancilla and flag clear
        g = path_graph(2)
        assert qsim.encode_onehot_bitstring(ColoringSequence((1, 1), 2, (0, 1)), g) == "001010"

    def test_length_matches_qubits(self):
        g = square()
        assert len(qsim.encode_onehot_bitstring(ColoringSequence((1, 2, 1, 2), 2, (0, 1, 2, 3)), g)) == 13

    def test_uncovered(self):
        with pytest.raises(Exception):
            qsim.encode_onehot_bitstring(ColoringSequence((1, 2), 2, (0, 1)), path_graph(3))

    @settings(max_examples=60)
    @given(graphs(max_nodes=6), st.integers(1, 4), st.data())
    def test_register_structure(self, g, K, data):
        colors = data.draw(st.lists(st.integers(1, K), min_size=g.node_count, max_size=g.node_count))
        s = ColoringSequence(tuple(colors), K, tuple(g.nodes))
        bits = qsim.encode_onehot_bitstring(s, g)[::-1]  # bit i at index i
        N, A = g.node_count, g.edge_count
        assert len(bits) == N * K + A + 1
        for n in g.nodes:
            assert bits[n * K : (n + 1) * K].count("1") == 1
            assert bits[n * K + K - colors[n]] == "1"
        assert (bits[N * K + A] == "1") == is_valid_coloring(g, s)


class TestSolve:
    def test_square(self):
        s = qsim.solve(square(), 2, seed=3)
        assert s.colors in {(1, 2, 1, 2), (2, 1, 2, 1)}

    def test_triangle_unsolvable(self):
        assert qsim.solve(complete(3), 2) is None

    def test_constrained_triangle(self):
        g = load("fig5")
        tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
        colour_c3 = 2
        s = qsim.solve(tri, 3, [CrossConstraint.differ(0, colour_c3)], seed=1)
        assert is_valid_coloring(tri, s) and s.colors[0] != colour_c3
        assert g.has_edge(2, 4)

    def test_seed_reproducible(self):
        g = load("hexagon")
        assert qsim.solve(g, 3, seed=11) == qsim.solve(g, 3, seed=11)

    def test_retry_budget(self):
        with pytest.raises(qsim.RetryBudgetExhausted):
            qsim.solve(build_graph(12, []), 2, [CrossConstraint.equal(v, 1) for v in range(12)], retries=0)

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_nodes=6), st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_solution_member(self, g, K, seed):
        s = qsim.solve(g, K, seed=seed)
        sols = set(brute_colorings(g, K))
        if not sols:
            assert s is None
        else:
            assert s.colors in sols
