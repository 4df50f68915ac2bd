import json

import numpy as np
import pytest

from src.errors import GraphError, OverflowCountError, ValidationError
from src.generators import complete_graph, cycle_graph, path_graph
from src.graph import (Graph, adjacency_matrix, betti_number, build_graph, degree_matrix,
                       non_backtracking_matrix, reduced_cycle_counts, transition_matrix)


class TestBuildGraph:
    def test_triangle(self):
        g = build_graph([(0, 1), (1, 2), (2, 0)], 3)
        assert g.n == 3
        assert g.m == 3
        assert g.arc_count == 6
        assert g.degrees == (2, 2, 2)

    def test_arc_pairing(self):
        g = build_graph([(0, 1), (1, 2), (2, 0)], 3)
        for e in range(g.arc_count):
            assert g.inv(g.inv(e)) == e
            assert g.origin(g.inv(e)) == g.terminal(e)
            assert g.terminal(g.inv(e)) == g.origin(e)
        assert g.arcs[0] == (0, 1)
        assert g.arcs[1] == (1, 0)

    def test_k4(self):
        g = complete_graph(4)
        assert g.arc_count == 12
        assert set(g.degrees) == {3}

    @pytest.mark.parametrize("edges, n, reason", [
        ([(0, 0)], 1, "loop"),
        ([(0, 1), (1, 0)], 2, "duplicate"),
        ([(0, 1), (2, 3)], 4, "disconnected"),
        ([(0, 1)], 3, "disconnected"),
        ([(0, 5)], 3, "vertex-id"),
        ([], 1, "empty"),
        ([(0, 1)], 0, "vertex-count"),
        ([(0,)], 2, "schema"),
        (5, 2, "schema"),
        ("01", 2, "schema"),
        ([(0, "x")], 2, "schema"),
    ])
    def test_rejections(self, edges, n, reason):
        with pytest.raises(GraphError) as excinfo:
            build_graph(edges, n)
        assert excinfo.value.reason == reason
        assert isinstance(excinfo.value, ValidationError)

    def test_md2_flag(self):
        assert cycle_graph(5).is_md2
        assert not path_graph(3).is_md2

    def test_json_schema(self):
        g = cycle_graph(4)
        data = json.loads(g.to_json())
        assert data == {"n": 4, "edges": [[0, 1], [0, 3], [1, 2], [2, 3]]}
        assert Graph.from_json(g.to_json()).edges == g.edges

    @pytest.mark.parametrize("text, reason", [
        ("not json", "parse"),
        ('{"edges": [[0, 1]]}', "schema"),
    ])
    def test_bad_json(self, text, reason):
        with pytest.raises(GraphError) as excinfo:
            Graph.from_json(text)
        assert excinfo.value.reason == reason

    def test_to_networkx(self, petersen):
        G = petersen.to_networkx()
        assert G.number_of_nodes() == 10
        assert G.number_of_edges() == 15


class TestMatrices:
    def test_transition_triangle(self, triangle):
        T = transition_matrix(triangle)
        off = T[~np.eye(3, dtype=bool)]
        np.testing.assert_allclose(off, 0.5)

    def test_transition_k4(self, k4):
        T = transition_matrix(k4)
        np.testing.assert_allclose(T.sum(axis=1), 1.0)
        np.testing.assert_allclose(T[~np.eye(4, dtype=bool)], 1.0 / 3.0)

    def test_transition_path(self):
        T = transition_matrix(path_graph(3))
        assert T[0, 1] == 1.0
        assert T[1, 0] == 0.5

    def test_adjacency_and_degrees(self, petersen):
        A = adjacency_matrix(petersen)
        np.testing.assert_array_equal(A, A.T)
        np.testing.assert_array_equal(np.diag(degree_matrix(petersen)), A.sum(axis=1))

    def test_non_backtracking_row_sums(self, petersen):
        W = non_backtracking_matrix(petersen)
        assert W.dtype == np.int64
        # each arc continues into deg(t(e)) - 1 arcs
        np.testing.assert_array_equal(W.sum(axis=1), 2)


class TestBettiNumber:
    def test_examples(self, triangle, k4, path4):
        assert betti_number(triangle) == 1
        assert betti_number(k4) == 3
        assert betti_number(path4) == 0


class TestReducedCycleCounts:
    def test_triangle(self, triangle):
        counts = reduced_cycle_counts(triangle, 6)
        assert counts.to_list() == [0, 0, 6, 0, 0, 6]
        assert counts[3] == 6
        assert counts[4] == 0
        assert len(counts) == 6

    def test_tree(self):
        assert reduced_cycle_counts(path_graph(5), 8).to_list() == [0] * 8

    def test_cycle_lengths(self):
        # C_n: the two orientations of each winding
        counts = reduced_cycle_counts(cycle_graph(5), 10)
        assert counts[5] == 10
        assert counts[10] == 10
        assert sum(counts.to_list()) == 20

    def test_k4_matches_float_trace(self, k4):
        W = non_backtracking_matrix(k4).astype(float)
        counts = reduced_cycle_counts(k4, 8)
        for m in range(1, 9):
            assert counts[m] == round(np.trace(np.linalg.matrix_power(W, m)))

    def test_relabeling_invariance(self, sample_graph):
        rng = np.random.default_rng(11)
        perm = rng.permutation(sample_graph.n)
        relabeled = build_graph([(perm[u], perm[v]) for u, v in sample_graph.edges], sample_graph.n)
        assert (reduced_cycle_counts(relabeled, 10).to_list()
                == reduced_cycle_counts(sample_graph, 10).to_list())

    def test_overflow_is_reported(self):
        with pytest.raises(OverflowCountError) as excinfo:
            reduced_cycle_counts(complete_graph(12), 40)
        assert excinfo.value.reason == "overflow"

    def test_invalid_length(self, triangle):
        with pytest.raises(GraphError):
            reduced_cycle_counts(triangle, 0)
