import io

import networkx as nx
import numpy as np
import pytest

import qwlink as qw
from helpers import edge_label_set, gnp_graph


def to_networkx(g: qw.Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(map(tuple, g.edges))
    return h


class TestLoadEdgeList:
    def test_path_graph(self):
        g = qw.load_edge_list("0 1\n1 2")
        assert g.node_count == 3
        assert g.edge_count == 2
        assert g.degrees.tolist() == [1, 2, 1]

    def test_duplicates_and_self_loops_dropped_with_counts(self):
        g, report = qw.parse_edge_list("a b\nb a\na a")
        assert g.node_count == 2
        assert g.edge_count == 1
        assert report.duplicates_dropped == 1
        assert report.self_loops_dropped == 1

    def test_labels_in_first_appearance_order(self):
        g = qw.load_edge_list("b a\nc a")
        assert g.labels == ("b", "a", "c")

    def test_reads_file_streams(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# comment\nx y\ny z\n")
        with open(path) as fh:
            g = qw.load_edge_list(fh)
        assert g.node_count == 3

    def test_malformed_line_reports_line_number(self):
        with pytest.raises(qw.EdgeListParseError, match="line 2"):
            qw.load_edge_list("0 1\n0 1 2")

    def test_single_token_line_rejected(self):
        with pytest.raises(qw.EdgeListParseError):
            qw.load_edge_list("0\n")

    def test_empty_graph_rejected(self):
        with pytest.raises(qw.QwlinkError):
            qw.load_edge_list("# nothing here\n")

    def test_comment_handling(self):
        g = qw.load_edge_list("# header\n0 1\n")
        assert g.edge_count == 1
        with pytest.raises(qw.EdgeListParseError):
            qw.load_edge_list("# header\n0 1\n", skip_comments=False)

    def test_strict_mode_rejects_duplicates(self):
        with pytest.raises(qw.EdgeListParseError):
            qw.load_edge_list("0 1\n1 0", deduplicate=False)
        with pytest.raises(qw.EdgeListParseError):
            qw.load_edge_list("0 0", deduplicate=False)

    def test_reload_of_serialization_preserves_labeled_edges(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            g = gnp_graph(rng, int(rng.integers(2, 30)), 0.2)
            h = qw.load_edge_list(qw.serialize_edge_list(g))
            assert edge_label_set(h) == edge_label_set(g)
            # Isolated nodes cannot appear in edge-list form.
            connected = {g.labels[v] for v in range(g.node_count) if g.degrees[v] > 0}
            assert set(h.labels) == connected

    def test_from_edges_validation(self):
        with pytest.raises(qw.QwlinkError):
            qw.Graph.from_edges(3, [(0, 0)])
        with pytest.raises(qw.QwlinkError):
            qw.Graph.from_edges(3, [(0, 1), (1, 0)])
        with pytest.raises(qw.QwlinkError):
            qw.Graph.from_edges(2, [(0, 5)])

    def test_without_edges(self):
        g = qw.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        h = g.without_edges(np.array([[1, 2]]))
        assert h.node_count == 4
        assert h.edge_count == 2
        assert not h.has_edge(1, 2)


class TestStats:
    def test_triangle(self):
        s = qw.compute_stats(qw.load_edge_list("0 1\n1 2\n2 0"))
        assert (s.N, s.M) == (3, 3)
        assert s.k_av == 2.0
        assert s.density == 1.0
        assert (s.d_max, s.d_av) == (1, 1.0)
        assert s.C == 1.0

    def test_single_edge(self):
        s = qw.compute_stats(qw.load_edge_list("0 1"))
        assert (s.d_max, s.d_av, s.C) == (1, 1.0, 0.0)
        assert s.density == 1.0

    def test_degree_moments(self):
        g = qw.load_edge_list("0 1\n1 2")  # degrees 1, 2, 1
        s = qw.compute_stats(g)
        assert s.k2_mean == pytest.approx(6 / 3)
        assert s.k3_mean == pytest.approx(10 / 3)
        assert s.k2_mean >= s.k_av**2

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_matches_networkx(self, seed):
        rng = np.random.default_rng(seed)
        g = gnp_graph(rng, int(rng.integers(5, 40)), 0.12)
        h = to_networkx(g)
        s = qw.compute_stats(g)
        assert s.C == pytest.approx(nx.average_clustering(h), abs=1e-12)
        assert s.density == pytest.approx(nx.density(h), abs=1e-12)
        cc = h.subgraph(max(nx.connected_components(h), key=len))
        assert s.d_max == nx.diameter(cc)
        assert s.d_av == pytest.approx(nx.average_shortest_path_length(cc), abs=1e-12)

    def test_deterministic(self):
        text = "0 1\n1 2\n2 3\n3 0\n0 2"
        assert qw.compute_stats(qw.load_edge_list(text)) == qw.compute_stats(
            qw.load_edge_list(text)
        )

    def test_field_invariants_hold(self):
        rng = np.random.default_rng(71)
        for _ in range(25):
            s = qw.compute_stats(gnp_graph(rng, int(rng.integers(2, 35)), 0.2))
            assert 0.0 <= s.C <= 1.0
            assert 0.0 < s.density <= 1.0
            assert s.d_av <= s.d_max
            assert s.k2_mean >= s.k_av**2 - 1e-12


class TestCountWalks:
    def test_p3_two_steps(self):
        g = qw.load_edge_list("0 1\n1 2")
        w = qw.count_walks(g, 2)
        assert w[0, 2] == 1
        assert w[0, 0] == 1
        assert w[0, 1] == 0

    def test_k3_two_steps_vs_matrix_product(self):
        g = qw.load_edge_list("0 1\n1 2\n2 0")
        a = g.adjacency_dense()
        assert np.array_equal(qw.count_walks(g, 2), (a @ a).astype(np.int64))

    def test_identity_at_zero(self):
        g = qw.load_edge_list("0 1\n1 2")
        assert np.array_equal(qw.count_walks(g, 0), np.eye(3, dtype=np.int64))

    def test_negative_length_rejected(self):
        with pytest.raises(ValueError):
            qw.count_walks(qw.load_edge_list("0 1"), -1)

    @pytest.mark.parametrize("length", [1, 2, 3, 4, 5])
    def test_matches_matrix_power(self, length):
        rng = np.random.default_rng(100 + length)
        for _ in range(10):
            g = gnp_graph(rng, int(rng.integers(2, 50)), 0.15)
            expected = np.linalg.matrix_power(
                g.adjacency_dense().astype(np.int64), length
            )
            assert np.array_equal(qw.count_walks(g, length), expected)

    def test_two_walk_total_equals_degree_square_sum(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            g = gnp_graph(rng, int(rng.integers(2, 40)), 0.2)
            assert qw.count_walks(g, 2).sum() == (g.degrees.astype(np.int64) ** 2).sum()


class TestBipartition:
    def test_even_cycle(self):
        g = qw.load_edge_list("0 1\n1 2\n2 3\n3 0")
        color = qw.bipartition(g)
        assert color is not None
        assert color[0] == color[2] != color[1] == color[3]

    def test_triangle_not_bipartite(self):
        assert qw.bipartition(qw.load_edge_list("0 1\n1 2\n2 0")) is None

    def test_matches_networkx(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            g = gnp_graph(rng, int(rng.integers(2, 25)), 0.2)
            color = qw.bipartition(g)
            assert (color is not None) == nx.is_bipartite(to_networkx(g))
            if color is not None:
                for u, v in g.edges:
                    assert color[u] != color[v]
