import numpy as np
import pytest

import qwlink as qw
from qwlink.baselines import lo_neumann, three_path_scores, two_path_scores
from helpers import gnp_graph, random_bipartite

K2 = qw.Graph.from_edges(2, [(0, 1)])
P3 = qw.Graph.from_edges(3, [(0, 1), (1, 2)])
P4 = qw.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
C4 = qw.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


class TestRaL2:
    def test_p3_single_two_path(self):
        assert qw.ra_l2(P3).values[0, 2] == pytest.approx(0.5)

    def test_sums_inverse_degrees_of_common_neighbors(self):
        # 0 and 1 share z1 (degree 2) and z2 (degree 3).
        g = qw.Graph.from_edges(5, [(0, 2), (1, 2), (0, 3), (1, 3), (3, 4)])
        assert qw.ra_l2(g).values[0, 1] == pytest.approx(1 / 2 + 1 / 3)

    def test_k2_has_no_two_paths(self):
        values = qw.ra_l2(K2).values
        assert values[0, 1] == 0.0

    def test_unnormalized_equals_two_walk_counts(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            g = gnp_graph(rng, int(rng.integers(2, 50)), 0.2)
            assert np.array_equal(two_path_scores(g, 0.0), qw.count_walks(g, 2))


class TestL3:
    def test_p4_normalized_three_path(self):
        assert qw.l3(P4).values[0, 3] == pytest.approx(0.5)

    def test_c4_same_part_is_zero(self):
        assert qw.l3(C4).values[0, 2] == 0.0

    def test_unnormalized_equals_three_walk_counts(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            g = gnp_graph(rng, int(rng.integers(2, 50)), 0.2)
            assert np.array_equal(three_path_scores(g, 0.0), qw.count_walks(g, 3))


class TestLo:
    def test_k2_closed_form(self):
        assert qw.lo(K2, 1.0).values[0, 1] == pytest.approx(0.5)

    def test_large_alpha_behaves_like_cubed_adjacency(self):
        rng = np.random.default_rng(41)
        g = gnp_graph(rng, 20, 0.25)
        a3 = np.linalg.matrix_power(g.adjacency_dense(), 3)
        alpha = 1e8
        assert qw.lo(g, alpha).values == pytest.approx(a3 / alpha, rel=1e-5, abs=1e-12)

    def test_matches_neumann_series(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            g = gnp_graph(rng, int(rng.integers(3, 40)), 0.2)
            norm = np.linalg.norm(g.adjacency_dense(), 2)
            alpha = 4.0 * norm**2
            direct = qw.lo(g, alpha).values
            series = lo_neumann(g, alpha)
            assert np.abs(direct - series).max() <= 1e-8

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            qw.lo(K2, 0.0)

    def test_series_diverges_for_tiny_alpha(self):
        g = qw.Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
        with pytest.raises(qw.NumericalError):
            lo_neumann(g, 1e-3, max_terms=50)


class TestChL2:
    def test_p3_lone_common_neighbor(self):
        assert qw.ch_l2(P3).values[0, 2] == pytest.approx(1.0)

    def test_internally_linked_community(self):
        # Common neighbors z1, z2 of (0, 1) joined by an edge, nothing else.
        g = qw.Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        assert qw.ch_l2(g).values[0, 1] == pytest.approx(4.0)

    def test_external_pendant_halves_the_term(self):
        g = qw.Graph.from_edges(4, [(0, 2), (1, 2), (2, 3)])
        assert qw.ch_l2(g).values[0, 1] == pytest.approx(0.5)


class TestChL3:
    def test_p4_single_internal_path(self):
        assert qw.ch_l3(P4).values[0, 3] == pytest.approx(2.0)

    def test_c4_same_part_is_zero(self):
        assert qw.ch_l3(C4).values[0, 2] == 0.0

    def test_two_disjoint_paths_without_externals(self):
        # i=0, j=5 joined by 0-1-2-5 and 0-3-4-5; every intermediate has one
        # in-community link and no external ones, so each path weighs 2.
        g = qw.Graph.from_edges(6, [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)])
        assert qw.ch_l3(g).values[0, 5] == pytest.approx(4.0)

    def test_external_links_damp_the_score(self):
        base = qw.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        with_pendant = qw.Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
        assert qw.ch_l3(with_pendant).values[0, 3] < qw.ch_l3(base).values[0, 3]


class TestSharedInvariants:
    @pytest.mark.parametrize("method", ["ra-l2", "ch-l2", "l3", "ch-l3"])
    def test_symmetric_and_nonnegative(self, method):
        rng = np.random.default_rng(47)
        g = gnp_graph(rng, 25, 0.2)
        sm = qw.compute_scores(g, qw.MethodSpec(method))
        assert np.array_equal(sm.values, sm.values.T)
        assert sm.values.min() >= 0.0

    def test_lo_symmetric_and_finite(self):
        rng = np.random.default_rng(53)
        g = gnp_graph(rng, 25, 0.2)
        sm = qw.lo(g, 2e-2)
        assert np.abs(sm.values - sm.values.T).max() <= 1e-12
        assert np.all(np.isfinite(sm.values))

    @pytest.mark.parametrize("seed", range(3))
    def test_bipartite_parity_structure(self, seed):
        rng = np.random.default_rng(60 + seed)
        g, side = random_bipartite(rng, 4, 5, 0.5)
        cross = side[:, None] != side[None, :]
        off_diag = ~np.eye(g.node_count, dtype=bool)
        for method in ("l3", "ch-l3"):
            vals = qw.compute_scores(g, qw.MethodSpec(method)).values
            assert np.abs(vals[~cross & off_diag]).max() == 0.0
        vals = qw.lo(g, 0.5).values
        assert np.abs(vals[~cross & off_diag]).max() <= 1e-12
        for method in ("ra-l2", "ch-l2"):
            vals = qw.compute_scores(g, qw.MethodSpec(method)).values
            assert np.abs(vals[cross]).max() == 0.0
