"""Graph storage, degree bookkeeping, sampling, swaps, and file IO."""
import numpy as np
import pytest
from scipy import stats

from didpr.generate import gen_er
from didpr.graph import (
    DirectedGraph,
    GraphFormatError,
    degree_pair_dist,
    read_edge_labels,
    read_edge_list,
    sample_edge_pair,
    swap_edges,
    write_edge_labels,
    write_edge_list,
)


def graph_from_pairs(num_nodes, pairs, labels=None):
    src = [s for s, _ in pairs]
    dst = [t for _, t in pairs]
    return DirectedGraph.from_edges(num_nodes, src, dst, edge_labels=labels)


class TestDirectedGraph:
    def test_degrees_recomputed_from_edges(self):
        g = graph_from_pairs(4, [(0, 1), (0, 2), (2, 2), (3, 0)])
        assert g.out_deg.tolist() == [2, 0, 1, 1]
        assert g.in_deg.tolist() == [1, 1, 2, 0]
        assert g.num_edges == 4
        assert g.degrees_consistent()

    def test_degree_sums_match_edge_count(self):
        g = gen_er(50, 0.2, seed=3)
        assert int(g.out_deg.sum()) == g.num_edges
        assert int(g.in_deg.sum()) == g.num_edges

    def test_endpoint_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            graph_from_pairs(2, [(0, 5)])
        with pytest.raises(ValueError):
            graph_from_pairs(2, [(-1, 0)])

    def test_copy_is_independent(self):
        g = graph_from_pairs(3, [(0, 1), (1, 2)])
        h = g.copy()
        swap_edges(h, 0, 1)
        assert g.edges() == [(0, 1), (1, 2)]
        assert h.edges() != g.edges()


class TestDegreePairDist:
    def test_single_edge_two_nodes(self):
        g = graph_from_pairs(2, [(0, 1)])
        nu = degree_pair_dist(g)
        assert nu.entries == {(1, 0): 0.5, (0, 1): 0.5}

    def test_regular_circulant_point_mass(self):
        # node i points to i+1 and i+2 (mod 6): out = in = 2 everywhere
        n = 6
        pairs = [(i, (i + k) % n) for i in range(n) for k in (1, 2)]
        nu = degree_pair_dist(graph_from_pairs(n, pairs))
        assert nu.entries == {(2, 2): 1.0}

    def test_entries_sum_to_one_and_count_isolated_nodes(self):
        g = graph_from_pairs(5, [(0, 1)])  # nodes 2..4 isolated
        nu = degree_pair_dist(g)
        assert nu.entries[(0, 0)] == pytest.approx(3 / 5)
        assert sum(nu.entries.values()) == pytest.approx(1.0, abs=1e-12)

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError, match="empty graph"):
            degree_pair_dist(DirectedGraph.from_edges(0, [], []))

    def test_er_out_marginal_binomial(self):
        # Each node draws n Bernoulli(p) targets (self included), so the
        # out-degree marginal is Binomial(n, p).  Checked per bin at three
        # standard deviations, restricted to bins expecting at least five
        # nodes so the normal approximation is meaningful.
        n, p = 1000, 0.1
        g = gen_er(n, p, seed=42)
        marg = degree_pair_dist(g).marginal_out()
        checked = 0
        for d in range(n + 1):
            pmf = stats.binom.pmf(d, n, p)
            expected = n * pmf
            if expected < 5.0:
                continue
            checked += 1
            observed = n * marg.get(d, 0.0)
            sd = np.sqrt(n * pmf * (1.0 - pmf))
            assert abs(observed - expected) <= 3.0 * sd, f"degree bin {d}"
        assert checked > 30


class TestSampleEdgePair:
    def test_two_edges_forced(self):
        g = graph_from_pairs(2, [(0, 1), (1, 0)])
        rng = np.random.default_rng(0)
        for _ in range(200):
            assert sorted(sample_edge_pair(g, rng)) == [0, 1]

    def test_distinct_indices(self):
        g = gen_er(20, 0.2, seed=1)
        rng = np.random.default_rng(2)
        for _ in range(500):
            e1, e2 = sample_edge_pair(g, rng)
            assert e1 != e2
            assert 0 <= e1 < g.num_edges
            assert 0 <= e2 < g.num_edges

    def test_uniform_over_unordered_pairs(self):
        g = graph_from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        rng = np.random.default_rng(0)
        draws = 100_000
        freq: dict = {}
        for _ in range(draws):
            key = tuple(sorted(sample_edge_pair(g, rng)))
            freq[key] = freq.get(key, 0) + 1
        assert len(freq) == 6
        for count in freq.values():
            assert abs(count / draws - 1 / 6) < 0.01

    def test_single_edge_rejected(self):
        g = graph_from_pairs(2, [(0, 1)])
        with pytest.raises(ValueError):
            sample_edge_pair(g, np.random.default_rng(0))


class TestSwapEdges:
    def test_targets_exchange(self):
        g = graph_from_pairs(4, [(0, 1), (2, 3)])
        swap_edges(g, 0, 1)
        assert g.edges() == [(0, 3), (2, 1)]

    def test_shared_target_is_identity(self):
        g = graph_from_pairs(3, [(0, 1), (2, 1)])
        swap_edges(g, 0, 1)
        assert sorted(g.edges()) == [(0, 1), (2, 1)]

    def test_degrees_bit_identical(self):
        g = gen_er(30, 0.2, seed=9)
        out0, in0 = g.out_deg.copy(), g.in_deg.copy()
        rng = np.random.default_rng(4)
        for _ in range(200):
            e1, e2 = sample_edge_pair(g, rng)
            swap_edges(g, e1, e2)
        assert np.array_equal(g.out_deg, out0)
        assert np.array_equal(g.in_deg, in0)
        assert g.degrees_consistent()

    def test_nu_invariant_under_swaps(self):
        g = gen_er(30, 0.2, seed=10)
        nu0 = degree_pair_dist(g)
        rng = np.random.default_rng(5)
        for _ in range(100):
            swap_edges(g, *sample_edge_pair(g, rng))
        assert degree_pair_dist(g).entries == nu0.entries

    def test_same_index_rejected(self):
        g = graph_from_pairs(2, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            swap_edges(g, 1, 1)

    def test_out_of_range_rejected(self):
        g = graph_from_pairs(2, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            swap_edges(g, 0, 2)


class TestEdgeListIO:
    def test_plain_two_edges(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("0 1\n1 2\n")
        g = read_edge_list(path)
        assert g.num_nodes == 3
        assert g.edges() == [(0, 1), (1, 2)]

    def test_comment_and_self_loop(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("% comment\n0 0\n")
        g = read_edge_list(path)
        assert g.num_nodes == 1
        assert g.edges() == [(0, 0)]

    def test_nodes_header_preserves_isolated(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# nodes=5\n0 1\n")
        assert read_edge_list(path).num_nodes == 5

    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 1\n0\n")
        with pytest.raises(GraphFormatError, match=r"bad\.txt:2"):
            read_edge_list(path)

    def test_non_integer_token(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 x\n")
        with pytest.raises(GraphFormatError, match=r":1"):
            read_edge_list(path)

    def test_negative_id(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 1\n-1 2\n")
        with pytest.raises(GraphFormatError, match=r":2"):
            read_edge_list(path)

    def test_declared_node_count_too_small(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# nodes=2\n0 5\n")
        with pytest.raises(GraphFormatError):
            read_edge_list(path)

    def test_round_trip(self, tmp_path):
        g = gen_er(40, 0.1, seed=6)
        path = tmp_path / "g.txt"
        write_edge_list(g, path)
        assert "# nodes=40" in path.read_text().splitlines()[0]
        h = read_edge_list(path)
        assert h.num_nodes == g.num_nodes
        assert h.edges() == g.edges()
        assert np.array_equal(h.out_deg, g.out_deg)

    def test_label_sidecar_round_trip(self, tmp_path):
        labels = np.array(["a", "b", "g", "b"])
        g = graph_from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)], labels)
        path = tmp_path / "g.labels"
        write_edge_labels(g, path)
        back = read_edge_labels(path, g.num_edges)
        assert back.tolist() == labels.tolist()

    def test_label_count_mismatch(self, tmp_path):
        path = tmp_path / "g.labels"
        path.write_text("a\nb\n")
        with pytest.raises(GraphFormatError):
            read_edge_labels(path, 3)

    def test_unknown_label_rejected(self, tmp_path):
        path = tmp_path / "g.labels"
        path.write_text("a\nz\n")
        with pytest.raises(GraphFormatError):
            read_edge_labels(path, 2)
