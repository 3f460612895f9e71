"""Random network generators and the dynamic weighted-sampling tree."""
import numpy as np
import pytest

from didpr.generate import DpaParams, gen_dpa, gen_er, scenario_of_edge
from didpr.weighted import CumulativeWeightTree


class TestGenEr:
    def test_p_zero_no_edges(self):
        assert gen_er(10, 0.0, seed=0).num_edges == 0

    def test_p_one_complete_with_self_loops(self):
        g = gen_er(3, 1.0, seed=0)
        assert g.num_edges == 9
        assert sum(1 for s, t in g.edges() if s == t) == 3

    def test_invalid_p_rejected(self):
        with pytest.raises(ValueError):
            gen_er(10, 1.5)
        with pytest.raises(ValueError):
            gen_er(10, -0.1)

    def test_invalid_n_rejected(self):
        with pytest.raises(ValueError):
            gen_er(0, 0.5)

    def test_mean_edge_count(self):
        # each ordered pair is an independent Bernoulli(p), n^2 of them
        n, p, reps = 1000, 0.1, 100
        counts = [gen_er(n, p, seed=s).num_edges for s in range(reps)]
        sd_one = np.sqrt(n * n * p * (1 - p))
        assert abs(np.mean(counts) - n * n * p) < 3 * sd_one

    def test_deterministic(self):
        a = gen_er(200, 0.1, seed=77)
        b = gen_er(200, 0.1, seed=77)
        assert a.edges() == b.edges()


class TestDpaParams:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError):
            DpaParams(0.5, 0.4, 0.2, 1.0, 1.0, 10)

    def test_probability_range(self):
        with pytest.raises(ValueError):
            DpaParams(-0.1, 0.6, 0.5, 1.0, 1.0, 10)

    def test_deltas_must_be_positive(self):
        with pytest.raises(ValueError):
            DpaParams(0.3, 0.4, 0.3, 0.0, 1.0, 10)
        with pytest.raises(ValueError):
            DpaParams(0.3, 0.4, 0.3, 1.0, -2.0, 10)

    def test_edge_count_must_be_positive(self):
        with pytest.raises(ValueError):
            DpaParams(0.3, 0.4, 0.3, 1.0, 1.0, 0)


class TestGenDpa:
    def test_alpha_one_in_tree(self):
        g = gen_dpa(DpaParams(1.0, 0.0, 0.0, 1.0, 1.0, 50, seed=1))
        assert g.num_nodes == 51
        assert g.num_edges == 50
        # every non-seed node is born as a source of exactly one edge
        assert np.all(g.out_deg[1:] == 1)
        assert g.out_deg[0] == 0
        assert all(g.edge_labels == "a")

    def test_gamma_one_mirror(self):
        g = gen_dpa(DpaParams(0.0, 0.0, 1.0, 1.0, 1.0, 50, seed=2))
        assert g.num_nodes == 51
        assert np.all(g.in_deg[1:] == 1)

    def test_beta_one_stays_on_seed(self):
        g = gen_dpa(DpaParams(0.0, 1.0, 0.0, 1.0, 1.0, 30, seed=3))
        assert g.num_nodes == 1
        assert g.edges() == [(0, 0)] * 30
        assert all(g.edge_labels == "b")

    def test_node_count_law(self):
        g = gen_dpa(DpaParams(0.2, 0.5, 0.3, 2.0, 0.7, 2000, seed=4))
        grown = int(np.sum(g.edge_labels == "a") + np.sum(g.edge_labels == "g"))
        assert g.num_nodes == 1 + grown
        assert g.num_edges == 2000

    def test_label_frequencies(self):
        g = gen_dpa(DpaParams(0.3, 0.4, 0.3, 1.0, 1.0, 10_000, seed=5))
        freq = {c: float(np.mean(g.edge_labels == c)) for c in "abg"}
        assert abs(freq["a"] - 0.3) < 0.02
        assert abs(freq["b"] - 0.4) < 0.02
        assert abs(freq["g"] - 0.3) < 0.02

    def test_deterministic(self):
        params = dict(alpha=0.3, beta=0.4, gamma=0.3, delta_in=1.0,
                      delta_out=1.0, target_edges=500)
        a = gen_dpa(DpaParams(**params, seed=6))
        b = gen_dpa(DpaParams(**params, seed=6))
        assert a.edges() == b.edges()
        assert a.edge_labels.tolist() == b.edge_labels.tolist()

    def test_non_integer_delta_supported(self):
        g = gen_dpa(DpaParams(0.1, 0.8, 0.1, 6.078, 10.432, 300, seed=7))
        assert g.num_edges == 300


class TestScenarioOfEdge:
    def test_names(self):
        g = gen_dpa(DpaParams(0.3, 0.4, 0.3, 1.0, 1.0, 200, seed=8))
        for e in range(20):
            name = scenario_of_edge(g, e)
            assert name in ("alpha", "beta", "gamma")
            assert name[0] == {"a": "a", "b": "b", "g": "g"}[
                str(g.edge_labels[e])]

    def test_unlabeled_graph_rejected(self):
        g = gen_er(10, 0.3, seed=9)
        with pytest.raises(ValueError, match="no scenario labels"):
            scenario_of_edge(g, 0)

    def test_bad_index(self):
        g = gen_dpa(DpaParams(1.0, 0.0, 0.0, 1.0, 1.0, 5, seed=10))
        with pytest.raises(IndexError):
            scenario_of_edge(g, 5)


class TestCumulativeWeightTree:
    def test_prefix_sums_match_naive(self):
        rng = np.random.default_rng(11)
        weights = rng.random(37)
        tree = CumulativeWeightTree(37)
        for i, w in enumerate(weights):
            tree.add(i, w)
        cums = np.cumsum(weights)
        assert tree.total == pytest.approx(cums[-1], rel=1e-12)
        for i in range(37):
            assert tree.prefix_sum(i + 1) == pytest.approx(cums[i], rel=1e-12)
            assert tree.weight(i) == pytest.approx(weights[i], rel=1e-12)

    def test_incremental_updates(self):
        tree = CumulativeWeightTree(8)
        tree.add(3, 2.0)
        tree.add(3, 1.5)
        tree.add(0, 1.0)
        assert tree.weight(3) == pytest.approx(3.5)
        assert tree.total == pytest.approx(4.5)

    def test_sample_picks_owning_index(self):
        tree = CumulativeWeightTree(4)
        for i, w in enumerate([4.0, 2.0, 1.0, 3.0]):
            tree.add(i, w)
        assert tree.sample(0.0) == 0
        assert tree.sample(3.999) == 0
        assert tree.sample(4.0) == 1
        assert tree.sample(6.5) == 2
        assert tree.sample(9.999) == 3

    def test_sample_skips_zero_weight(self):
        tree = CumulativeWeightTree(5)
        tree.add(1, 2.0)
        tree.add(4, 1.0)
        seen = {tree.sample(x) for x in np.linspace(0.0, 2.999, 50)}
        assert seen == {1, 4}

    def test_preferential_frequencies(self):
        # the beta-step target draw: weight d_in + delta on fixed degrees
        degrees = np.array([3, 1, 0, 2])
        delta = 1.0
        weights = degrees + delta
        tree = CumulativeWeightTree(4)
        for i, w in enumerate(weights):
            tree.add(i, float(w))
        rng = np.random.default_rng(12)
        draws = 100_000
        counts = np.zeros(4)
        for u in rng.random(draws):
            counts[tree.sample(u * tree.total)] += 1
        expect = weights / weights.sum()
        np.testing.assert_allclose(counts / draws, expect, atol=0.01)
