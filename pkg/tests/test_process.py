import math
import random

import pytest

from conftest import random_graph
from trifree.constructions import named
from trifree.graph import Graph, cycle, induced_subgraph, is_connected, has_diameter_at_most_two
from trifree.properties import find_kst, is_triangle_free, is_edge_maximal_triangle_free
from trifree.process import (
    PUBLISHED_PROBE_ANCHOR,
    brute_force_diameter2,
    diameter2_threshold,
    expected_uncovered_pairs,
    experiment,
    max_diameter2_subgraph,
    run_process,
    trial_seeds,
    verify_certificate,
)


class TestRunProcess:
    @pytest.mark.parametrize("seed", range(10))
    def test_four_vertices(self, seed):
        trace = run_process(4, 3, 4, seed)
        assert is_edge_maximal_triangle_free(trace.graph)

    def test_free_and_saturated(self):
        for seed in range(100):
            trace = run_process(50, 2, 3, seed)
            assert is_triangle_free(trace.graph)[0]
            assert find_kst(trace.graph, 2, 3) is None
            assert verify_certificate(trace)

    def test_connected(self):
        for seed in range(100):
            g = run_process(30, 2, 3, seed).graph
            assert g.edge_count() >= g.n - 1
            assert is_connected(g)

    def test_final_graph_is_the_accepted_edges(self):
        trace = run_process(40, 3, 4, 5)
        assert trace.prefix_graph(len(trace.accepted)) == trace.graph
        assert trace.rejected + len(trace.accepted) == 40 * 39 // 2

    def test_prefixes_stay_free(self):
        rng = random.Random(7)
        for seed in range(5):
            trace = run_process(40, 3, 4, seed)
            for m in sorted(rng.sample(range(len(trace.accepted) + 1), 10)):
                g = trace.prefix_graph(m)
                assert is_triangle_free(g)[0]
                assert find_kst(g, 3, 4) is None

    def test_reproducible(self):
        a = run_process(60, 2, 3, 99)
        b = run_process(60, 2, 3, 99)
        assert a.accepted == b.accepted
        assert a.permutation_id == b.permutation_id
        assert run_process(60, 2, 3, 100).permutation_id != a.permutation_id

    def test_tampered_certificate_fails(self):
        trace = run_process(20, 2, 3, 1)
        key = next(iter(trace.certificate))
        trace.certificate[key] = ("triangle", (key[0],))
        assert not verify_certificate(trace)

    @pytest.mark.parametrize("n, s, t", [(3, 2, 3), (513, 2, 3), (10, 3, 2), (10, 1, 3)])
    def test_rejects(self, n, s, t):
        with pytest.raises(ValueError):
            run_process(n, s, t, 0)


class TestFormulas:
    def test_threshold(self):
        assert diameter2_threshold(100) == pytest.approx(math.sqrt(1e6 * math.log(100) / 2), rel=1e-12)
        assert round(diameter2_threshold(100)) == 1517
        assert diameter2_threshold(2) == pytest.approx(1.665, abs=0.001)
        values = [diameter2_threshold(n) for n in range(2, 300)]
        assert values == sorted(values)

    def test_uncovered_pairs(self):
        for n in (10, 100, 1000):
            assert expected_uncovered_pairs(n, diameter2_threshold(n)) == pytest.approx(0.5)
        assert expected_uncovered_pairs(40, 0) == 800
        assert expected_uncovered_pairs(100, 1000) == pytest.approx(0.5e4 * math.exp(-4), rel=1e-12)
        assert expected_uncovered_pairs(100, 1000) == pytest.approx(91.6, abs=0.05)

    def test_rejects(self):
        with pytest.raises(ValueError):
            diameter2_threshold(1)
        with pytest.raises(ValueError):
            expected_uncovered_pairs(10, -1)


class TestProbe:
    def test_petersen(self):
        result = max_diameter2_subgraph(named("petersen"))
        assert result.order == 10 and result.exact

    def test_hexagon(self):
        assert max_diameter2_subgraph(cycle(6)).order == 3
        assert brute_force_diameter2(cycle(6)) == 3

    def test_exact_matches_brute_force(self, rng):
        for _ in range(50):
            g = random_graph(rng, rng.randint(1, 12), rng.uniform(0.1, 0.5))
            result = max_diameter2_subgraph(g, exact_limit=12)
            assert result.exact
            assert result.order == brute_force_diameter2(g)
            assert has_diameter_at_most_two(induced_subgraph(g, result.vertices))

    def test_heuristic_is_a_lower_bound(self, rng):
        for _ in range(30):
            g = random_graph(rng, rng.randint(2, 11), rng.uniform(0.1, 0.4))
            exact = max_diameter2_subgraph(g, exact_limit=12)
            heuristic = max_diameter2_subgraph(g, exact_limit=0)
            assert not heuristic.exact
            assert heuristic.order <= exact.order
            assert has_diameter_at_most_two(induced_subgraph(g, heuristic.vertices))

    def test_budget_falls_back(self):
        g = run_process(12, 2, 3, 3).graph
        assert not max_diameter2_subgraph(g, exact_limit=12, budget=1).exact

    def test_deterministic(self):
        g = run_process(80, 3, 4, 11).graph
        assert max_diameter2_subgraph(g, seed=4) == max_diameter2_subgraph(g, seed=4)

    def test_single_vertex(self):
        assert max_diameter2_subgraph(Graph(1)).order == 1


class TestExperiment:
    def test_summary(self):
        summary = experiment(100, 2, 3, trials=20, seed=1)
        rec = summary.to_record()
        assert summary.all_saturated
        assert rec["trials"] == 20
        assert rec["edges_min"] <= rec["edges_mean"] <= rec["edges_max"]
        assert sum(rec["probe_orders"].values()) == 20
        assert rec["probe_above_anchor"] == sum(
            c for k, c in rec["probe_orders"].items() if int(k) > PUBLISHED_PROBE_ANCHOR
        )

    def test_same_seed_same_summary(self):
        a = experiment(60, 3, 4, trials=4, seed=42)
        b = experiment(60, 3, 4, trials=4, seed=42)
        assert a.to_record() == b.to_record()
        assert [r.to_record() for r in a.trials] == [r.to_record() for r in b.trials]

    def test_workers_do_not_change_results(self):
        a = experiment(40, 2, 3, trials=4, seed=3, workers=1)
        b = experiment(40, 2, 3, trials=4, seed=3, workers=2)
        assert [r.to_record() for r in a.trials] == [r.to_record() for r in b.trials]

    def test_without_probe(self):
        summary = experiment(30, 2, 3, trials=2, seed=0, probe=False)
        assert all(r.probe_order is None for r in summary.trials)
        assert summary.to_record()["probe_orders"] == {}

    def test_trial_seeds(self):
        assert trial_seeds(5, 3) == trial_seeds(5, 3)
        assert len(set(trial_seeds(5, 50))) == 50

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            experiment(10, 2, 3, trials=0, seed=0)
