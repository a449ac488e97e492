from collections import Counter

import pytest

from trifree.canon import canonical_form, canonicalize
from trifree.census import published_rows
from trifree.constructions import named
from trifree.graph import Graph, cycle, girth_class, path
from trifree.properties import UnsupportedParameter, is_witness
from trifree.search import (
    OPS,
    WORKERS_ENV,
    SearchConfig,
    brute_force_witnesses,
    closure,
    default_workers,
    edge_rotation_neighbors,
    enumerate_witnesses,
    induced_witnesses,
    ryser_switch_neighbors,
)


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs, exc",
        [
            ({"n_max": 3}, ValueError),
            ({"n_max": 21}, ValueError),
            ({"n_max": 8, "n_min": 9}, ValueError),
            ({"n_max": 8, "s": 3, "t": 4}, UnsupportedParameter),
            ({"n_max": 8, "codegree_cap": False}, ValueError),
            ({"n_max": 8, "workers": 0}, ValueError),
        ],
    )
    def test_rejects(self, kwargs, exc):
        with pytest.raises(exc):
            SearchConfig(**kwargs).validate()

    def test_worker_env(self, monkeypatch):
        monkeypatch.setenv(WORKERS_ENV, "3")
        assert default_workers() == 3
        monkeypatch.setenv(WORKERS_ENV, "many")
        with pytest.raises(ValueError):
            default_workers()


class TestAgainstBruteForce:
    @pytest.mark.parametrize("t", [2, 3, 4])
    def test_small_orders(self, t):
        result = enumerate_witnesses(SearchConfig(n_max=8, t=t))
        for n in range(4, 9):
            got = sorted(canonical_form(g) for g in result.graphs[n])
            assert got == sorted(brute_force_witnesses(n, 2, t)), n

    def test_prunes_do_not_change_output(self):
        full = enumerate_witnesses(SearchConfig(n_max=11))
        bare = enumerate_witnesses(SearchConfig(n_max=11, degree_bound_prune=False, deficit_prune=False))
        assert full.graphs == bare.graphs
        assert bare.nodes >= full.nodes


class TestCensus:
    def test_counts(self, census13):
        assert census13.counts() == {4: 1, 5: 1, 6: 1, 7: 1, 8: 1, 9: 1, 10: 2, 11: 2, 12: 2, 13: 3}

    def test_rows_match(self, census13):
        assert census13.census == published_rows(13)

    def test_single_graph_rows_have_exact_groups(self, census13):
        for row in census13.census:
            if row.count == 1:
                assert row.aut_range[0] == row.aut_range[1]

    def test_thirteen(self, census13):
        assert sorted(g.edge_count() for g in census13.graphs[13]) == [24, 26, 27]

    def test_isomorph_free(self, census13):
        for graphs in census13.graphs.values():
            forms = [canonical_form(g) for g in graphs]
            assert len(forms) == len(set(forms))

    def test_emitted_graphs_are_witnesses(self, census13):
        for g in census13.all_graphs():
            assert is_witness(g, 2, 3)
            for u, v in g.non_edges():
                assert (g.rows[u] & g.rows[v]).bit_count() in (1, 2)

    def test_named_members(self, census13):
        forms = {canonical_form(g) for g in census13.all_graphs()}
        for name in ("c4", "c5", "subdivided_k23", "mobius8", "petersen", "groetzsch"):
            assert canonical_form(named(name)) in forms

    def test_output_is_canonical_and_sorted(self, census13):
        for graphs in census13.graphs.values():
            forms = [canonical_form(g) for g in graphs]
            assert forms == sorted(forms)

    def test_worker_count_does_not_matter(self):
        one = enumerate_witnesses(SearchConfig(n_max=10, workers=1))
        two = enumerate_witnesses(SearchConfig(n_max=10, workers=2))
        assert one.graphs == two.graphs
        assert one.census == two.census

    def test_n_min(self):
        result = enumerate_witnesses(SearchConfig(n_min=10, n_max=10))
        assert result.counts() == {10: 2}


class TestMoves:
    def test_rotations_are_witnesses_and_reversible(self, census13):
        for g in census13.all_graphs():
            for h in edge_rotation_neighbors(g, 2, 3):
                assert is_witness(h, 2, 3)
                assert h.edge_count() == g.edge_count()
                back = {canonical_form(x) for x in edge_rotation_neighbors(h, 2, 3)}
                assert canonical_form(g) in back

    def test_switches_preserve_degrees(self, census13):
        for g in census13.all_graphs():
            for h in ryser_switch_neighbors(g, 2, 3):
                assert is_witness(h, 2, 3)
                assert h.degree_multiset() == g.degree_multiset()

    def test_switch_on_tiny_graphs(self):
        assert ryser_switch_neighbors(path(2), 2, 3) == []
        assert ryser_switch_neighbors(Graph(4), 2, 3) == []

    def test_induced_from_petersen(self):
        found = induced_witnesses(named("petersen"), 2, 3)
        assert found
        assert all(is_witness(h, 2, 3) for h in found)
        assert canonical_form(cycle(5)) in {canonical_form(h) for h in found}

    def test_outputs_are_deduplicated(self):
        found = edge_rotation_neighbors(named("groetzsch"), 2, 3)
        forms = [canonical_form(h) for h in found]
        assert len(forms) == len(set(forms))


class TestClosure:
    def test_four_cycle(self):
        result = closure([cycle(4)], OPS, 2, 3)
        assert result.forms == {canonical_form(cycle(4))}
        assert not result.truncated

    def test_non_witness_seeds_are_dropped(self):
        assert closure([cycle(6), path(3)], OPS, 2, 3).forms == set()

    def test_petersen_induced(self):
        result = closure([named("petersen")], ["induced"], 2, 3)
        assert all(is_witness(g, 2, 3) for g in result.graphs())

    def test_budget(self):
        result = closure([named("groetzsch")], OPS, 2, 3, budget=1)
        assert result.truncated

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            closure([cycle(4)], ["flip"], 2, 3)

    def test_census_is_closed(self, census13):
        seeds = census13.all_graphs()
        result = closure(seeds, OPS, 2, 3)
        assert not result.truncated
        assert result.forms == {canonical_form(g) for g in seeds}


def test_census_rows_from_graphs(census13):
    by_n = Counter(g.n for g in census13.all_graphs())
    assert sum(r.count for r in census13.census) == sum(by_n.values())
    for g in census13.graphs[10]:
        rep = canonicalize(g)
        assert girth_class(g) in ("4", "5")
        assert rep.aut_order in (4, 120)
