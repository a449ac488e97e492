import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_aut_count, random_graph
from trifree.canon import canonical_form, canonical_graph, canonical_labelling, canonicalize, is_isomorphic, refine
from trifree.constructions import named
from trifree.graph import Graph, complete_bipartite, cycle, path, star


def shuffled(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


class TestNamedGroups:
    @pytest.mark.parametrize(
        "name, aut, orbits",
        [
            ("c4", 8, 1),
            ("c5", 10, 1),
            ("mobius8", 16, 1),
            ("petersen", 120, 1),
            ("groetzsch", 10, 3),
            ("clebsch", 1920, 1),
            ("hoffman_singleton", 252000, 1),
            ("gewirtz", 80640, 1),
            ("subdivided_k23", 4, 3),
        ],
    )
    def test_group_statistics(self, name, aut, orbits):
        report = canonicalize(named(name))
        assert report.aut_order == aut
        assert report.orbit_count == orbits
        assert report.vertex_transitive == (orbits == 1)

    def test_groetzsch_relabelled(self, rng):
        g = named("groetzsch")
        assert canonical_form(shuffled(g, rng)) == canonical_form(g)


class TestBruteForce:
    def test_aut_order_small_graphs(self, rng):
        for _ in range(150):
            g = random_graph(rng, rng.randint(1, 7), rng.random())
            assert canonicalize(g).aut_order == brute_aut_count(g)

    @pytest.mark.parametrize("g", [cycle(8), complete_bipartite(4, 4), star(7), path(8)])
    def test_aut_order_eight_vertices(self, g):
        assert canonicalize(g).aut_order == brute_aut_count(g)

    def test_orbits_are_automorphism_orbits(self):
        g = path(5)
        report = canonicalize(g)
        assert report.orbits == (0, 1, 2, 1, 0)
        assert report.orbit_count == 3


class TestInvariance:
    def test_two_hundred_random_graphs(self, rng):
        for _ in range(200):
            g = random_graph(rng, rng.randint(1, 14), rng.random())
            base = canonicalize(g)
            for _ in range(5):
                other = canonicalize(shuffled(g, rng))
                assert other.canonical_form == base.canonical_form
                assert other.aut_order == base.aut_order
                assert other.orbit_count == base.orbit_count

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 12), st.floats(0, 1), st.randoms(use_true_random=False))
    def test_canonical_graph_is_a_relabelling(self, n, p, r):
        g = random_graph(r, n, p)
        h = canonical_graph(g)
        order, _, _, _ = canonical_labelling(g)
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        assert g.relabel(pos) == h

    def test_non_isomorphic_pairs(self):
        assert not is_isomorphic(cycle(6), Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]))
        assert is_isomorphic(named("petersen"), shuffled(named("petersen"), random.Random(3)))


class TestColours:
    def test_colours_restrict_automorphisms(self):
        g = cycle(4)
        assert canonical_labelling(g, [[0], [1, 2, 3]])[2] == 2

    def test_bad_colouring(self):
        with pytest.raises(ValueError):
            canonical_labelling(cycle(4), [[0, 1]])


def test_refine_reaches_equitable_partition():
    g = path(5)
    cells, _ = refine(g.rows, [list(range(5))], [list(range(5))])
    assert sorted(map(sorted, cells)) == [[0, 4], [1, 3], [2]]
