import random
from math import gcd

import pytest

from trifree.canon import canonical_form, canonicalize
from trifree.cayley import (
    AbelianGroup,
    ConnectionSet,
    abelian_groups_of_prime_power,
    cayley_graph,
    codegree_parity_check,
    counting_feasibility,
    diameter2_condition,
    enumerate_connection_sets,
    k23_condition,
    prime_powers,
    ramanujan_nagell,
    triangle_condition,
)
from trifree.constructions import named
from trifree.graph import GraphError, has_diameter_at_most_two
from trifree.properties import has_kst, is_triangle_free, is_witness, srg_params


def cs(factors, items):
    group = AbelianGroup(factors)
    if len(factors) == 1:
        return ConnectionSet(group, frozenset(items))
    return ConnectionSet.from_strings(group, items)


CLEBSCH_SET = ((2, 2, 2, 2), ["1000", "0100", "0010", "0001", "1111"])


def random_connection_set(rng: random.Random) -> ConnectionSet:
    while True:
        factors = [rng.choice([2, 2, 3, 4, 5, 6, 7, 8]) for _ in range(rng.randint(1, 4))]
        order = 1
        for m in factors:
            order *= m
        if order <= 64:
            break
    group = AbelianGroup(factors)
    p = rng.uniform(0.05, 0.5)
    chosen = set()
    for x in range(1, group.order):
        if x in chosen:
            continue
        if rng.random() < p:
            chosen.update((x, group.neg(x)))
    return ConnectionSet(group, frozenset(chosen))


class TestGroup:
    def test_arithmetic(self):
        g = AbelianGroup([2, 3])
        assert g.order == 6
        x = g.index((1, 2))
        assert g.digits(x) == (1, 2)
        assert g.add(x, x) == g.index((0, 1))
        assert g.add(x, g.neg(x)) == 0

    def test_parse(self):
        assert AbelianGroup.parse("2,2,2,2") == AbelianGroup([2, 2, 2, 2])
        assert AbelianGroup.parse("2x6").factors == (2, 6)

    @pytest.mark.parametrize("factors", [[], [1], [4096, 2]])
    def test_rejects_bad_factors(self, factors):
        with pytest.raises(ValueError):
            AbelianGroup(factors)

    def test_connection_set_invariants(self):
        g = AbelianGroup([7])
        with pytest.raises(ValueError):
            ConnectionSet(g, frozenset({0, 1, 6}))
        with pytest.raises(ValueError):
            ConnectionSet(g, frozenset({1, 2}))

    def test_double_set(self):
        c = cs([5], {1, 4})
        assert c.doubles() == {2, 3}
        assert cs(*CLEBSCH_SET).doubles() == {0}

    def test_groups_of_prime_power(self):
        assert [g.factors for g in abelian_groups_of_prime_power(5, 2)] == [(25,), (5, 5)]
        assert len(abelian_groups_of_prime_power(2, 4)) == 5


class TestCayleyGraph:
    def test_pentagon(self):
        assert canonical_form(cayley_graph(cs([5], {1, 4}))) == canonical_form(named("c5"))

    def test_clebsch(self):
        assert canonical_form(cayley_graph(cs(*CLEBSCH_SET))) == canonical_form(named("clebsch"))

    def test_thirteen(self):
        c = cs([13], {1, 5, 8, 12})
        g = cayley_graph(c)
        assert g.edge_count() == 26 and g.degree_multiset() == {4: 13}
        assert is_witness(g, 2, 3)
        assert triangle_condition(c) and diameter2_condition(c) and k23_condition(c)

    def test_regular_and_vertex_transitive(self, rng):
        for _ in range(30):
            c = random_connection_set(rng)
            g = cayley_graph(c)
            assert set(g.degrees()) <= {c.k}
            assert canonicalize(g).orbit_count == 1

    def test_size_cap(self):
        with pytest.raises(GraphError):
            cayley_graph(ConnectionSet(AbelianGroup([1024]), frozenset({1, 1023})))


class TestConditions:
    def test_triangle_examples(self):
        assert triangle_condition(cs(*CLEBSCH_SET))
        assert not triangle_condition(cs([7], {1, 2, 5, 6}))
        assert triangle_condition(cs([7], set()))

    def test_diameter_examples(self):
        assert diameter2_condition(cs(*CLEBSCH_SET))
        assert not diameter2_condition(cs([8], {1, 7}))
        assert diameter2_condition(cs([6], {1, 2, 3, 4, 5}))

    def test_k23_examples(self):
        assert k23_condition(cs(*CLEBSCH_SET))
        assert k23_condition(cs([13], {1, 5, 8, 12}))

    def test_k23_agrees_on_every_set_in_z9(self):
        g = AbelianGroup([9])
        classes = [(1, 8), (2, 7), (3, 6), (4, 5)]
        for mask in range(1 << len(classes)):
            elems = frozenset(x for i, c in enumerate(classes) if mask >> i & 1 for x in c)
            c = ConnectionSet(g, elems)
            assert k23_condition(c) == (not has_kst(cayley_graph(c), 2, 3)[0])
        assert not k23_condition(cs([9], {1, 8, 3, 6}))

    def test_parity_examples(self):
        assert codegree_parity_check(cs(*CLEBSCH_SET)).ok
        check = codegree_parity_check(cs([5], {1, 4}))
        assert check.ok and check.odd_order_checked

    def test_elementary_two_group_parity(self, rng):
        g = AbelianGroup([2] * 5)
        for _ in range(20):
            elems = frozenset(x for x in range(1, 32) if rng.random() < 0.3)
            assert codegree_parity_check(ConnectionSet(g, elems)).ok

    def test_cross_validation_sample(self, rng):
        for _ in range(150):
            c = random_connection_set(rng)
            g = cayley_graph(c)
            assert triangle_condition(c) == is_triangle_free(g)[0]
            assert diameter2_condition(c) == has_diameter_at_most_two(g)
            assert k23_condition(c) == (not has_kst(g, 2, 3)[0])
            assert codegree_parity_check(c).ok


class TestCounting:
    def test_prime_power_orders(self):
        feasible = [n for n, _, _ in prime_powers(199) if gcd(n, 6) == 1 and counting_feasibility(n).feasible]
        assert feasible == [5, 13, 25, 41, 61, 113, 181]

    @pytest.mark.parametrize("n, k", [(5, 2), (13, 4), (25, 6)])
    def test_implied_degree(self, n, k):
        assert counting_feasibility(n) == counting_feasibility(n, k)
        assert counting_feasibility(n).k == k

    def test_seven(self):
        assert not counting_feasibility(7).feasible

    @pytest.mark.parametrize("d, ok", [(3, False), (4, True), (5, False), (6, False), (12, True)])
    def test_elementary_two_groups(self, d, ok):
        verdict = counting_feasibility(AbelianGroup([2] * d))
        assert verdict.feasible is ok
        if ok:
            assert verdict.k ** 2 + verdict.k + 2 == 2 ** (d + 1)

    def test_wrong_k(self):
        assert not counting_feasibility(13, 5).feasible

    def test_inapplicable(self):
        assert counting_feasibility(AbelianGroup([2, 6])).status == "inapplicable"

    @pytest.mark.parametrize("limit, expected", [(60, {3, 4, 5, 7, 15}), (2, set()), (7, {3, 4, 5, 7})])
    def test_ramanujan_nagell(self, limit, expected):
        assert ramanujan_nagell(limit) == expected

    def test_ramanujan_nagell_cap(self):
        with pytest.raises(ValueError):
            ramanujan_nagell(63)


def brute_force_classes(group: AbelianGroup, k: int) -> set[str]:
    classes = []
    seen = set()
    for x in range(1, group.order):
        if x not in seen:
            seen.update((x, group.neg(x)))
            classes.append({x, group.neg(x)})
    forms = set()
    for mask in range(1 << len(classes)):
        elems = frozenset().union(*(c for i, c in enumerate(classes) if mask >> i & 1))
        if len(elems) != k:
            continue
        g = cayley_graph(ConnectionSet(group, elems))
        if is_witness(g, 2, 3):
            forms.add(canonical_form(g))
    return forms


class TestEnumeration:
    def test_clebsch_is_unique(self):
        found = enumerate_connection_sets(AbelianGroup([2, 2, 2, 2]), 5)
        assert len(found) == 1
        assert found[0].canonical_form == canonical_form(named("clebsch"))
        assert found[0].aut_order == 1920

    def test_pentagon(self):
        found = enumerate_connection_sets(AbelianGroup([5]), 2)
        assert [sorted(c.connection_set.elements) for c in found] == [[1, 4]]

    @pytest.mark.parametrize("factors", [(2, 2, 2), (12,), (2, 6), (3, 3), (2, 2, 4), (15,), (16,)])
    def test_agrees_with_brute_force(self, factors):
        group = AbelianGroup(factors)
        for k in range(1, group.order):
            got = {c.canonical_form for c in enumerate_connection_sets(group, k)}
            assert got == brute_force_classes(group, k)

    def test_elementary_two_groups_are_strongly_regular(self):
        for d in (2, 3, 4, 5):
            group = AbelianGroup([2] * d)
            for k in range(1, min(group.order, 21)):
                for c in enumerate_connection_sets(group, k):
                    assert srg_params(c.graph).astuple() == (2 ** d, k, 0, 2)

    @pytest.mark.parametrize("n", [5, 13, 25])
    def test_coprime_orders_obey_counting(self, n):
        p = 5 if n in (5, 25) else 13
        a = 2 if n == 25 else 1
        for group in abelian_groups_of_prime_power(p, a):
            for k in range(1, min(n, 21)):
                for c in enumerate_connection_sets(group, k):
                    assert (k + 1) ** 2 == 2 * n - 1

    def test_caps(self):
        with pytest.raises(ValueError):
            enumerate_connection_sets(AbelianGroup([2048]), 4)
        with pytest.raises(ValueError):
            enumerate_connection_sets(AbelianGroup([64]), 21)
