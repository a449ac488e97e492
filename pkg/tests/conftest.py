import random
from itertools import combinations, permutations

import pytest

from trifree.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, passed: bool, detail: str = "") -> None:
    line = f"{'PASS' if passed else 'FAIL'}  {name}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def brute_aut_count(g: Graph) -> int:
    edges = set(g.edges())
    count = 0
    for perm in permutations(range(g.n)):
        if all(tuple(sorted((perm[u], perm[v]))) in edges for u, v in edges):
            count += 1
    return count


def brute_kst(g: Graph, s: int, t: int) -> bool:
    for S in combinations(range(g.n), s):
        common = [v for v in range(g.n) if v not in S and all(g.has_edge(v, u) for u in S)]
        if len(common) >= t:
            return True
    return False


def brute_diameter_le_2(g: Graph) -> bool:
    for u, v in combinations(range(g.n), 2):
        if not g.has_edge(u, v) and not any(g.has_edge(u, w) and g.has_edge(w, v) for w in range(g.n)):
            return False
    return True


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def census13():
    """The complete enumeration up to 13 vertices, shared across test modules."""
    from trifree.search import SearchConfig, enumerate_witnesses

    return enumerate_witnesses(SearchConfig(n_max=13))
