"""Named graphs and the graph operations used to build new examples."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations, permutations
from math import comb
from typing import Iterator, Mapping, Sequence

from .canon import canonicalize
from .graph import (
    MAX_VERTICES,
    Graph,
    GraphError,
    QuotientMultigraph,
    cycle,
    from_graph6,
    has_diameter_at_most_two,
    induced_subgraph,
    iter_bits,
)
from .properties import find_kst, find_triangle, is_star, kst_through_pair, twin_classes

NAMES = (
    "c4",
    "c5",
    "mobius8",
    "petersen",
    "groetzsch",
    "clebsch",
    "hoffman_singleton",
    "gewirtz",
    "subdivided_k23",
)


def mobius_ladder(n: int = 8) -> Graph:
    """Cycle on ``n`` vertices plus the ``n/2`` antipodal chords."""
    if n % 2:
        raise GraphError("Moebius ladder needs an even vertex count")
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, i + n // 2) for i in range(n // 2)]
    return Graph.from_edges(n, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes)


def groetzsch() -> Graph:
    """Mycielskian of the 5-cycle."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    for i in range(5):
        edges += [(5 + i, (i + 1) % 5), (5 + i, (i - 1) % 5), (5 + i, 10)]
    return Graph.from_edges(11, edges)


def clebsch() -> Graph:
    from .cayley import AbelianGroup, ConnectionSet, cayley_graph

    group = AbelianGroup([2, 2, 2, 2])
    cs = ConnectionSet.from_strings(group, ["1000", "0100", "0010", "0001", "1111"])
    return cayley_graph(cs)


def hoffman_singleton() -> Graph:
    """Pentagons P_h and pentagrams Q_k, with P_h(i) ~ Q_k(hk + i mod 5)."""

    def p(h, i):
        return 5 * h + i

    def q(k, j):
        return 25 + 5 * k + j

    edges = []
    for h in range(5):
        for i in range(5):
            edges.append((p(h, i), p(h, (i + 1) % 5)))
            edges.append((q(h, i), q(h, (i + 2) % 5)))
    for h in range(5):
        for k in range(5):
            for i in range(5):
                edges.append((p(h, i), q(k, (h * k + i) % 5)))
    return Graph.from_edges(50, edges)


def _bundled(name: str) -> Graph:
    text = resources.files("trifree").joinpath("data", f"{name}.g6").read_text()
    return from_graph6(text.strip())


def named(name: str) -> Graph:
    builders = {
        "c4": lambda: cycle(4),
        "c5": lambda: cycle(5),
        "mobius8": mobius_ladder,
        "petersen": petersen,
        "groetzsch": groetzsch,
        "clebsch": clebsch,
        "hoffman_singleton": hoffman_singleton,
        "gewirtz": lambda: _bundled("gewirtz"),
        "subdivided_k23": lambda: _bundled("subdivided_k23"),
    }
    key = name.lower().replace("-", "_")
    if key not in builders:
        raise KeyError(f"unknown graph name {name!r}; choose from {', '.join(NAMES)}")
    return builders[key]()


def kneser(n: int, k: int) -> Graph:
    if not (k >= 1 and n >= 2 * k):
        raise ValueError("need n >= 2k >= 2")
    if comb(n, k) > MAX_VERTICES:
        raise GraphError(f"Kneser graph K({n},{k}) has more than {MAX_VERTICES} vertices")
    subsets = [sum(1 << x for x in c) for c in combinations(range(n), k)]
    edges = [(i, j) for i, a in enumerate(subsets) for j in range(i + 1, len(subsets)) if not a & subsets[j]]
    return Graph.from_edges(len(subsets), edges)


# --- cycle expansions ------------------------------------------------------


class InvalidExpansion(ValueError):
    def __init__(self, pair: tuple[int, int], message: str):
        super().__init__(f"matching for pair {pair}: {message}")
        self.pair = pair


def _pair_graph(length: int, matching: Sequence[int]) -> Graph:
    edges = [(a, (a + 1) % length) for a in range(length)]
    edges += [(length + b, length + (b + 1) % length) for b in range(length)]
    edges += [(a, length + matching[a]) for a in range(length)]
    return Graph.from_edges(2 * length, edges)


@lru_cache(maxsize=None)
def _target_form(length: int) -> str:
    target = mobius_ladder(8) if length == 4 else petersen()
    return canonicalize(target).canonical_form


def matching_is_valid(length: int, matching: Sequence[int]) -> bool:
    if length not in (4, 5):
        raise ValueError("cycle length must be 4 or 5")
    if sorted(matching) != list(range(length)):
        return False
    return canonicalize(_pair_graph(length, matching)).canonical_form == _target_form(length)


@lru_cache(maxsize=None)
def enumerate_valid_matchings(length: int) -> tuple[tuple[int, ...], ...]:
    """Bijections between two labelled cycles whose union is V8 (length 4) or Petersen (length 5)."""
    return tuple(m for m in permutations(range(length)) if matching_is_valid(length, m))


@dataclass
class ExpansionSpec:
    k: int
    l: int
    cycle_length: int
    matchings: Mapping[tuple[int, int], Sequence[int]] = field(default_factory=dict)

    @classmethod
    def uniform(cls, k: int, l: int, cycle_length: int, choice: int = 0) -> "ExpansionSpec":
        m = enumerate_valid_matchings(cycle_length)[choice]
        return cls(k, l, cycle_length, {(i, j): m for i in range(k) for j in range(l)})

    def validate(self) -> None:
        if self.cycle_length not in (4, 5):
            raise ValueError("cycle length must be 4 or 5")
        if self.k < 1 or self.l < 1:
            raise ValueError("part sizes must be positive")
        for i in range(self.k):
            for j in range(self.l):
                m = self.matchings.get((i, j))
                if m is None:
                    raise InvalidExpansion((i, j), "missing")
                if sorted(m) != list(range(self.cycle_length)):
                    raise InvalidExpansion((i, j), "not a bijection")
                if not matching_is_valid(self.cycle_length, m):
                    target = "V8" if self.cycle_length == 4 else "Petersen"
                    raise InvalidExpansion((i, j), f"union of the two cycles is not {target}")


def cycle_expansion(spec: ExpansionSpec) -> Graph:
    """Expand each vertex of K_{k,l} to a cycle and each edge to a matching.

    C-cycle ``i`` occupies vertices ``L*i .. L*i+L-1``; D-cycle ``j`` follows
    all C-cycles.
    """
    spec.validate()
    L = spec.cycle_length
    n = L * (spec.k + spec.l)
    if n > MAX_VERTICES:
        raise GraphError("expansion too large")
    edges = []
    for c in range(spec.k + spec.l):
        edges += [(L * c + a, L * c + (a + 1) % L) for a in range(L)]
    for i in range(spec.k):
        for j in range(spec.l):
            m = spec.matchings[(i, j)]
            edges += [(L * i + a, L * (spec.k + j) + m[a]) for a in range(L)]
    return Graph.from_edges(n, edges)


# --- twins, blow-ups, dominating vertices ---------------------------------


def blow_up(g: Graph, v: int, r: int) -> Graph:
    """Replace ``v`` by ``r`` pairwise non-adjacent copies; new copies are appended."""
    if r < 1:
        raise ValueError("r must be at least 1")
    n = g.n + r - 1
    if n > MAX_VERTICES:
        raise GraphError(f"blow-up exceeds {MAX_VERTICES} vertices")
    if r == 1:
        return g
    rows = list(g.rows) + [0] * (r - 1)
    copies = 0
    for c in range(g.n, n):
        copies |= 1 << c
    for u in iter_bits(g.rows[v]):
        rows[u] |= copies
    for c in range(g.n, n):
        rows[c] = g.rows[v]
    return Graph(n, rows, check=False)


def twin_quotient(g: Graph, threshold: int | None = None) -> Graph:
    """Identify twin classes: all of them, or only those of size >= ``threshold``."""
    keep = []
    for cls in twin_classes(g):
        if threshold is None or len(cls) >= threshold:
            keep.append(cls[0])
        else:
            keep.extend(cls)
    return induced_subgraph(g, keep)


def add_dominating_vertex(g: Graph) -> Graph:
    if g.n + 1 > MAX_VERTICES:
        raise GraphError(f"result exceeds {MAX_VERTICES} vertices")
    rows = [row | 1 << g.n for row in g.rows] + [(1 << g.n) - 1]
    return Graph(g.n + 1, rows, check=False)


# --- double covers --------------------------------------------------------


def validate_involution(pi: Sequence[int], n: int) -> None:
    if len(pi) != n or sorted(pi) != list(range(n)):
        raise ValueError("involution must be a permutation of the vertices")
    for v in range(n):
        if pi[v] == v:
            raise ValueError(f"involution fixes vertex {v}")
        if pi[pi[v]] != v:
            raise ValueError(f"permutation is not an involution at vertex {v}")


def double_cover_quotient(g: Graph, pi: Sequence[int]) -> QuotientMultigraph:
    """Identify ``v`` with ``pi[v]``, keeping loops and multiple edges.

    Each quotient edge stands for an edge orbit ``{e, pi(e)}``; an edge
    ``v pi(v)`` becomes a loop. The result records whether ``pi`` is an
    automorphism of ``g``.
    """
    validate_involution(pi, g.n)
    orbit_of = {}
    for v in range(g.n):
        if v not in orbit_of:
            idx = len(orbit_of) // 2
            orbit_of[v] = idx
            orbit_of[pi[v]] = idx
    between: dict[tuple[int, int], int] = {}
    for u, v in g.edges():
        a, b = orbit_of[u], orbit_of[v]
        key = (a, b) if a <= b else (b, a)
        between[key] = between.get(key, 0) + 1
    mult = {}
    for (a, b), count in between.items():
        mult[(a, b)] = count if a == b else (count + 1) // 2
    is_aut = all(g.has_edge(pi[u], pi[v]) for u, v in g.edges())
    return QuotientMultigraph(g.n // 2, mult, from_automorphism=is_aut)


def _lift_options(q: QuotientMultigraph) -> tuple[list[tuple[int, int]], list[tuple[tuple[int, int], ...]]]:
    """Forced lift edges and the binary choices (parallel vs crossed)."""
    forced = []
    choices = []
    for (a, b), k in sorted(q.mult.items()):
        if a == b:
            forced.append((2 * a, 2 * a + 1))
        elif k >= 2:
            forced += [(2 * a, 2 * b), (2 * a + 1, 2 * b + 1), (2 * a, 2 * b + 1), (2 * a + 1, 2 * b)]
        else:
            choices.append((((2 * a, 2 * b), (2 * a + 1, 2 * b + 1)), ((2 * a, 2 * b + 1), (2 * a + 1, 2 * b))))
    return forced, choices


def expand_double_cover(q: QuotientMultigraph, filter: tuple[int, int] | None = None) -> Iterator[Graph]:
    """Enumerate lifts of ``q``; orbit ``i`` lifts to vertices ``2i`` and ``2i+1``.

    With ``filter=(s, t)`` only triangle-free K_{s,t}-free diameter-2 lifts are
    produced, pruning partial lifts that already contain a triangle or K_{s,t}.
    """
    q.check_double_cover_bounds()
    n = 2 * q.m
    if n > MAX_VERTICES:
        raise GraphError(f"lift exceeds {MAX_VERTICES} vertices")
    forced, choices = _lift_options(q)
    rows = [0] * n
    for u, v in forced:
        rows[u] |= 1 << v
        rows[v] |= 1 << u

    def bad(u: int, v: int) -> bool:
        if rows[u] & rows[v]:
            return True
        if filter is None:
            return False
        return kst_through_pair(rows, u, v, *filter) is not None

    if filter is not None:
        base = Graph(n, rows, check=False)
        if find_triangle(base) or find_kst(base, *filter):
            return

    def rec(i: int) -> Iterator[Graph]:
        if i == len(choices):
            g = Graph(n, list(rows), check=False)
            if filter is None or (has_diameter_at_most_two(g) and not is_star(g)):
                yield g
            return
        for option in choices[i]:
            added = []
            ok = True
            for u, v in option:
                if filter is not None and bad(u, v):
                    ok = False
                    break
                rows[u] |= 1 << v
                rows[v] |= 1 << u
                added.append((u, v))
            if ok:
                yield from rec(i + 1)
            for u, v in added:
                rows[u] &= ~(1 << v)
                rows[v] &= ~(1 << u)

    yield from rec(0)


def lift_count(q: QuotientMultigraph) -> int:
    return 2 ** len(_lift_options(q)[1])
