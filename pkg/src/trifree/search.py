"""Exhaustive enumeration of witnesses and closure under local graph moves.

Enumeration is rooted at a vertex ``r`` of maximum degree ``D``. Its
neighbourhood ``A`` is an independent set of size ``D``; every other vertex
has between 1 and ``t-1`` neighbours in ``A`` (diameter two and the co-degree
cap with ``r``). Starting from the star on ``r`` and ``A``, the remaining
vertices are added one at a time with canonical augmentation: a child is kept
only if its new vertex is the canonical deletion vertex, so each rooted
structure is produced once. Completed graphs are deduplicated by their
unrooted canonical form.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from multiprocessing import Pool
from typing import Callable, Iterable, Iterator, Sequence

from .canon import canonical_labelling, canonicalize
from .census import CensusRow, summarise
from .graph import Graph, from_graph6, induced_subgraph, iter_bits, to_graph6
from .properties import UnsupportedParameter, degree_bound, is_witness

WORKERS_ENV = "TRIFREE_WORKERS"
OPS = ("rotation", "switch", "induced")


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {value!r}") from None


@dataclass
class SearchConfig:
    n_max: int
    s: int = 2
    t: int = 3
    n_min: int = 4
    workers: int = 1
    degree_bound_prune: bool = True
    deficit_prune: bool = True
    codegree_cap: bool = True

    def validate(self) -> None:
        if not 4 <= self.n_max <= 20:
            raise ValueError("n_max must lie in 4..20")
        if not 4 <= self.n_min <= self.n_max:
            raise ValueError("n_min must lie in 4..n_max")
        if self.s != 2:
            raise UnsupportedParameter("exhaustive enumeration supports s = 2 only")
        if self.t < 2:
            raise ValueError("t must be at least 2")
        if not self.codegree_cap:
            raise ValueError("the co-degree cap defines the search space and cannot be disabled")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass
class EnumerationResult:
    graphs: dict[int, list[Graph]]
    census: list[CensusRow]
    nodes: int = 0

    def counts(self) -> dict[int, int]:
        return {n: len(gs) for n, gs in sorted(self.graphs.items())}

    def all_graphs(self) -> list[Graph]:
        return [g for n in sorted(self.graphs) for g in self.graphs[n]]


def _min_degree_needed(delta: int, t: int) -> int:
    d = 1
    while degree_bound(d, t) < delta:
        d += 1
    return d


class _RootedSearch:
    """Search for witnesses on exactly ``n`` vertices whose maximum degree is ``delta``."""

    def __init__(self, n: int, delta: int, t: int, *, degree_prune: bool = True, deficit_prune: bool = True):
        self.n = n
        self.delta = delta
        self.t = t
        self.mask_a = ((1 << (delta + 1)) - 1) ^ 1
        self.delta_min = _min_degree_needed(delta, t) if degree_prune else 1
        self.deficit_prune = deficit_prune
        self.found: set[str] = set()
        self.nodes = 0

    # -- node generation ---------------------------------------------------

    def root(self) -> list[int]:
        d = self.delta
        rows = [self.mask_a] + [1] * d
        return rows

    def extensions(self, rows: list[int], required: int = 0) -> Iterator[int]:
        """Neighbourhoods ``T`` for a new vertex, as bitmasks over current vertices.

        ``T`` meets ``A`` in 1 to ``t-1`` vertices, is independent, leaves every
        degree at most ``D`` and keeps every co-degree at most ``t-1``. Only
        supersets of ``required`` are produced.
        """
        t = self.t
        delta = self.delta
        m = len(rows)
        open_a = [a for a in range(1, delta + 1) if rows[a].bit_count() < delta]
        open_r = [v for v in range(delta + 1, m) if rows[v].bit_count() < delta]
        limit = t - 2  # largest co-degree a pair in T may already have
        top = t - 2

        def add(hits: list[int], rv: int) -> list[int]:
            # hits[k] holds the vertices with more than k neighbours in T
            new = list(hits)
            for k in range(top, 0, -1):
                new[k] |= new[k - 1] & rv
            new[0] |= rv
            return new

        def admissible(v: int, chosen: list[int], tmask: int, hits: list[int]) -> bool:
            rv = rows[v]
            if rv & tmask or rv & hits[top]:
                return False
            return all((rv & rows[u]).bit_count() <= limit for u in chosen)

        def grow(chosen: list[int], tmask: int, hits: list[int], start: int) -> Iterator[int]:
            if len(chosen) >= delta:
                return
            for i in range(start, len(open_r)):
                v = open_r[i]
                if admissible(v, chosen, tmask, hits):
                    mask = tmask | 1 << v
                    if mask & need_r == need_r:
                        yield mask
                    yield from grow(chosen + [v], mask, add(hits, rows[v]), i + 1)
                if need_r >> v & 1:
                    # later branches would leave out a required vertex
                    return

        def grow_a(chosen: list[int], tmask: int, hits: list[int], start: int) -> Iterator[int]:
            for i in range(start, len(open_a)):
                a = open_a[i]
                if admissible(a, chosen, tmask, hits):
                    mask = tmask | 1 << a
                    new_hits = add(hits, rows[a])
                    if mask & need_a == need_a:
                        if not need_r:
                            yield mask
                        yield from grow(chosen + [a], mask, new_hits, 0)
                    if len(chosen) + 1 < t - 1:
                        yield from grow_a(chosen + [a], mask, new_hits, i + 1)
                if need_a >> a & 1:
                    return

        need_a = required & self.mask_a
        need_r = required & ~self.mask_a
        if required & 1 or any(rows[v] & required for v in iter_bits(required)):
            return
        if any(rows[v].bit_count() >= delta for v in iter_bits(required)):
            return
        yield from grow_a([], 0, [0] * (t - 1), 0)

    def child(self, rows: list[int], tmask: int) -> list[int]:
        m = len(rows)
        bit = 1 << m
        new = list(rows)
        for v in iter_bits(tmask):
            new[v] |= bit
        new.append(tmask)
        return new

    def viable(self, rows: list[int]) -> tuple[bool, bool]:
        """Return ``(may_continue, is_complete_witness)`` for a node."""
        m = len(rows)
        f = self.n - m
        delta = self.delta
        full = (1 << m) - 1
        capacity = 0
        for a in range(1, delta + 1):
            capacity += delta - rows[a].bit_count()
        if capacity < f:
            return False, False
        complete = True
        for u in range(m):
            ru = rows[u]
            d = ru.bit_count()
            if d + f < self.delta_min:
                return False, False
            reach = ru | 1 << u
            for v in iter_bits(ru):
                reach |= rows[v]
            missing = (full & ~reach).bit_count()
            if missing:
                complete = False
                if f == 0:
                    return False, False
                if self.deficit_prune and missing > min(delta - d, f) * (delta - 1):
                    return False, False
        return True, complete and f == 0

    # -- canonical augmentation -------------------------------------------

    def _colours(self, rows: list[int], extra: Sequence[Sequence[int]] = ()) -> list[list[int]]:
        m = len(rows)
        delta = self.delta
        taken = {v for cell in extra for v in cell}
        rest = [v for v in range(delta + 1, m) if v not in taken]
        cells = [[0], list(range(1, delta + 1))]
        if rest:
            cells.append(rest)
        cells.extend(list(c) for c in extra)
        return cells

    def _invariant(self, rows: list[int], v: int) -> tuple:
        rv = rows[v]
        return (
            rv.bit_count(),
            (rv & self.mask_a).bit_count(),
            tuple(sorted(rows[u].bit_count() for u in iter_bits(rv))),
        )

    def accepts(self, rows: list[int]) -> bool:
        """Is the last vertex the canonical deletion vertex (up to automorphism)?"""
        m = len(rows)
        x = m - 1
        invs = {v: self._invariant(rows, v) for v in range(self.delta + 1, m)}
        best = max(invs.values())
        if invs[x] != best:
            return False
        tied = [v for v, inv in invs.items() if inv == best]
        if len(tied) == 1:
            return True
        g = Graph(m, rows, check=False)
        report = canonicalize(g, self._colours(rows, [tied]))
        chosen = max(tied, key=lambda v: report.labelling[v])
        return report.orbits[x] == report.orbits[chosen]

    def rooted_key(self, rows: list[int]) -> tuple:
        g = Graph(len(rows), rows, check=False)
        _, cert, aut, _ = canonical_labelling(g, self._colours(rows))
        return cert, aut

    def required(self, rows: list[int]) -> int:
        """Vertices every remaining new vertex, the next one included, must be adjacent to."""
        m = len(rows)
        f = self.n - m  # vertices still to add, including the next one
        full = (1 << m) - 1
        slack = self.delta - 1
        need = 0
        for u in range(m):
            ru = rows[u]
            reach = ru | 1 << u
            for v in iter_bits(ru):
                reach |= rows[v]
            missing = (full & ~reach).bit_count()
            if missing and -(-missing // slack) >= f:
                need |= 1 << u
        return need

    def accepted_children(self, rows: list[int]) -> list[list[int]]:
        out = []
        last = len(rows) + 1 == self.n
        for tmask in self.extensions(rows, self.required(rows)):
            self.nodes += 1
            kid = self.child(rows, tmask)
            ok, complete = self.viable(kid)
            if not ok:
                continue
            if last:
                if complete:
                    self.found.add(canonicalize(Graph(len(kid), kid, check=False)).canonical_form)
                continue
            if self.accepts(kid):
                out.append(kid)
        if len(out) > 1 and self.rooted_key(rows)[1] > 1:
            seen = set()
            unique = []
            for kid in out:
                key = self.rooted_key(kid)[0]
                if key not in seen:
                    seen.add(key)
                    unique.append(kid)
            out = unique
        return out

    def run(self, rows: list[int] | None = None) -> set[str]:
        if rows is None:
            rows = self.root()
            if len(rows) == self.n:
                return self.found
        stack = [rows]
        while stack:
            node = stack.pop()
            stack.extend(reversed(self.accepted_children(node)))
        return self.found

    def first_level(self) -> list[list[int]]:
        return self.accepted_children(self.root())


def _feasible_degrees(n: int, t: int) -> list[int]:
    """Maximum degrees a non-star witness on ``n`` vertices can have."""
    out = []
    for delta in range(2, n - 1):
        # each non-neighbour of the root hangs off A; A has (delta-1) free slots per vertex
        if n - 1 - delta <= delta * (delta - 1):
            out.append(delta)
    return out


def _tree_task(args) -> tuple[int, list[str], int]:
    n, delta, t, index, degree_prune, deficit_prune = args
    search = _RootedSearch(n, delta, t, degree_prune=degree_prune, deficit_prune=deficit_prune)
    if index is None:
        search.run()
    else:
        level = search.first_level()
        search.found.clear()
        if index < len(level):
            search.run(level[index])
    return n, sorted(search.found), search.nodes


def _tasks(cfg: SearchConfig) -> list[tuple]:
    tasks = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        for delta in _feasible_degrees(n, cfg.t):
            if cfg.workers == 1 or n - 1 - delta <= 1:
                tasks.append((n, delta, cfg.t, None, cfg.degree_bound_prune, cfg.deficit_prune))
                continue
            probe = _RootedSearch(n, delta, cfg.t, degree_prune=cfg.degree_bound_prune, deficit_prune=cfg.deficit_prune)
            for i in range(len(probe.first_level())):
                tasks.append((n, delta, cfg.t, i, cfg.degree_bound_prune, cfg.deficit_prune))
            # leaves found at depth one belong to the probe; record them separately
            if probe.found:
                tasks.append((n, delta, cfg.t, -1, cfg.degree_bound_prune, cfg.deficit_prune))
    return tasks


def _depth_one_leaves(args) -> tuple[int, list[str], int]:
    n, delta, t, _, degree_prune, deficit_prune = args
    search = _RootedSearch(n, delta, t, degree_prune=degree_prune, deficit_prune=deficit_prune)
    search.first_level()
    return n, sorted(search.found), search.nodes


def _dispatch(args):
    return _depth_one_leaves(args) if args[3] == -1 else _tree_task(args)


def enumerate_witnesses(cfg: SearchConfig) -> EnumerationResult:
    """One representative (in canonical labelling) per isomorphism class, per order."""
    cfg.validate()
    tasks = _tasks(cfg)
    if cfg.workers > 1 and len(tasks) > 1:
        with Pool(cfg.workers) as pool:
            results = pool.map(_dispatch, tasks, chunksize=1)
    else:
        results = [_dispatch(task) for task in tasks]
    forms: dict[int, set[str]] = {n: set() for n in range(cfg.n_min, cfg.n_max + 1)}
    nodes = 0
    for n, found, count in results:
        forms[n].update(found)
        nodes += count
    graphs = {n: [from_graph6(f) for f in sorted(fs)] for n, fs in forms.items()}
    stats = []
    for n in sorted(graphs):
        for g in graphs[n]:
            rep = canonicalize(g)
            stats.append((g, rep.aut_order, rep.orbit_count))
    return EnumerationResult(graphs, summarise(stats), nodes)


# --- local moves ------------------------------------------------------------


def _dedupe(graphs: Iterable[Graph]) -> list[Graph]:
    seen: dict[str, Graph] = {}
    for g in graphs:
        key = canonicalize(g).canonical_form
        seen.setdefault(key, g)
    return [seen[k] for k in sorted(seen)]


def _rotations(g: Graph) -> Iterator[Graph]:
    rows = g.rows
    n = g.n
    for u in range(n):
        for v in iter_bits(rows[u]):
            for w in range(n):
                if w in (u, v) or rows[u] >> w & 1:
                    continue
                yield g.with_edges(add=[(u, w)], remove=[(u, v)])


def edge_rotation_neighbors(g: Graph, s: int, t: int) -> list[Graph]:
    """Witnesses of the form ``g - uv + uw``, one per isomorphism class."""
    return _dedupe(h for h in _rotations(g) if is_witness(h, s, t))


def _switches(g: Graph) -> Iterator[Graph]:
    edges = g.edges()
    for (a, b), (c, d) in combinations(edges, 2):
        if len({a, b, c, d}) < 4:
            continue
        # the two ways of pairing endpoints; each orientation is one switch
        for u, v, w, x in ((a, b, c, d), (a, b, d, c), (b, a, c, d), (b, a, d, c)):
            if g.has_edge(u, w) or g.has_edge(v, x):
                continue
            yield g.with_edges(add=[(u, w), (v, x)], remove=[(u, v), (w, x)])


def ryser_switch_neighbors(g: Graph, s: int, t: int) -> list[Graph]:
    """Witnesses obtained by removing edges ``uv, wx`` and adding ``uw, vx``."""
    if g.edge_count() < 2:
        return []
    return _dedupe(h for h in _switches(g) if is_witness(h, s, t))


# above this order only single-vertex deletions are explored
INDUCED_SUBSET_LIMIT = 16


def induced_witnesses(g: Graph, s: int, t: int) -> list[Graph]:
    """Proper induced subgraphs of ``g`` that are witnesses.

    Up to ``INDUCED_SUBSET_LIMIT`` vertices every vertex subset is tried;
    larger graphs only contribute their single-vertex deletions.
    """
    n = g.n
    out = []
    if n <= INDUCED_SUBSET_LIMIT:
        for size in range(4, n):
            for subset in combinations(range(n), size):
                h = induced_subgraph(g, subset)
                if is_witness(h, s, t):
                    out.append(h)
    else:
        for v in range(n):
            h = induced_subgraph(g, [u for u in range(n) if u != v])
            if is_witness(h, s, t):
                out.append(h)
    return _dedupe(out)


_MOVES: dict[str, Callable[[Graph, int, int], list[Graph]]] = {
    "rotation": edge_rotation_neighbors,
    "switch": ryser_switch_neighbors,
    "induced": induced_witnesses,
}


@dataclass
class ClosureResult:
    forms: set[str] = field(default_factory=set)
    truncated: bool = False
    iterations: int = 0

    def graphs(self) -> list[Graph]:
        return [from_graph6(f) for f in sorted(self.forms)]


def closure(seeds: Iterable[Graph], ops: Iterable[str], s: int, t: int, budget: int = 10_000) -> ClosureResult:
    """Breadth-first fixpoint of the chosen moves, restricted to witnesses.

    ``budget`` caps both the number of graphs expanded and the size of the
    result; hitting it sets ``truncated``.
    """
    ops = list(ops)
    for op in ops:
        if op not in _MOVES:
            raise ValueError(f"unknown operation {op!r}; choose from {', '.join(OPS)}")
    result = ClosureResult()
    queue: deque[Graph] = deque()
    for g in seeds:
        if not is_witness(g, s, t):
            continue
        form = canonicalize(g).canonical_form
        if form not in result.forms:
            result.forms.add(form)
            queue.append(from_graph6(form))
    while queue:
        if result.iterations >= budget:
            result.truncated = True
            break
        g = queue.popleft()
        result.iterations += 1
        for op in ops:
            for h in _MOVES[op](g, s, t):
                form = canonicalize(h).canonical_form
                if form in result.forms:
                    continue
                if len(result.forms) >= budget:
                    result.truncated = True
                    return result
                result.forms.add(form)
                queue.append(from_graph6(form))
    return result


def brute_force_witnesses(n: int, s: int = 2, t: int = 3) -> list[str]:
    """Canonical forms of all ``n``-vertex witnesses by naive extension.

    Grows every triangle-free K_{2,t}-free graph one vertex at a time and
    deduplicates each order by canonical form. Intended for ``n <= 8``.
    """
    level = {to_graph6(Graph(1, [0]))}
    for m in range(1, n):
        nxt = set()
        for form in level:
            g = from_graph6(form)
            for tmask in range(1 << m):
                rows = list(g.rows)
                ok = True
                for v in iter_bits(tmask):
                    if rows[v] & tmask:
                        ok = False
                        break
                if not ok:
                    continue
                bit = 1 << m
                for v in iter_bits(tmask):
                    rows[v] |= bit
                rows.append(tmask)
                if any((tmask & rows[u]).bit_count() >= t for u in range(m)):
                    continue
                if any((rows[u] & rows[w]).bit_count() >= t for u, w in combinations(iter_bits(tmask), 2)):
                    continue
                h = Graph(m + 1, rows, check=False)
                nxt.add(canonicalize(h).canonical_form)
        level = nxt
    return sorted(f for f in level if is_witness(from_graph6(f), s, t))
