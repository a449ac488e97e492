"""Published census rows of triangle-free K_{2,3}-free diameter-2 graphs."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, girth_class


@dataclass(frozen=True)
class CensusRow:
    n: int
    edges: int
    degrees: tuple[tuple[int, int], ...]  # (degree, multiplicity) ascending
    girth: str
    aut_range: tuple[int, int]
    orbit_range: tuple[int, int]
    count: int = 1
    note: str = field(default="", compare=False)

    @property
    def key(self) -> tuple:
        return (self.n, self.edges, self.degrees, self.girth)

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "edges": self.edges,
            "degrees": {str(d): c for d, c in self.degrees},
            "girth": self.girth,
            "aut_order": list(self.aut_range),
            "orbits": list(self.orbit_range),
            "count": self.count,
        }


def _row(n, e, degs, girth, aut, orbits, count=1, note=""):
    aut = aut if isinstance(aut, tuple) else (aut, aut)
    orbits = orbits if isinstance(orbits, tuple) else (orbits, orbits)
    return CensusRow(n, e, tuple(sorted(degs.items())), str(girth), aut, orbits, count, note)


PUBLISHED_ROWS: tuple[CensusRow, ...] = (
    _row(4, 4, {2: 4}, 4, 8, 1, note="4-cycle"),
    _row(5, 5, {2: 5}, 5, 10, 1, note="5-cycle"),
    _row(6, 7, {2: 4, 3: 2}, 4, 4, 3, note="subdivided K_{2,3}"),
    _row(7, 9, {2: 4, 3: 2, 4: 1}, 4, 8, 3),
    _row(8, 12, {3: 8}, 4, 16, 1, note="Moebius ladder"),
    _row(9, 14, {3: 8, 4: 1}, 4, 8, 3),
    _row(10, 15, {3: 10}, 5, 120, 1, note="Petersen graph"),
    _row(10, 17, {3: 6, 4: 4}, 4, 4, 4),
    _row(11, 19, {3: 6, 4: 5}, 4, 24, 3),
    _row(11, 20, {3: 5, 4: 5, 5: 1}, 4, 10, 3, note="Groetzsch graph"),
    _row(12, 23, {3: 3, 4: 8, 5: 1}, 4, 12, 4),
    _row(12, 24, {4: 12}, 4, 48, 1),
    _row(13, 24, {3: 4, 4: 9}, 4, 48, 3),
    _row(13, 26, {4: 13}, 4, 52, 1),
    _row(13, 27, {3: 1, 4: 9, 5: 3}, 4, 12, 4),
    _row(14, 31, {4: 8, 5: 6}, 4, 48, 2),
    _row(15, 35, {4: 5, 5: 10}, 4, 120, 2),
    _row(16, 34, {4: 12, 5: 4}, 4, 32, 3),
    _row(16, 40, {5: 16}, 4, 1920, 1, note="Clebsch graph"),
    _row(17, 40, {4: 5, 5: 12}, 4, 48, 3),
    _row(18, 39, {4: 12, 5: 6}, 4, 24, 3),
    _row(50, 175, {7: 50}, 5, 252000, 1, note="Hoffman-Singleton graph"),
    _row(56, 280, {10: 56}, 4, 80640, 1, note="Gewirtz graph"),
)

# the census is complete up to this order
COMPLETE_UP_TO = 19


def published_rows(n_max: int | None = None) -> list[CensusRow]:
    return [r for r in PUBLISHED_ROWS if n_max is None or r.n <= n_max]


def published_counts(n_min: int, n_max: int) -> dict[int, int]:
    counts = {n: 0 for n in range(n_min, n_max + 1)}
    for r in PUBLISHED_ROWS:
        if n_min <= r.n <= n_max:
            counts[r.n] += r.count
    return counts


def row_for(note: str) -> CensusRow:
    for r in PUBLISHED_ROWS:
        if r.note == note:
            return r
    raise KeyError(note)


def summarise(graphs: Iterable[tuple[Graph, int, int]]) -> list[CensusRow]:
    """Group ``(graph, aut_order, orbit_count)`` triples into census rows."""
    buckets: dict[tuple, list[tuple[int, int]]] = defaultdict(list)
    for g, aut, orbits in graphs:
        degs = tuple(sorted(Counter(g.degrees()).items()))
        buckets[(g.n, g.edge_count(), degs, girth_class(g))].append((aut, orbits))
    rows = []
    for (n, e, degs, gc), stats in sorted(buckets.items()):
        auts = [a for a, _ in stats]
        orbs = [o for _, o in stats]
        rows.append(CensusRow(n, e, degs, gc, (min(auts), max(auts)), (min(orbs), max(orbs)), len(stats)))
    return rows
