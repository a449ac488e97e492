"""Immutable simple graphs on bitmask rows, graph6 I/O and distance queries."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 512
INF = -1  # distance sentinel for unreachable vertices


class GraphError(ValueError):
    """Raised for invalid graph construction or input."""


class Graph6Error(GraphError):
    """Raised when a graph6 line cannot be decoded."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.reason = message
        self.offset = offset


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """A simple undirected graph on vertices ``0..n-1``.

    Row ``v`` of ``rows`` is an integer whose bit ``u`` is set iff ``uv`` is an
    edge. Instances are immutable and hashable.
    """

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, rows: Sequence[int] | None = None, *, check: bool = True):
        if not 1 <= n <= MAX_VERTICES:
            raise GraphError(f"vertex count {n} outside 1..{MAX_VERTICES}")
        self.n = n
        if rows is None:
            self.rows = (0,) * n
        else:
            self.rows = tuple(rows)
        self._hash = None
        if check:
            self._validate()

    def _validate(self) -> None:
        if len(self.rows) != self.n:
            raise GraphError("row count does not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full or row < 0:
                raise GraphError(f"row {v} has bits outside the vertex range")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.rows))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count()})"

    def __len__(self) -> int:
        return self.n

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def degree_multiset(self) -> dict[int, int]:
        """Degree -> number of vertices with that degree."""
        return dict(sorted(Counter(self.degrees()).items()))

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for v, row in enumerate(self.rows):
            for u in iter_bits(row >> (v + 1)):
                out.append((v, v + 1 + u))
        return out

    def non_edges(self) -> list[tuple[int, int]]:
        out = []
        for v, row in enumerate(self.rows):
            for u in range(v + 1, self.n):
                if not row >> u & 1:
                    out.append((v, u))
        return out

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which vertex ``v`` is renamed ``perm[v]``."""
        rows = [0] * self.n
        for v, row in enumerate(self.rows):
            image = 0
            for u in iter_bits(row):
                image |= 1 << perm[u]
            rows[perm[v]] = image
        return Graph(self.n, rows, check=False)

    def with_edges(self, add: Iterable[tuple[int, int]] = (), remove: Iterable[tuple[int, int]] = ()) -> "Graph":
        rows = list(self.rows)
        for u, v in remove:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        for u, v in add:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, rows, check=False)


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


# --- graph6 ---------------------------------------------------------------


def _encode_size(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    return "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))


def to_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 string (no trailing newline)."""
    out = [_encode_size(g.n)]
    acc = 0
    nbits = 0
    rows = g.rows
    for j in range(1, g.n):
        rj = rows[j]
        for i in range(j):
            acc = (acc << 1) | (rj >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def from_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 line. A leading ``>>graph6<<`` header is accepted."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    line = text.rstrip("\r\n")
    start = 0
    if line.startswith(">>graph6<<"):
        start = 10
    data = line[start:]
    if not data:
        raise Graph6Error("empty graph6 line", start)
    for i, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"invalid graph6 character {ch!r}", start + i)
    if data[0] != "~":
        n = ord(data[0]) - 63
        pos = 1
    else:
        if len(data) < 4:
            raise Graph6Error("truncated size field", start + len(data))
        if data[1] == "~":
            raise Graph6Error("vertex count beyond supported range", start + 1)
        n = 0
        for k in range(1, 4):
            n = (n << 6) | (ord(data[k]) - 63)
        if n < 63:
            raise Graph6Error("non-canonical long size field", start + 1)
        pos = 4
    if not 1 <= n <= MAX_VERTICES:
        raise Graph6Error(f"vertex count {n} outside 1..{MAX_VERTICES}", start)
    total = n * (n - 1) // 2
    need = (total + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise Graph6Error(f"expected {need} adjacency bytes, found {len(body)}", start + pos + min(len(body), need))
    rows = [0] * n
    i, j = 0, 1
    for k, ch in enumerate(body):
        val = ord(ch) - 63
        for b in range(5, -1, -1):
            bitno = k * 6 + (5 - b)
            if bitno >= total:
                if val >> b & 1:
                    raise Graph6Error("nonzero padding bits", start + pos + k)
                continue
            if val >> b & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i = 0
                j += 1
    return Graph(n, rows, check=False)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, Graph]]:
    """Yield ``(line_number, graph)`` for each non-blank line."""
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield lineno, from_graph6(line.strip())
        except Graph6Error as exc:
            raise Graph6Error(f"line {lineno}: {exc.reason}", exc.offset) from exc


# --- distances ------------------------------------------------------------


def distances_from(g: Graph, v: int) -> list[int]:
    """BFS distances from ``v``; unreachable vertices get ``INF``."""
    dist = [INF] * g.n
    dist[v] = 0
    seen = 1 << v
    frontier = 1 << v
    d = 0
    rows = g.rows
    while frontier:
        d += 1
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= rows[u]
        nxt &= ~seen
        seen |= nxt
        for u in iter_bits(nxt):
            dist[u] = d
        frontier = nxt
    return dist


def eccentricity(g: Graph, v: int) -> float:
    dist = distances_from(g, v)
    if INF in dist:
        return float("inf")
    return max(dist)


def diameter(g: Graph) -> float:
    """Largest BFS distance; ``inf`` if disconnected, 0 for one vertex."""
    best = 0
    for v in range(g.n):
        e = eccentricity(g, v)
        if e == float("inf"):
            return e
        best = max(best, e)
    return best


def is_connected(g: Graph) -> bool:
    return INF not in distances_from(g, 0)


def uncovered_pair(g: Graph) -> tuple[int, int] | None:
    """First non-adjacent pair with no common neighbour, or None."""
    rows = g.rows
    for u in range(g.n):
        ru = rows[u]
        for w in range(u + 1, g.n):
            if not ru >> w & 1 and not ru & rows[w]:
                return (u, w)
    return None


def has_diameter_at_most_two(g: Graph) -> bool:
    return uncovered_pair(g) is None


def common_neighbours(g: Graph, u: int, v: int) -> set[int]:
    if u == v:
        raise GraphError("common_neighbours needs distinct vertices")
    return set(iter_bits(g.rows[u] & g.rows[v]))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on ``vertices`` relabelled ``0..k-1`` in sorted order."""
    verts = sorted(set(vertices))
    if not verts:
        raise GraphError("induced subgraph needs a nonempty vertex set")
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        row = 0
        for u in iter_bits(g.rows[v]):
            i = index.get(u)
            if i is not None:
                row |= 1 << i
        rows.append(row)
    return Graph(len(verts), rows, check=False)


def girth(g: Graph) -> float:
    """Length of a shortest cycle (``inf`` for forests)."""
    best = float("inf")
    rows = g.rows
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        for v in queue:
            if 2 * dist[v] + 1 >= best:
                break
            for u in iter_bits(rows[v]):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def girth_class(g: Graph) -> str:
    """Girth bucketed as the census reports it: ``"4"``, ``"5"`` or ``"other"``."""
    value = girth(g)
    if value in (4, 5):
        return str(int(value))
    return "other"


class QuotientMultigraph:
    """Multigraph with loops, stored as a multiplicity map on vertex pairs.

    Keys are ``(a, b)`` with ``a <= b``; ``a == b`` is a loop.
    """

    __slots__ = ("m", "mult", "from_automorphism")

    def __init__(self, m: int, mult: dict[tuple[int, int], int] | None = None, from_automorphism: bool | None = None):
        self.m = m
        self.from_automorphism = from_automorphism
        self.mult = {}
        for (a, b), k in (mult or {}).items():
            key = (a, b) if a <= b else (b, a)
            if k:
                self.mult[key] = self.mult.get(key, 0) + k

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuotientMultigraph):
            return NotImplemented
        return self.m == other.m and self.mult == other.mult

    def __repr__(self) -> str:
        return f"QuotientMultigraph(m={self.m}, mult={self.mult})"

    def loops(self) -> list[int]:
        return sorted(a for (a, b) in self.mult if a == b)

    def check_double_cover_bounds(self) -> None:
        for (a, b), k in self.mult.items():
            limit = 1 if a == b else 2
            if k > limit:
                raise GraphError(f"multiplicity {k} on {(a, b)} exceeds {limit}")
