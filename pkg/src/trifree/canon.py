"""Canonical labelling and automorphism statistics.

Partition refinement to an equitable colouring, then an individualisation
search tree. Automorphisms found at leaves prune the tree; the group order is
the product of first-path orbit sizes of the stabiliser chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, to_graph6


@dataclass(frozen=True)
class CanonicalReport:
    canonical_form: str
    aut_order: int
    orbit_count: int
    labelling: tuple[int, ...]  # labelling[v] = canonical position of v
    orbits: tuple[int, ...]  # orbits[v] = smallest vertex in the orbit of v

    @property
    def vertex_transitive(self) -> bool:
        return self.orbit_count == 1


def refine(rows: Sequence[int], cells: list[list[int]], queue: list[list[int]]) -> tuple[list[list[int]], tuple]:
    """Refine ``cells`` to the coarsest equitable partition.

    ``queue`` holds splitter cells (list objects from ``cells``). Returns the new
    cell list and a label-invariant trace of the splits performed.
    """
    cells = list(cells)
    trace = []
    queued = {id(c) for c in queue}
    queue = list(queue)
    qi = 0
    while qi < len(queue):
        w = queue[qi]
        qi += 1
        queued.discard(id(w))
        mask = 0
        for v in w:
            mask |= 1 << v
        i = 0
        while i < len(cells):
            x = cells[i]
            if len(x) == 1:
                i += 1
                continue
            counts = [(rows[v] & mask).bit_count() for v in x]
            first = counts[0]
            for c in counts:
                if c != first:
                    break
            else:
                i += 1
                continue
            groups: dict[int, list[int]] = {}
            for v, c in zip(x, counts):
                groups.setdefault(c, []).append(v)
            keys = sorted(groups)
            parts = [groups[k] for k in keys]
            trace.append((i, tuple(keys), tuple(len(p) for p in parts)))
            cells[i:i + 1] = parts
            if id(x) in queued:
                queued.discard(id(x))
                for p in parts:
                    queue.append(p)
                    queued.add(id(p))
            else:
                big = max(range(len(parts)), key=lambda k: (len(parts[k]), -k))
                for k, p in enumerate(parts):
                    if k != big:
                        queue.append(p)
                        queued.add(id(p))
            i += len(parts)
    return cells, tuple(trace)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _orbits_of(n: int, gens: list[tuple[int, ...]]) -> _UnionFind:
    uf = _UnionFind(n)
    for g in gens:
        for v in range(n):
            if g[v] != v:
                uf.union(v, g[v])
    return uf


class _Canoniser:
    def __init__(self, rows: Sequence[int], n: int):
        self.rows = rows
        self.n = n
        self.gens: list[tuple[int, ...]] = []
        self.first_invs: list[tuple] = []
        self.first_cert: tuple[int, ...] | None = None
        self.first_order: list[int] | None = None
        self.best_invs: list[tuple] = []
        self.best_cert: tuple[int, ...] | None = None
        self.best_order: list[int] | None = None
        self.aut_order = 1

    def certificate(self, order: list[int]) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(order):
            pos[v] = i
        rows = self.rows
        cert = []
        for v in order:
            r = rows[v]
            image = 0
            while r:
                low = r & -r
                image |= 1 << pos[low.bit_length() - 1]
                r ^= low
            cert.append(image)
        return tuple(cert)

    def _add_gen(self, order_a: list[int], order_b: list[int]) -> None:
        perm = [0] * self.n
        for a, b in zip(order_a, order_b):
            perm[a] = b
        perm_t = tuple(perm)
        if any(perm_t[v] != v for v in range(self.n)):
            self.gens.append(perm_t)

    def compare_best(self, invs: list[tuple]) -> int:
        best = self.best_invs
        for i, inv in enumerate(invs):
            b = best[i]
            if inv != b:
                return 1 if inv > b else -1
        return 0

    def search(self, cells: list[list[int]], invs: list[tuple], prefix: list[int], on_path: bool, first_depth: int, eq_first: bool) -> int:
        """Depth-first search below a node; returns the depth to unwind to.

        ``first_depth`` is the depth of the deepest ancestor on the first path.
        ``eq_first`` says whether this node's invariants equal the first path's.
        """
        depth = len(prefix)
        if len(cells) == self.n:
            order = [c[0] for c in cells]
            cert = self.certificate(order)
            if self.first_cert is None:
                self.first_cert = self.best_cert = cert
                self.first_order = self.best_order = order
                self.first_invs = self.best_invs = list(invs)
                return depth
            if eq_first and cert == self.first_cert:
                self._add_gen(self.first_order, order)
                return first_depth
            cmp = self.compare_best(invs)
            if cmp > 0 or (cmp == 0 and cert > self.best_cert):
                self.best_cert = cert
                self.best_order = order
                self.best_invs = list(invs)
            elif cmp == 0 and cert == self.best_cert:
                self._add_gen(self.best_order, order)
            return depth
        target = 0
        while len(cells[target]) == 1:
            target += 1
        cell = cells[target]
        explored: list[int] = []
        ngens = -1
        uf = None
        d = depth + 1
        for w in sorted(cell):
            if explored:
                if ngens != len(self.gens):
                    fixed = [g for g in self.gens if all(g[p] == p for p in prefix)]
                    uf = _orbits_of(self.n, fixed)
                    ngens = len(self.gens)
                rw = uf.find(w)
                if any(uf.find(e) == rw for e in explored):
                    continue
            explored.append(w)
            single = [w]
            child = cells[:target] + [single, [v for v in cell if v != w]] + cells[target + 1:]
            child, trace = refine(self.rows, child, [single])
            child_invs = invs + [(target, trace)]
            if self.first_cert is None:
                child_on_path = child_eq = True
            else:
                child_on_path = False
                child_eq = eq_first and d < len(self.first_invs) and self.first_invs[d] == child_invs[d]
                if not child_eq and self.compare_best(child_invs) < 0:
                    continue
            back = self.search(child, child_invs, prefix + [w], child_on_path, d if child_on_path else first_depth, child_eq)
            if back < depth:
                return back
        if on_path:
            fixed = [g for g in self.gens if all(g[p] == p for p in prefix)]
            uf = _orbits_of(self.n, fixed)
            root = uf.find(explored[0])
            self.aut_order *= sum(1 for v in cell if uf.find(v) == root)
        return depth


def canonical_labelling(g: Graph, colours: Sequence[Sequence[int]] | None = None) -> tuple[list[int], tuple[int, ...], int, list[tuple[int, ...]]]:
    """Return ``(order, certificate, aut_order, generators)``.

    ``order[i]`` is the vertex placed at canonical position ``i``. ``colours``
    is an optional ordered partition of the vertices; automorphisms and the
    canonical form then respect it.
    """
    n = g.n
    if colours is None:
        cells = [list(range(n))]
    else:
        cells = [list(c) for c in colours if c]
        if sorted(v for c in cells for v in c) != list(range(n)):
            raise ValueError("colours must partition the vertex set")
    cells, trace = refine(g.rows, cells, list(cells))
    search = _Canoniser(g.rows, n)
    search.search(cells, [(len(cells), trace)], [], True, 0, True)
    return search.best_order, search.best_cert, search.aut_order, search.gens


def canonicalize(g: Graph, colours: Sequence[Sequence[int]] | None = None) -> CanonicalReport:
    order, cert, aut_order, gens = canonical_labelling(g, colours)
    labelling = [0] * g.n
    for i, v in enumerate(order):
        labelling[v] = i
    canon = Graph(g.n, cert, check=False)
    uf = _orbits_of(g.n, gens)
    orbit_min: dict[int, int] = {}
    for v in range(g.n):
        r = uf.find(v)
        orbit_min.setdefault(r, v)
    orbits = tuple(orbit_min[uf.find(v)] for v in range(g.n))
    return CanonicalReport(
        canonical_form=to_graph6(canon),
        aut_order=aut_order,
        orbit_count=len(orbit_min),
        labelling=tuple(labelling),
        orbits=orbits,
    )


def canonical_form(g: Graph) -> str:
    return canonicalize(g).canonical_form


def canonical_graph(g: Graph) -> Graph:
    _, cert, _, _ = canonical_labelling(g)
    return Graph(g.n, cert, check=False)


def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return canonical_labelling(a)[1] == canonical_labelling(b)[1]
