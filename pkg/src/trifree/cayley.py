"""Cayley graphs on finite abelian groups and their connection-set conditions."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt, prod
from typing import Iterable, Iterator, Sequence

from .canon import canonicalize
from .graph import MAX_VERTICES, Graph, GraphError
from .properties import find_kst

MAX_GROUP_ORDER = 4096
MAX_SEARCH_ORDER = 1024
MAX_SEARCH_K = 20


class AbelianGroup:
    """Direct product of cyclic groups ``Z_m1 x ... x Z_mr``.

    Elements are indexed in mixed-radix order with the first factor most
    significant; index 0 is the identity.
    """

    def __init__(self, factors: Sequence[int]):
        factors = tuple(int(m) for m in factors)
        if not factors or any(m < 2 for m in factors):
            raise ValueError(f"factors must be integers >= 2, got {factors}")
        order = prod(factors)
        if order > MAX_GROUP_ORDER:
            raise ValueError(f"group order {order} exceeds {MAX_GROUP_ORDER}")
        self.factors = factors
        self.order = order
        self._weights = tuple(prod(factors[i + 1:]) for i in range(len(factors)))

    @classmethod
    def parse(cls, spec: str) -> "AbelianGroup":
        return cls([int(x) for x in spec.replace("x", ",").split(",") if x.strip()])

    def __repr__(self) -> str:
        return "AbelianGroup(" + "x".join(f"Z{m}" for m in self.factors) + ")"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AbelianGroup) and other.factors == self.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __len__(self) -> int:
        return self.order

    def digits(self, x: int) -> tuple[int, ...]:
        return tuple((x // w) % m for w, m in zip(self._weights, self.factors))

    def index(self, digits: Sequence[int]) -> int:
        return sum((d % m) * w for d, m, w in zip(digits, self.factors, self._weights))

    def add(self, x: int, y: int) -> int:
        total = 0
        for w, m in zip(self._weights, self.factors):
            total += (((x // w) + (y // w)) % m) * w
        return total

    def neg(self, x: int) -> int:
        total = 0
        for w, m in zip(self._weights, self.factors):
            total += ((-(x // w)) % m) * w
        return total

    def double(self, x: int) -> int:
        return self.add(x, x)

    def elements(self) -> range:
        return range(self.order)

    def is_elementary(self) -> bool:
        return len(set(self.factors)) == 1 and _is_prime(self.factors[0])

    def is_cyclic_factor_list(self) -> bool:
        return len(self.factors) == 1

    def format(self, x: int) -> str:
        d = self.digits(x)
        if all(m <= 10 for m in self.factors):
            return "".join(str(v) for v in d)
        return ",".join(str(v) for v in d)

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if "," in text or len(self.factors) == 1:
            parts = [int(p) for p in text.split(",")]
        else:
            parts = [int(ch) for ch in text]
        if len(parts) != len(self.factors):
            raise ValueError(f"element {text!r} does not match {self!r}")
        return self.index(parts)

    def add_table(self) -> list[list[int]]:
        n = self.order
        if n > MAX_SEARCH_ORDER:
            raise ValueError(f"add table limited to order {MAX_SEARCH_ORDER}")
        digits = [self.digits(x) for x in range(n)]
        table = []
        for x in range(n):
            dx = digits[x]
            table.append([
                sum(((a + b) % m) * w for a, b, m, w in zip(dx, digits[y], self.factors, self._weights))
                for y in range(n)
            ])
        return table


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, isqrt(p) + 1))


@dataclass(frozen=True)
class ConnectionSet:
    group: AbelianGroup
    elements: frozenset[int]

    def __post_init__(self):
        g = self.group
        for x in self.elements:
            if not 0 <= x < g.order:
                raise ValueError(f"element index {x} outside group")
        if 0 in self.elements:
            raise ValueError("connection set may not contain the identity")
        for x in self.elements:
            if g.neg(x) not in self.elements:
                raise ValueError(f"connection set not inverse-closed at {g.format(x)}")

    @classmethod
    def from_strings(cls, group: AbelianGroup, items: Iterable[str]) -> "ConnectionSet":
        return cls(group, frozenset(group.parse_element(s) for s in items))

    @property
    def k(self) -> int:
        return len(self.elements)

    def doubles(self) -> frozenset[int]:
        """The set ``{x + x : x in S}``."""
        return frozenset(self.group.double(x) for x in self.elements)

    def formatted(self) -> list[str]:
        return [self.group.format(x) for x in sorted(self.elements)]


def cayley_graph(cs: ConnectionSet) -> Graph:
    g = cs.group
    if g.order > MAX_VERTICES:
        raise GraphError(f"group order {g.order} exceeds {MAX_VERTICES} vertices")
    rows = []
    for x in range(g.order):
        row = 0
        for s in cs.elements:
            row |= 1 << g.add(x, s)
        rows.append(row)
    return Graph(g.order, rows, check=False)


def _sum_counts(cs: ConnectionSet) -> dict[int, int]:
    """Number of ordered pairs ``(x, y)`` in S x S with ``x + y = z``."""
    g = cs.group
    counts: dict[int, int] = {}
    for x in cs.elements:
        for y in cs.elements:
            z = g.add(x, y)
            counts[z] = counts.get(z, 0) + 1
    return counts


def triangle_condition(cs: ConnectionSet) -> bool:
    g = cs.group
    s = cs.elements
    return not any(g.add(x, y) in s for x in s for y in s)


def diameter2_condition(cs: ConnectionSet) -> bool:
    sums = _sum_counts(cs)
    s = cs.elements
    return all(z in sums for z in range(1, cs.group.order) if z not in s)


def k23_condition(cs: ConnectionSet) -> bool:
    g = cs.group
    doubles = cs.doubles()
    unordered: dict[int, int] = {}
    distinct: dict[int, int] = {}
    double_count: dict[int, int] = {}
    elems = sorted(cs.elements)
    for i, x in enumerate(elems):
        z = g.add(x, x)
        unordered[z] = unordered.get(z, 0) + 1
        double_count[z] = double_count.get(z, 0) + 1
        for y in elems[i + 1:]:
            z = g.add(x, y)
            unordered[z] = unordered.get(z, 0) + 1
            distinct[z] = distinct.get(z, 0) + 1
    for z in range(1, g.order):
        if z in doubles:
            if distinct.get(z, 0) or double_count.get(z, 0) > 2:
                return False
        elif unordered.get(z, 0) > 1:
            return False
    return True


@dataclass
class ParityCheck:
    ok: bool
    counterexample: tuple[int, int] | None = None
    odd_order_checked: bool = False


def codegree_parity_check(cs: ConnectionSet) -> ParityCheck:
    """Non-adjacent pairs whose difference lies outside the double set have even co-degree."""
    g = cs.group
    graph = cayley_graph(cs)
    doubles = cs.doubles()
    rows = graph.rows
    n = g.order
    for x in range(n):
        rx = rows[x]
        for y in range(x + 1, n):
            if rx >> y & 1:
                continue
            diff = g.add(x, g.neg(y))
            if diff in doubles:
                continue
            if (rx & rows[y]).bit_count() % 2:
                return ParityCheck(False, (x, y))
    odd_checked = False
    if n % 2 == 1 and not (doubles & cs.elements):
        odd_checked = True
        for z in doubles:
            if (rows[0] & rows[z]).bit_count() % 2 == 0:
                return ParityCheck(False, (0, z), True)
    return ParityCheck(True, None, odd_checked)


@dataclass(frozen=True)
class Feasibility:
    status: str  # "feasible", "infeasible" or "inapplicable"
    k: int | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def counting_feasibility(group: AbelianGroup | int, k: int | None = None) -> Feasibility:
    """Degree forced by the sum-counting argument, when it applies.

    An integer argument is read as the cyclic group of that order.
    """
    if isinstance(group, int):
        group = AbelianGroup([group])
    n = group.order
    if gcd(n, 6) == 1:
        r = isqrt(2 * n - 1)
        if r * r != 2 * n - 1:
            return Feasibility("infeasible")
        implied = r - 1
    elif all(m == 2 for m in group.factors):
        d = len(group.factors)
        disc = 2 ** (d + 3) - 7
        r = isqrt(disc)
        if r * r != disc or (r - 1) % 2:
            return Feasibility("infeasible")
        implied = (r - 1) // 2
    else:
        return Feasibility("inapplicable")
    if k is not None and k != implied:
        return Feasibility("infeasible", implied)
    return Feasibility("feasible", implied)


def ramanujan_nagell(limit: int) -> set[int]:
    """All ``m <= limit`` for which ``2**m - 7`` is a perfect square."""
    if limit > 62:
        raise ValueError("limit must be at most 62")
    out = set()
    for m in range(0, limit + 1):
        v = 2 ** m - 7
        if v >= 0 and isqrt(v) ** 2 == v:
            out.add(m)
    return out


def prime_powers(limit: int) -> list[tuple[int, int, int]]:
    """``(n, p, a)`` with ``n = p**a <= limit``."""
    out = []
    for p in range(2, limit + 1):
        if not _is_prime(p):
            continue
        q, a = p, 1
        while q <= limit:
            out.append((q, p, a))
            q *= p
            a += 1
    return sorted(out)


def _partitions(a: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = a if largest is None else largest
    if a == 0:
        yield []
        return
    for first in range(min(a, largest), 0, -1):
        for rest in _partitions(a - first, first):
            yield [first] + rest


def abelian_groups_of_prime_power(p: int, a: int) -> list[AbelianGroup]:
    return [AbelianGroup([p ** e for e in part]) for part in _partitions(a)]


# --- exhaustive connection-set search -------------------------------------


@dataclass
class CayleyClass:
    connection_set: ConnectionSet
    graph: Graph | None
    canonical_form: str
    aut_order: int
    orbit_count: int

    def to_record(self) -> dict:
        return {
            "group": list(self.connection_set.group.factors),
            "k": self.connection_set.k,
            "connection_set": self.connection_set.formatted(),
            "graph6": self.canonical_form,
            "aut_order": self.aut_order,
            "orbit_count": self.orbit_count,
        }


def _inverse_classes(group: AbelianGroup) -> list[tuple[int, ...]]:
    seen = set()
    classes = []
    for x in range(1, group.order):
        if x in seen:
            continue
        y = group.neg(x)
        seen.update((x, y))
        classes.append((x,) if x == y else (x, y))
    return classes


def _forced_classes(group: AbelianGroup, classes: list[tuple[int, ...]]) -> list[list[int]]:
    """Alternative lists of inverse classes that may be assumed present.

    A witness connection set generates the group. Elementary abelian groups
    admit automorphisms taking any basis inside S to the standard basis; in a
    cyclic group a set containing a unit can be scaled so that it contains 1.
    """
    index = {x: i for i, cls in enumerate(classes) for x in cls}
    if group.is_elementary():
        basis = []
        for i in range(len(group.factors)):
            digits = [0] * len(group.factors)
            digits[i] = 1
            basis.append(index[group.index(digits)])
        return [basis]
    if len(group.factors) == 1:
        n = group.order
        if _is_prime(n):
            return [[index[1]]]
        # either S holds a unit (scale it to 1) or S avoids all units
        units = [i for i, cls in enumerate(classes) if gcd(cls[0], n) == 1]
        return [[index[1]], [-1 - u for u in units]]
    return [[]]


def enumerate_connection_sets(group: AbelianGroup, k: int, s: int = 2, t: int = 3) -> list[CayleyClass]:
    """All witness connection sets of size ``k``, one per isomorphism class of Cayley graph."""
    if group.order > MAX_SEARCH_ORDER:
        raise ValueError(f"search limited to group order {MAX_SEARCH_ORDER}")
    if k > MAX_SEARCH_K:
        raise ValueError(f"search limited to k <= {MAX_SEARCH_K}")
    if k < 1 or k >= group.order:
        return []
    n = group.order
    table = group.add_table()
    classes = _inverse_classes(group)
    found: dict[str, CayleyClass] = {}
    limit = t - 1 if s == 2 else None

    for forced in _forced_classes(group, classes):
        excluded = {-1 - e for e in forced if e < 0}
        required = [e for e in forced if e >= 0]
        start_elems: list[int] = []
        for ci in required:
            start_elems.extend(classes[ci])
        if len(start_elems) > k:
            continue
        counts = [0] * n  # ordered representations z = x + y, x, y in S
        member = bytearray(n)
        ok = True
        chosen: list[int] = []
        for x in start_elems:
            if not _add_element(x, chosen, member, counts, table, limit):
                ok = False
                break
        if not ok:
            continue
        free = [i for i in range(len(classes)) if i not in required and i not in excluded]
        for elems in _extend(classes, free, 0, k - len(chosen), chosen, member, counts, table, limit):
            cs = ConnectionSet(group, frozenset(elems))
            if not diameter2_condition(cs):
                continue
            if n > MAX_VERTICES:
                # too large to materialise; deduplicate on the set itself
                key = ",".join(cs.formatted())
                found.setdefault(key, CayleyClass(cs, None, "", 0, 0))
                continue
            graph = cayley_graph(cs)
            if s != 2 and find_kst(graph, s, t) is not None:
                continue
            if graph.n <= 2:
                continue
            rep = canonicalize(graph)
            if rep.canonical_form not in found:
                found[rep.canonical_form] = CayleyClass(cs, graph, rep.canonical_form, rep.aut_order, rep.orbit_count)
    return [found[key] for key in sorted(found)]


def _add_element(x: int, chosen: list[int], member: bytearray, counts: list[int], table: list[list[int]], limit: int | None) -> bool:
    """Add ``x`` to S, updating representation counts; False if a condition breaks.

    On failure the state is left modified; callers roll back with ``_remove_element``.
    """
    row = table[x]
    member[x] = 1
    chosen.append(x)
    ok = True
    # new sums x + y and y + x for y in S (y = x counted once)
    for y in chosen:
        z = row[y]
        inc = 1 if y == x else 2
        counts[z] += inc
        if z and limit is not None and counts[z] > limit:
            ok = False
        if member[z]:
            ok = False
    # x itself may now be a sum of two earlier elements
    if counts[x]:
        ok = False
    return ok


def _remove_element(chosen: list[int], member: bytearray, counts: list[int], table: list[list[int]]) -> None:
    x = chosen[-1]
    row = table[x]
    for y in chosen:
        counts[row[y]] -= 1 if y == x else 2
    chosen.pop()
    member[x] = 0


def _extend(classes, free, start, remaining, chosen, member, counts, table, limit):
    if remaining == 0:
        yield list(chosen)
        return
    for pos in range(start, len(free)):
        cls = classes[free[pos]]
        if len(cls) > remaining:
            continue
        added = 0
        ok = True
        for x in cls:
            added += 1
            if not _add_element(x, chosen, member, counts, table, limit):
                ok = False
                break
        if ok:
            yield from _extend(classes, free, pos + 1, remaining - len(cls), chosen, member, counts, table, limit)
        for _ in range(added):
            _remove_element(chosen, member, counts, table)


@dataclass
class OrderClassification:
    order: int
    implied_k: int
    groups: dict[str, int]  # group label -> witness class count

    @property
    def total(self) -> int:
        return sum(self.groups.values())


def classify_prime_power_orders(limit: int) -> list[OrderClassification]:
    if limit > 200:
        raise ValueError("limit must be at most 200")
    rows = []
    for n, p, a in prime_powers(limit):
        if gcd(n, 6) != 1:
            continue
        verdict = counting_feasibility(n)
        if not verdict.feasible:
            continue
        counts = {}
        for group in abelian_groups_of_prime_power(p, a):
            label = "x".join(f"Z{m}" for m in group.factors)
            counts[label] = len(enumerate_connection_sets(group, verdict.k))
        rows.append(OrderClassification(n, verdict.k, counts))
    return rows
