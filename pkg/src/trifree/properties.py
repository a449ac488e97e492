"""Witness predicates, degree inequalities and strongly-regular arithmetic."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any

from .graph import Graph, girth_class, has_diameter_at_most_two, iter_bits, to_graph6, uncovered_pair


class RejectedInput(ValueError):
    """A checker was handed a graph that violates its hypotheses."""

    def __init__(self, prop: str, message: str | None = None):
        super().__init__(message or f"input violates required property: {prop}")
        self.prop = prop


class UnsupportedParameter(ValueError):
    pass


MAX_S = 4


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    rows = g.rows
    for u in range(g.n):
        ru = rows[u]
        for v in iter_bits(ru >> (u + 1)):
            v += u + 1
            common = ru & rows[v]
            if common:
                w = (common & -common).bit_length() - 1
                return tuple(sorted((u, v, w)))
    return None


def is_triangle_free(g: Graph) -> tuple[bool, tuple[int, int, int] | None]:
    tri = find_triangle(g)
    return tri is None, tri


def _check_st(s: int, t: int) -> None:
    if not 1 <= s <= t:
        raise ValueError(f"need 1 <= s <= t, got s={s}, t={t}")
    if s > MAX_S:
        raise UnsupportedParameter(f"K_(s,t) search supports s <= {MAX_S}, got s={s}")


def find_kst(g: Graph, s: int, t: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Return vertex sets ``(S, T)`` spanning a K_{s,t} subgraph, or None."""
    _check_st(s, t)
    rows = g.rows
    n = g.n
    if s == 1:
        for v in range(n):
            if rows[v].bit_count() >= t:
                return (v,), tuple(list(iter_bits(rows[v]))[:t])
        return None
    if s == 2:
        for u in range(n):
            ru = rows[u]
            if ru.bit_count() < t:
                continue
            for v in range(u + 1, n):
                common = ru & rows[v]
                if common.bit_count() >= t:
                    return (u, v), tuple(list(iter_bits(common))[:t])
        return None

    def extend(chosen: list[int], mask: int, start: int):
        if len(chosen) == s:
            return tuple(chosen), tuple(list(iter_bits(mask))[:t])
        for v in range(start, n):
            m = mask & rows[v]
            if m.bit_count() >= t:
                found = extend(chosen + [v], m, v + 1)
                if found:
                    return found
        return None

    return extend([], (1 << n) - 1, 0)


def kst_through_pair(rows, u: int, v: int, s: int, t: int):
    """A K_{s,t} that uses the pair ``uv`` as an edge, in the graph ``rows`` plus ``uv``.

    Returns ``(S, T)`` with ``u`` and ``v`` on opposite sides, or None.
    """
    _check_st(s, t)
    for a, b, small, large in ((u, v, s, t), (v, u, s, t), (u, v, t, s), (v, u, t, s)):
        # ``a`` sits in the part of size ``small``; ``b`` in the part of size ``large``
        na = rows[a] & ~(1 << b)
        nb = rows[b] & ~(1 << a)
        if na.bit_count() < large - 1 or nb.bit_count() < small - 1:
            continue
        found = _grow_side(rows, [a], na, list(iter_bits(nb)), 0, small, large - 1)
        if found is not None:
            side, common = found
            other = [b] + list(iter_bits(common))[: large - 1]
            if small == s:
                return tuple(sorted(side)), tuple(sorted(other))
            return tuple(sorted(other)), tuple(sorted(side))
        if s == t:
            break
    return None


def _grow_side(rows, side, common, pool, start, size, need):
    if len(side) == size:
        return side, common
    for i in range(start, len(pool)):
        x = pool[i]
        c = common & rows[x]
        if c.bit_count() >= need:
            found = _grow_side(rows, side + [x], c, pool, i + 1, size, need)
            if found is not None:
                return found
    return None


def has_kst(g: Graph, s: int, t: int) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    found = find_kst(g, s, t)
    return found is not None, found


def is_kst_free(g: Graph, s: int, t: int) -> bool:
    return find_kst(g, s, t) is None


def is_star(g: Graph) -> bool:
    """True iff ``g`` is K_{1,n-1} (K_1 and K_2 included)."""
    n = g.n
    if n <= 2:
        return g.edge_count() == n - 1
    degs = g.degrees()
    return sorted(degs) == [1] * (n - 1) + [n - 1]


def twin_classes(g: Graph) -> list[list[int]]:
    """Classes of vertices with identical open neighbourhoods, ordered by least member."""
    classes: dict[int, list[int]] = {}
    for v, row in enumerate(g.rows):
        classes.setdefault(row, []).append(v)
    return sorted(classes.values())


def find_twins(g: Graph) -> tuple[int, int] | None:
    for cls in twin_classes(g):
        if len(cls) > 1:
            return cls[0], cls[1]
    return None


@dataclass
class WitnessReport:
    s: int
    t: int
    triangle_free: bool
    kst_free: bool
    diameter_two: bool
    is_star: bool
    twin_free: bool
    is_witness: bool
    graph6: str = ""
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_record(self) -> dict[str, Any]:
        rec = {
            "graph6": self.graph6,
            "s": self.s,
            "t": self.t,
            "triangle_free": self.triangle_free,
            "kst_free": self.kst_free,
            "diameter_two": self.diameter_two,
            "is_star": self.is_star,
            "twin_free": self.twin_free,
            "is_witness": self.is_witness,
        }
        if self.diagnostics:
            rec["diagnostics"] = self.diagnostics
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=False)


def witness_report(g: Graph, s: int, t: int) -> WitnessReport:
    tri = find_triangle(g)
    kst = find_kst(g, s, t)
    far = uncovered_pair(g)
    twins = find_twins(g)
    star = is_star(g)
    diag: dict[str, Any] = {}
    if tri:
        diag["triangle"] = list(tri)
    if kst:
        diag["kst"] = [list(kst[0]), list(kst[1])]
    if far:
        diag["uncovered_pair"] = list(far)
    if twins:
        diag["twins"] = list(twins)
    return WitnessReport(
        s=s,
        t=t,
        triangle_free=tri is None,
        kst_free=kst is None,
        diameter_two=far is None,
        is_star=star,
        twin_free=twins is None,
        is_witness=tri is None and kst is None and far is None and not star,
        graph6=to_graph6(g),
        diagnostics=diag,
    )


def is_witness(g: Graph, s: int = 2, t: int = 3) -> bool:
    return (
        find_triangle(g) is None
        and has_diameter_at_most_two(g)
        and not is_star(g)
        and find_kst(g, s, t) is None
    )


def _require_witness_hypotheses(g: Graph, t: int, *, allow_star: bool) -> None:
    if find_triangle(g) is not None:
        raise RejectedInput("triangle_free")
    if find_kst(g, 2, t) is not None:
        raise RejectedInput("kst_free", f"input contains K_(2,{t})")
    if not has_diameter_at_most_two(g):
        raise RejectedInput("diameter_two")
    if not allow_star and is_star(g):
        raise RejectedInput("not_star", "input is a star")


def degree_bound(min_degree: int, t: int) -> int:
    """Largest maximum degree permitted for a given minimum degree."""
    return (t - 1) * ((t - 1) * min_degree - t + 2) - t + 2


def check_degree_bound(g: Graph, t: int) -> bool:
    if t < 2:
        raise ValueError("t must be at least 2")
    _require_witness_hypotheses(g, t, allow_star=False)
    degs = g.degrees()
    return max(degs) <= degree_bound(min(degs), t)


def check_degree_sum_inequalities(g: Graph, t: int) -> tuple[Fraction, int, int, bool]:
    """Return ``(lower, n(n-1), sum of squared degrees, lower <= mid <= upper)``."""
    if t < 2:
        raise ValueError("t must be at least 2")
    _require_witness_hypotheses(g, t, allow_star=True)
    degs = g.degrees()
    lower = Fraction(sum(d * d + (t - 2) * d for d in degs), t - 1)
    mid = g.n * (g.n - 1)
    upper = sum(d * d for d in degs)
    return lower, mid, upper, lower <= mid <= upper


def max_degree_floor(g: Graph) -> bool:
    if not has_diameter_at_most_two(g):
        raise RejectedInput("diameter_two")
    return max(g.degrees()) ** 2 >= g.n - 1


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def consistent(self) -> bool:
        return self.k * (self.k - self.lam - 1) == (self.v - self.k - 1) * self.mu


def srg_params(g: Graph) -> SrgParams | None:
    rows = g.rows
    degs = g.degrees()
    k = degs[0]
    if any(d != k for d in degs):
        return None
    lam = mu = None
    for u in range(g.n):
        ru = rows[u]
        for w in range(u + 1, g.n):
            c = (ru & rows[w]).bit_count()
            if ru >> w & 1:
                if lam is None:
                    lam = c
                elif c != lam:
                    return None
            else:
                if mu is None:
                    mu = c
                elif c != mu:
                    return None
    if mu is None or mu < 1:
        return None
    return SrgParams(g.n, k, lam if lam is not None else 0, mu)


def srg_integrality(p: SrgParams | tuple[int, int, int, int]) -> bool:
    """Eigenvalue multiplicities of an srg with these parameters are nonnegative integers."""
    if not isinstance(p, SrgParams):
        p = SrgParams(*p)
    v, k, lam, mu = p.astuple()
    if not p.consistent():
        raise RejectedInput("srg_consistency", f"k(k-lambda-1) != (v-k-1)mu for {p.astuple()}")
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    num = 2 * k + (v - 1) * (lam - mu)
    root = isqrt(disc) if disc >= 0 else -1
    if root * root != disc:
        # irrational eigenvalues: only the conference case survives
        return num == 0 and (v - 1) % 2 == 0
    if root == 0:
        return False
    for sign in (1, -1):
        top = (v - 1) * root + sign * num
        if top % (2 * root) or top < 0:
            return False
    return True


def regular_witness_bracket(d: int) -> tuple[int, int]:
    if d < 2:
        raise ValueError("degree must be at least 2")
    return 1 + d * (d + 1) // 2, 1 + d * d


def is_edge_maximal_triangle_free(g: Graph) -> bool:
    if find_triangle(g) is not None:
        raise RejectedInput("triangle_free")
    rows = g.rows
    for u in range(g.n):
        ru = rows[u]
        for w in range(u + 1, g.n):
            if not ru >> w & 1 and not ru & rows[w]:
                return False
    return True


def census_signature(g: Graph) -> tuple[int, int, tuple[tuple[int, int], ...], str]:
    """``(n, edges, degree multiset, girth class)`` as the census tabulates them."""
    return g.n, g.edge_count(), tuple(g.degree_multiset().items()), girth_class(g)
