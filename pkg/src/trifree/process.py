"""The constrained random graph process for {K_3, K_{s,t}} and a diameter-2 subgraph probe."""

from __future__ import annotations

import hashlib
import math
import random
import statistics
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .graph import MAX_VERTICES, Graph, iter_bits
from .properties import kst_through_pair

# the reporting anchor for the largest diameter-2 subgraph seen in published trials
PUBLISHED_PROBE_ANCHOR = 13


@dataclass
class ProcessTrace:
    n: int
    s: int
    t: int
    seed: int
    permutation_id: str
    accepted: list[tuple[int, int]]
    graph: Graph
    rejected: int
    # non-edge -> ("triangle", (w,)) or ("kst", S, T), found when the edge was refused
    certificate: dict[tuple[int, int], tuple] = field(repr=False)

    def prefix_graph(self, m: int) -> Graph:
        """The graph after the first ``m`` accepted edges."""
        return Graph.from_edges(self.n, self.accepted[:m])

    def to_record(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "s": self.s,
            "t": self.t,
            "seed": self.seed,
            "permutation_id": self.permutation_id,
            "edges": len(self.accepted),
            "rejected": self.rejected,
        }


def _shuffled_pairs(n: int, rng: random.Random) -> list[tuple[int, int]]:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    return pairs


def _permutation_id(pairs: list[tuple[int, int]]) -> str:
    h = hashlib.sha256()
    for u, v in pairs:
        h.update(f"{u},{v};".encode())
    return h.hexdigest()[:16]


def run_process(n: int, s: int, t: int, seed: int) -> ProcessTrace:
    """Add the edges of K_n in a seeded random order, keeping each one that creates no K_3 or K_{s,t}."""
    if not 4 <= n <= MAX_VERTICES:
        raise ValueError(f"n must lie in 4..{MAX_VERTICES}")
    if not 2 <= s <= t:
        raise ValueError("need 2 <= s <= t")
    rng = random.Random(seed)
    pairs = _shuffled_pairs(n, rng)
    rows = [0] * n
    accepted = []
    certificate = {}
    for u, v in pairs:
        common = rows[u] & rows[v]
        if common:
            w = (common & -common).bit_length() - 1
            certificate[(u, v)] = ("triangle", (w,))
            continue
        kst = kst_through_pair(rows, u, v, s, t)
        if kst is not None:
            certificate[(u, v)] = ("kst",) + kst
            continue
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        accepted.append((u, v))
    return ProcessTrace(
        n=n,
        s=s,
        t=t,
        seed=seed,
        permutation_id=_permutation_id(pairs),
        accepted=accepted,
        graph=Graph(n, rows, check=False),
        rejected=len(pairs) - len(accepted),
        certificate=certificate,
    )


def verify_certificate(trace: ProcessTrace) -> bool:
    """Check that each non-edge of the final graph has a valid recorded obstruction."""
    g = trace.graph
    for u, v in g.non_edges():
        entry = trace.certificate.get((u, v)) or trace.certificate.get((v, u))
        if entry is None:
            return False
        if entry[0] == "triangle":
            (w,) = entry[1]
            if not (g.has_edge(u, w) and g.has_edge(v, w)):
                return False
        elif entry[0] == "kst":
            S, T = entry[1], entry[2]
            if len(S) != trace.s or len(T) != trace.t or set(S) & set(T):
                return False
            if not ((u in S and v in T) or (v in S and u in T)):
                return False
            for a in S:
                for b in T:
                    if {a, b} != {u, v} and not g.has_edge(a, b):
                        return False
        else:
            return False
    return True


def diameter2_threshold(n: int) -> float:
    """Edge count at which G(n, m) typically reaches diameter 2 (natural log)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return math.sqrt(n ** 3 * math.log(n) / 2)


def expected_uncovered_pairs(n: int, m: float) -> float:
    """Heuristic expected number of vertex pairs without a common neighbour in G(n, m)."""
    if n < 2 or m < 0:
        raise ValueError("need n >= 2 and m >= 0")
    return 0.5 * n * n * math.exp(-4 * m * m / n ** 3)


# --- the diameter-2 probe ---------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    vertices: tuple[int, ...]
    order: int
    exact: bool


def _is_diameter2_set(rows, mask: int) -> bool:
    for u in iter_bits(mask):
        reach = rows[u] & mask
        for w in iter_bits(reach):
            reach |= rows[w] & mask
        if (mask & ~reach & ~(1 << u)):
            return False
    return True


def _uncovered(rows, mask: int, u: int) -> int:
    """Vertices of ``mask`` that ``u`` cannot reach within two steps inside ``mask``."""
    near = rows[u] & mask
    reach = near | 1 << u
    for w in iter_bits(near):
        reach |= rows[w]
    return mask & ~reach


class _BudgetExceeded(Exception):
    pass


def _exact(rows, n: int, budget: int) -> tuple[int, int]:
    """Branch and bound; returns ``(best mask, nodes used)`` or raises ``_BudgetExceeded``."""
    best = [1 if n else 0, 0]
    nodes = [0]

    def pair_dead(chosen: int, pool: int) -> bool:
        # a non-adjacent chosen pair whose common neighbours have all been excluded
        allowed = chosen | pool
        for u in iter_bits(chosen):
            far = chosen & ~rows[u] & ~((1 << (u + 1)) - 1)
            for w in iter_bits(far):
                if not rows[u] & rows[w] & allowed:
                    return True
        return False

    def rec(chosen: int, pool: int) -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise _BudgetExceeded
        size = chosen.bit_count()
        if size + pool.bit_count() <= best[0].bit_count():
            return
        if pair_dead(chosen, pool):
            return
        if not pool:
            best[0] = chosen
            return
        v = (pool & -pool).bit_length() - 1
        rest = pool & ~(1 << v)
        rec(chosen | 1 << v, rest)
        rec(chosen, rest)

    rec(0, (1 << n) - 1)
    return best[0], nodes[0]


def _peel(rows, mask: int) -> int:
    """Remove the vertex in the most uncovered pairs (lowest index on ties) until diameter <= 2."""
    while True:
        worst = -1
        worst_count = 0
        for u in iter_bits(mask):
            c = _uncovered(rows, mask, u).bit_count()
            if c > worst_count:
                worst, worst_count = u, c
        if worst_count == 0:
            return mask
        mask &= ~(1 << worst)


def _heuristic(g: Graph, rounds: int, seed: int) -> int:
    rows = g.rows
    n = g.n
    full = (1 << n) - 1
    starts = [full]
    if n:
        hub = max(range(n), key=lambda v: (rows[v].bit_count(), -v))
        starts.append(rows[hub] | 1 << hub)
    rng = random.Random(seed)
    for _ in range(rounds if n else 0):
        v = rng.randrange(n)
        ball = rows[v] | 1 << v
        for w in iter_bits(rows[v]):
            ball |= rows[w]
        starts.append(ball)
    best = 0
    for start in starts:
        core = _peel(rows, start)
        if core.bit_count() > best.bit_count():
            best = core
    return best


def max_diameter2_subgraph(g: Graph, exact_limit: int = 12, budget: int = 2_000_000, rounds: int = 8, seed: int = 0) -> ProbeResult:
    """Largest vertex set inducing a subgraph of diameter at most 2.

    Exact branch and bound when ``g.n <= exact_limit`` and the node budget
    suffices; otherwise the best of several peeling runs, flagged inexact.
    """
    rows = g.rows
    if g.n <= exact_limit:
        try:
            mask, _ = _exact(rows, g.n, budget)
            return ProbeResult(tuple(iter_bits(mask)), mask.bit_count(), True)
        except _BudgetExceeded:
            pass
    mask = _heuristic(g, rounds, seed)
    return ProbeResult(tuple(iter_bits(mask)), mask.bit_count(), False)


def brute_force_diameter2(g: Graph) -> int:
    """Order of the largest diameter-2 induced subgraph by trying every subset, largest first."""
    for size in range(g.n, 0, -1):
        for subset in combinations(range(g.n), size):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if _is_diameter2_set(g.rows, mask):
                return size
    return 0


# --- experiments ------------------------------------------------------------


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n: int
    s: int
    t: int
    edges: int
    threshold_ratio: float
    rejected: int
    saturated: bool
    probe_order: int | None
    probe_exact: bool
    permutation_id: str

    def to_record(self) -> dict[str, Any]:
        return {
            "trial": self.trial,
            "seed": self.seed,
            "n": self.n,
            "s": self.s,
            "t": self.t,
            "edges": self.edges,
            "threshold_ratio": round(self.threshold_ratio, 6),
            "rejected": self.rejected,
            "saturated": self.saturated,
            "probe_order": self.probe_order,
            "probe_exact": self.probe_exact,
            "permutation_id": self.permutation_id,
        }


def trial_seeds(seed: int, trials: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(trials)]


def _run_trial(args) -> tuple[TrialRecord, ProcessTrace]:
    i, trial_seed, n, s, t, exact_limit, probe = args
    trace = run_process(n, s, t, trial_seed)
    if probe:
        result = max_diameter2_subgraph(trace.graph, exact_limit=exact_limit, seed=trial_seed)
        order, exact = result.order, result.exact
    else:
        order, exact = None, False
    rec = TrialRecord(
        trial=i,
        seed=trial_seed,
        n=n,
        s=s,
        t=t,
        edges=len(trace.accepted),
        threshold_ratio=len(trace.accepted) / diameter2_threshold(n),
        rejected=trace.rejected,
        saturated=verify_certificate(trace),
        probe_order=order,
        probe_exact=exact,
        permutation_id=trace.permutation_id,
    )
    return rec, trace


@dataclass
class ExperimentSummary:
    n: int
    s: int
    t: int
    seed: int
    trials: list[TrialRecord]
    graphs: list[Graph] = field(default_factory=list, repr=False)

    @property
    def all_saturated(self) -> bool:
        return all(r.saturated for r in self.trials)

    def to_record(self) -> dict[str, Any]:
        edges = [r.edges for r in self.trials]
        probes = [r.probe_order for r in self.trials if r.probe_order is not None]
        distribution: dict[str, int] = {}
        for p in sorted(probes):
            distribution[str(p)] = distribution.get(str(p), 0) + 1
        return {
            "summary": True,
            "n": self.n,
            "s": self.s,
            "t": self.t,
            "seed": self.seed,
            "trials": len(self.trials),
            "all_saturated": self.all_saturated,
            "edges_min": min(edges),
            "edges_mean": round(statistics.fmean(edges), 6),
            "edges_max": max(edges),
            "threshold": round(diameter2_threshold(self.n), 6),
            "threshold_ratio_mean": round(statistics.fmean(r.threshold_ratio for r in self.trials), 6),
            "probe_orders": distribution,
            "probe_above_anchor": sum(1 for p in probes if p > PUBLISHED_PROBE_ANCHOR),
        }


def experiment(n: int, s: int, t: int, trials: int, seed: int, *, exact_limit: int = 12, probe: bool = True, workers: int = 1) -> ExperimentSummary:
    """Independent seeded trials of the process, aggregated in trial order."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tasks = [(i, ts, n, s, t, exact_limit, probe) for i, ts in enumerate(trial_seeds(seed, trials))]
    if workers > 1 and trials > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            results = pool.map(_run_trial, tasks)
    else:
        results = [_run_trial(task) for task in tasks]
    return ExperimentSummary(n, s, t, seed, [r for r, _ in results], [tr.graph for _, tr in results])
