"""Exact cyclic-triangle factor search, maximum tilings, and the factor/barrier decision."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .graph_core import OrientedGraph, iter_bits
from .hypergraph import TriangleHypergraph, build_hypergraph

FOUND = "found"
PROVEN_NONE = "proven-none"
TIMEOUT = "timeout"
OPTIMAL = "optimal"


class SearchTimeout(Exception):
    pass


class _Clock:
    __slots__ = ("deadline", "nodes")

    def __init__(self, timeout: float | None):
        self.deadline = None if timeout is None else time.perf_counter() + timeout
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023 and time.perf_counter() > self.deadline:
            raise SearchTimeout


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint cyclic triangles, each listed as (a, b, c) with a->b->c->a."""

    triangles: tuple[tuple[int, int, int], ...] = ()

    def __len__(self):
        return len(self.triangles)

    def __iter__(self):
        return iter(self.triangles)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for t in self.triangles for v in t)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class TilingResult:
    outcome: str
    tiling: Tiling | None
    nodes: int
    millis: float
    optimal: bool | None = None

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "triangles": None if self.tiling is None else [list(t) for t in self.tiling],
            "nodes": self.nodes,
            "millis": round(self.millis, 3),
            "optimal": self.optimal,
        }


def _tiling_of(H: TriangleHypergraph, picks: Iterable[int]) -> Tiling:
    return Tiling(tuple(sorted(H.cycles[i] for i in picks)))


def _components_divisible(reach: dict[int, int], mask: int) -> bool:
    """Every connected component of the available triangles has size divisible by 3."""
    left = mask
    while left:
        low = left & -left
        comp = frontier = low
        while frontier:
            grown = 0
            for v in iter_bits(frontier):
                grown |= reach[v]
            frontier = grown & ~comp
            comp |= grown
        if comp.bit_count() % 3:
            return False
        left &= ~comp
    return True


def perfect_matching(H: TriangleHypergraph, mask: int | None = None, clock: _Clock | None = None) -> list[int] | None:
    """Hyperedge indices of a perfect matching of H[mask], or None if there is none.

    Branches on the uncovered vertex with the fewest available triangles
    (lowest label on ties), prunes components whose size is not a multiple of
    3, and caches vertex sets already shown to be unmatchable.  Raises
    SearchTimeout when ``clock`` runs out.
    """
    if mask is None:
        mask = (1 << H.n) - 1
    if mask.bit_count() % 3:
        return None
    masks, incident = H.masks, H.incident
    clock = clock or _Clock(None)
    failed: set[int] = set()

    def solve(m: int):
        if not m:
            return []
        if m in failed:
            return None
        clock.tick()
        best = None
        reach = {}
        for v in iter_bits(m):
            avail = [i for i in incident[v] if not masks[i] & ~m]
            if not avail:
                failed.add(m)
                return None
            r = 0
            for i in avail:
                r |= masks[i]
            reach[v] = r
            if best is None or len(avail) < len(best):
                best = avail
        if not _components_divisible(reach, m):
            failed.add(m)
            return None
        for i in best:
            sub = solve(m & ~masks[i])
            if sub is not None:
                sub.append(i)
                return sub
        failed.add(m)
        return None

    return solve(mask)


def find_factor(H: TriangleHypergraph, timeout: float | None = None) -> TilingResult:
    start = time.perf_counter()
    clock = _Clock(timeout)
    try:
        picks = perfect_matching(H, None, clock)
    except SearchTimeout:
        return TilingResult(TIMEOUT, None, clock.nodes, (time.perf_counter() - start) * 1e3, None)
    millis = (time.perf_counter() - start) * 1e3
    if picks is None:
        return TilingResult(PROVEN_NONE, None, clock.nodes, millis, True)
    return TilingResult(FOUND, _tiling_of(H, picks), clock.nodes, millis, True)


def _greedy_tiling(H: TriangleHypergraph) -> list[int]:
    m = (1 << H.n) - 1
    picks = []
    while True:
        best_v, best = None, None
        for v in iter_bits(m):
            avail = [i for i in H.incident[v] if not H.masks[i] & ~m]
            if avail and (best is None or len(avail) < len(best)):
                best_v, best = v, avail
        if best is None:
            return picks
        picks.append(best[0])
        m &= ~H.masks[best[0]]


def max_tiling(H: TriangleHypergraph, timeout: float | None = None) -> TilingResult:
    """Maximum-cardinality tiling by memoised branch and bound.

    The bound is floor(coverable / 3), where coverable counts uncovered
    vertices still lying in some available triangle; a subproblem stops as
    soon as it meets its bound.  On timeout the greedy incumbent is returned
    with ``optimal=False``.
    """
    start = time.perf_counter()
    masks, incident = H.masks, H.incident
    clock = _Clock(timeout)
    memo: dict[int, tuple[int, int, int]] = {}

    def best(m: int) -> int:
        hit = memo.get(m)
        if hit is not None:
            return hit[0]
        clock.tick()
        coverable = 0
        pivot, pivot_avail = None, None
        for v in iter_bits(m):
            avail = [i for i in incident[v] if not masks[i] & ~m]
            for i in avail:
                coverable |= masks[i]
            if avail and (pivot_avail is None or len(avail) < len(pivot_avail)):
                pivot, pivot_avail = v, avail
        if pivot is None:
            memo[m] = (0, -1, 0)
            return 0
        if coverable != m:
            value = best(coverable)
            memo[m] = (value, -2, coverable)
            return value
        bound = coverable.bit_count() // 3
        value, choice, nxt = -1, -1, 0
        for i in pivot_avail:
            sub = m & ~masks[i]
            got = 1 + best(sub)
            if got > value:
                value, choice, nxt = got, i, sub
                if value == bound:
                    break
        if value < bound:
            sub = m & ~(1 << pivot)
            got = best(sub)
            if got > value:
                value, choice, nxt = got, -2, sub
        memo[m] = (value, choice, nxt)
        return value

    full = (1 << H.n) - 1
    try:
        best(full)
    except SearchTimeout:
        picks = _greedy_tiling(H)
        return TilingResult(TIMEOUT, _tiling_of(H, picks), clock.nodes, (time.perf_counter() - start) * 1e3, False)
    picks = []
    m = full
    while True:
        value, choice, nxt = memo[m]
        if value == 0:
            break
        if choice >= 0:
            picks.append(choice)
        m = nxt
    millis = (time.perf_counter() - start) * 1e3
    return TilingResult(OPTIMAL, _tiling_of(H, picks), clock.nodes, millis, True)


def verify_tiling(G: OrientedGraph, T: Tiling, require_factor: bool = False) -> Verdict:
    used = set()
    for tri in T:
        if len(tri) != 3:
            return Verdict(False, f"{tri} is not a triple")
        a, b, c = tri
        for v in tri:
            if not 0 <= v < G.n:
                return Verdict(False, f"vertex {v} out of range")
            if v in used:
                return Verdict(False, f"vertex {v} is covered twice")
            used.add(v)
        if not (G.has_edge(a, b) and G.has_edge(b, c) and G.has_edge(c, a)):
            return Verdict(False, f"{tri} is not oriented as a cyclic triangle a->b->c->a")
    if require_factor and len(used) != G.n:
        missing = sorted(set(range(G.n)) - used)
        return Verdict(False, f"vertices {missing} are not covered")
    return Verdict(True, "ok")


FACTOR = "factor"
BARRIER = "barrier"
NO_FACTOR = "no-factor"
UNKNOWN = "unknown"


@dataclass
class Decision:
    """Result of ``decide``.

    ``outcome`` is one of ``factor``, ``barrier``, ``no-factor`` (no factor
    exists but no barrier was found either; only possible for
    graphs of low minimum semidegree) or ``unknown`` (both searches timed out).
    """

    outcome: str
    tiling: Tiling | None = None
    barrier: object | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "outcome": self.outcome,
            "triangles": None if self.tiling is None else [list(t) for t in self.tiling],
            "barrier": None if self.barrier is None else self.barrier.to_json(),
        }
        out.update(self.stats)
        return out


def decide(G: OrientedGraph, timeout: float | None = None) -> Decision:
    """Find a cyclic-triangle factor or a divisibility barrier, never both."""
    from .barrier import find_divisibility_barrier, trivial_certificate

    start = time.perf_counter()
    if G.n % 3:
        return Decision(BARRIER, barrier=trivial_certificate(), stats={"nodes": 0, "millis": 0.0})
    barrier_done = True
    cert = None
    try:
        cert = find_divisibility_barrier(G, timeout=timeout)
    except SearchTimeout:
        barrier_done = False
    if cert is not None:
        millis = (time.perf_counter() - start) * 1e3
        return Decision(BARRIER, barrier=cert, stats={"nodes": 0, "millis": round(millis, 3)})
    remaining = None if timeout is None else max(0.0, timeout - (time.perf_counter() - start))
    res = find_factor(build_hypergraph(G), remaining)
    stats = {
        "nodes": res.nodes,
        "millis": round((time.perf_counter() - start) * 1e3, 3),
        "barrier_search": "exhausted" if barrier_done else "timeout",
    }
    if res.outcome == FOUND:
        return Decision(FACTOR, tiling=res.tiling, stats=stats)
    if res.outcome == PROVEN_NONE:
        return Decision(NO_FACTOR, stats=stats)
    return Decision(UNKNOWN, stats=stats)
