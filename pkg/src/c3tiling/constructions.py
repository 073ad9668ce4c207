"""Graph generators: extremal constructions, rotational tournaments, random walks, enumeration."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import floor
from typing import Callable, Iterable

from .graph_core import OrientedGraph, Partition, iter_bits

KINDS = ("barrier", "ks", "circulant", "near_regular", "random_min_semidegree", "regular_sample")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    m_or_n: int
    c: Fraction = Fraction(0)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown construction kind {self.kind!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        k = self.m_or_n
        if k < 1:
            raise ValueError("the size parameter must be positive")
        if self.kind == "barrier" and k < 2:
            raise ValueError("barrier construction needs m >= 2")
        if self.kind == "circulant" and (k < 3 or k % 2 == 0):
            raise ValueError("circulant tournaments need odd n >= 3")
        if self.kind == "regular_sample" and k % 2 == 0:
            raise ValueError("regular tournaments need odd n")

    def build(self) -> tuple[OrientedGraph, Partition | None]:
        k = self.m_or_n
        if self.kind == "barrier":
            return barrier_tournament(k)
        if self.kind == "ks":
            return ks_construction(k)
        if self.kind == "circulant":
            return circulant_tournament(k), None
        if self.kind == "near_regular":
            return near_regular_tournament(k), None
        if self.kind == "random_min_semidegree":
            return random_min_semidegree(k, self.c, self.seed), None
        return random_regular_tournament(k, self.seed), None


def _near_regular_edges(vertices: list[int]) -> Iterable[tuple[int, int]]:
    s = len(vertices)
    half = s // 2
    for i in range(s):
        if s % 2:
            steps = range(1, half + 1)
        else:
            steps = range(1, half + (1 if i < half else 0))
        for j in steps:
            yield vertices[i], vertices[(i + j) % s]


def circulant_tournament(n: int) -> OrientedGraph:
    """i -> i+j (mod n) for j = 1..(n-1)/2."""
    if n < 3 or n % 2 == 0:
        raise ValueError("circulant tournaments need odd n >= 3")
    return OrientedGraph(n, _near_regular_edges(list(range(n))))


def near_regular_tournament(s: int) -> OrientedGraph:
    """Tournament on ``s`` vertices with minimum semidegree floor((s-1)/2).

    Odd ``s`` gives the circulant; for even ``s`` vertex i beats
    i+1..i+s/2-1 and additionally i+s/2 when i < s/2.
    """
    if s < 1:
        raise ValueError("near-regular tournaments need s >= 1")
    return OrientedGraph(s, _near_regular_edges(list(range(s))))


def _complete_arcs(src: list[int], dst: list[int]) -> Iterable[tuple[int, int]]:
    return ((u, v) for u in src for v in dst)


def barrier_tournament(m: int) -> tuple[OrientedGraph, Partition]:
    """Tournament on 3m vertices with parts of sizes m-1, m, m+1 and cross arcs V1->V2->V3->V1."""
    if m < 2:
        raise ValueError("barrier tournament needs m >= 2")
    v1 = list(range(0, m - 1))
    v2 = list(range(m - 1, 2 * m - 1))
    v3 = list(range(2 * m - 1, 3 * m))
    edges = []
    for part in (v1, v2, v3):
        edges.extend(_near_regular_edges(part))
    edges.extend(_complete_arcs(v1, v2))
    edges.extend(_complete_arcs(v2, v3))
    edges.extend(_complete_arcs(v3, v1))
    return OrientedGraph(3 * m, edges), Partition([v1, v2, v3], 3 * m)


def ks_construction(m: int) -> tuple[OrientedGraph, Partition]:
    """Oriented graph on 9(m+1) vertices, parts 3m+1, 3m+4, 3m+4, semidegree 4n/9 - 2.

    Inside each part the vertices sit on a cycle and each one points to the
    (|V_i| - 1)/3 vertices after it, so in-part pairs further apart stay
    non-adjacent.
    """
    if m < 1:
        raise ValueError("ks construction needs m >= 1")
    sizes = (3 * m + 1, 3 * m + 4, 3 * m + 4)
    parts, start = [], 0
    for s in sizes:
        parts.append(list(range(start, start + s)))
        start += s
    edges = []
    for part in parts:
        s = len(part)
        reach = (s - 1) // 3
        for i in range(s):
            edges.extend((part[i], part[(i + j) % s]) for j in range(1, reach + 1))
    for i in range(3):
        edges.extend(_complete_arcs(parts[i], parts[(i + 1) % 3]))
    n = 9 * (m + 1)
    return OrientedGraph(n, edges), Partition(parts, n)


def semidegree_floor(n: int, c) -> int:
    """Integer semidegree target floor((1/2 - c) n), clipped at zero."""
    return max(0, floor((Fraction(1, 2) - Fraction(c)) * n))


def random_min_semidegree(n: int, c, seed: int, steps: int | None = None) -> OrientedGraph:
    """Random oriented graph with semidegree >= floor((1/2 - c) n).

    Starts from the near-regular tournament and runs a seeded walk of
    single-arc reversals, cyclic-triangle reversals, deletions and
    re-insertions, rejecting every move that would break the floor.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    target = semidegree_floor(n, c)
    if target > (n - 1) // 2:
        raise ValueError(f"semidegree {target} infeasible on {n} vertices (max {(n - 1) // 2})")
    rng = random.Random(seed)
    out = list(near_regular_tournament(n).out)
    inn = [0] * n
    for u in range(n):
        for v in iter_bits(out[u]):
            inn[v] |= 1 << u
    dout = [m.bit_count() for m in out]
    din = [m.bit_count() for m in inn]
    arcs = [(u, v) for u in range(n) for v in iter_bits(out[u])]
    arc_index = {a: i for i, a in enumerate(arcs)}
    missing: list[tuple[int, int]] = []

    def drop_arc(u, v):
        i = arc_index.pop((u, v))
        last = arcs.pop()
        if i < len(arcs):
            arcs[i] = last
            arc_index[last] = i
        out[u] &= ~(1 << v)
        inn[v] &= ~(1 << u)
        dout[u] -= 1
        din[v] -= 1

    def put_arc(u, v):
        arc_index[(u, v)] = len(arcs)
        arcs.append((u, v))
        out[u] |= 1 << v
        inn[v] |= 1 << u
        dout[u] += 1
        din[v] += 1

    if steps is None:
        steps = 10 * n * n
    for _ in range(steps):
        if not arcs:
            break
        r = rng.random()
        u, v = arcs[rng.randrange(len(arcs))]
        if r < 0.35:
            if dout[u] - 1 >= target and din[v] - 1 >= target:
                drop_arc(u, v)
                put_arc(v, u)
        elif r < 0.7:
            ws = list(iter_bits(out[v] & inn[u]))
            if ws:
                w = ws[rng.randrange(len(ws))]
                for a, b in ((u, v), (v, w), (w, u)):
                    drop_arc(a, b)
                for a, b in ((v, u), (w, v), (u, w)):
                    put_arc(a, b)
        elif r < 0.85:
            if dout[u] - 1 >= target and din[v] - 1 >= target:
                drop_arc(u, v)
                missing.append((u, v) if u < v else (v, u))
        elif missing:
            i = rng.randrange(len(missing))
            a, b = missing[i]
            missing[i] = missing[-1]
            missing.pop()
            if rng.random() < 0.5:
                a, b = b, a
            put_arc(a, b)
    return OrientedGraph._trusted(n, tuple(out), tuple(inn))


def random_regular_tournament(n: int, seed: int, steps: int | None = None) -> OrientedGraph:
    if n < 1 or n % 2 == 0:
        raise ValueError("regular tournaments need odd n")
    return random_min_semidegree(n, 0, seed, steps)


def first_row_choices(n: int) -> list[int]:
    """Out-neighbourhood masks vertex 0 may take in a regular tournament on n vertices."""
    k = (n - 1) // 2
    return [sum(1 << j for j in c) for c in combinations(range(1, n), k)]


def enumerate_regular_tournaments(
    n: int,
    visitor: Callable[[OrientedGraph], object] | None = None,
    *,
    allow_large: bool = False,
    first_rows: Iterable[int] | None = None,
) -> int:
    """Visit every labelled regular tournament on ``n`` vertices once; return the count.

    Row i of the upper-triangular orientation matrix is filled in one step by
    choosing which later vertices i beats.  A later vertex that already has
    (n-1)/2 wins must lose to i; one that cannot reach (n-1)/2 otherwise must
    beat i.  ``first_rows`` restricts row 0 to the given masks so the tree can
    be split across workers.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("regular tournaments need odd n")
    if n > 9 and not allow_large:
        raise ValueError("n > 9 is refused unless allow_large=True")
    k = (n - 1) // 2
    full = (1 << n) - 1
    out = [0] * n
    count = 0
    allowed_first = None if first_rows is None else set(first_rows)

    def leaf():
        nonlocal count
        count += 1
        if visitor is not None:
            outs = tuple(out)
            visitor(OrientedGraph._trusted(n, outs, tuple(full ^ o ^ (1 << v) for v, o in enumerate(outs))))

    def row(i):
        if i == n - 1:
            leaf()
            return
        rest = full & ~((2 << i) - 1)
        forced_in = forced_out = 0
        remaining_after = n - 2 - i
        for j in iter_bits(rest):
            wins = out[j].bit_count()
            if wins >= k:
                forced_in |= 1 << j
            if wins + remaining_after < k:
                forced_out |= 1 << j
        if forced_in & forced_out:
            return
        free = list(iter_bits(rest & ~forced_in & ~forced_out))
        need = k - out[i].bit_count() - forced_in.bit_count()
        if need < 0 or need > len(free):
            return
        saved = out[:]
        bit_i = 1 << i
        for chosen in combinations(free, need):
            s = forced_in
            for j in chosen:
                s |= 1 << j
            if i == 0 and allowed_first is not None and s not in allowed_first:
                continue
            out[i] = saved[i] | s
            for j in iter_bits(rest & ~s):
                out[j] = saved[j] | bit_i
            row(i + 1)
            for j in iter_bits(rest & ~s):
                out[j] = saved[j]
        out[i] = saved[i]

    if n == 1:
        leaf()
        return count
    row(0)
    return count
