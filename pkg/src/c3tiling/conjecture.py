"""Exhaustive check that every labelled regular tournament on n vertices has a factor."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable

from .barrier import find_divisibility_barrier
from .constructions import enumerate_regular_tournaments, first_row_choices
from .graph_core import OrientedGraph
from .hypergraph import build_hypergraph
from .solver import perfect_matching


@dataclass
class ConjectureTally:
    n: int
    count: int = 0
    with_factor: int = 0
    factorless: list[list[tuple[int, int]]] = field(default_factory=list)
    barriers: list[list[tuple[int, int]]] = field(default_factory=list)

    def merge(self, other: "ConjectureTally") -> None:
        self.count += other.count
        self.with_factor += other.with_factor
        self.factorless.extend(other.factorless)
        self.barriers.extend(other.barriers)

    @property
    def holds(self) -> bool:
        return self.count == self.with_factor and not self.barriers

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "count": self.count,
            "with_factor": self.with_factor,
            "factorless": [[list(e) for e in g] for g in self.factorless],
            "barriers_found": [[list(e) for e in g] for g in self.barriers],
            "holds": self.holds,
        }


def _edge_list(G: OrientedGraph) -> list[tuple[int, int]]:
    return sorted(G.edges)


def check_chunk(n: int, first_rows: list[int] | None = None, check_barriers: bool = True,
                progress: Callable[[int], None] | None = None, allow_large: bool = False) -> ConjectureTally:
    tally = ConjectureTally(n)
    divisible = n % 3 == 0

    def visit(G: OrientedGraph):
        tally.count += 1
        if divisible:
            if perfect_matching(build_hypergraph(G)) is not None:
                tally.with_factor += 1
            else:
                tally.factorless.append(_edge_list(G))
            if check_barriers and find_divisibility_barrier(G) is not None:
                tally.barriers.append(_edge_list(G))
        else:
            tally.with_factor += 1
        if progress is not None and tally.count % 10_000 == 0:
            progress(tally.count)

    enumerate_regular_tournaments(n, visit, allow_large=allow_large, first_rows=first_rows)
    return tally


def _worker(args):
    n, rows, check_barriers, allow_large = args
    return check_chunk(n, rows, check_barriers, None, allow_large)


def verify_conjecture(n: int, jobs: int = 1, check_barriers: bool = True, allow_large: bool = False,
                      stream=None) -> ConjectureTally:
    """Enumerate all labelled regular tournaments on n vertices and solve each one.

    For n not divisible by 3 only the count is meaningful.  With ``jobs > 1``
    the first row of the orientation matrix is split across processes.
    """
    stream = stream if stream is not None else sys.stderr

    def progress(k):
        print(f"n={n}: {k} tournaments checked", file=stream, flush=True)

    if jobs <= 1:
        return check_chunk(n, None, check_barriers, progress, allow_large)
    rows = first_row_choices(n)
    chunks = [(n, [r], check_barriers, allow_large) for r in rows]
    total = ConjectureTally(n)
    with Pool(jobs) as pool:
        for part in pool.imap(_worker, chunks):
            total.merge(part)
            print(f"n={n}: {total.count} tournaments checked", file=stream, flush=True)
    total.factorless.sort()
    total.barriers.sort()
    return total
