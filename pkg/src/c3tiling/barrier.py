"""Divisibility barriers: the trivial mod-3 barrier and cyclic three-part barriers.

A three-part barrier is a colouring c: V -> Z_3 with every arc u->v satisfying
c(v) - c(u) in {0, 1}, all classes nonempty, and class sizes not all
congruent mod 3.  Colour i is part V_{i+1}.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .graph_core import OrientedGraph, Partition, edge_count_masks, iter_bits
from .solver import SearchTimeout, Verdict

TRIVIAL = "trivial"
THREE_PART = "three_part"

ALL_COLOURS = 0b111


@dataclass(frozen=True)
class BarrierCertificate:
    kind: str
    partition: Partition | None = None

    def __post_init__(self):
        if self.kind == THREE_PART and (self.partition is None or len(self.partition) != 3):
            raise ValueError("three-part certificates carry a partition with three parts")

    def to_json(self) -> dict:
        return {"kind": self.kind, "parts": None if self.partition is None else self.partition.as_lists()}


def trivial_certificate() -> BarrierCertificate:
    return BarrierCertificate(TRIVIAL)


def backward_edge_counts(G: OrientedGraph, P: Partition) -> tuple[int, int, int]:
    """e+(V2, V1), e+(V3, V2), e+(V1, V3)."""
    a, b, c = P.masks
    return edge_count_masks(G, b, a), edge_count_masks(G, c, b), edge_count_masks(G, a, c)


def verify_divisibility_barrier(G: OrientedGraph, P: Partition) -> Verdict:
    if P.n != G.n:
        return Verdict(False, f"partition covers {P.n} vertices, graph has {G.n}")
    if P.is_trivial():
        if G.n % 3:
            return Verdict(True, "trivial partition and n is not divisible by 3")
        return Verdict(False, "trivial partition but n is divisible by 3")
    if len(P) != 3:
        return Verdict(False, f"a barrier has 1 or 3 parts, not {len(P)}")
    back = backward_edge_counts(G, P)
    for count, name in zip(back, ("V2->V1", "V3->V2", "V1->V3")):
        if count:
            return Verdict(False, f"{count} arcs directed {name}")
    residues = {s % 3 for s in P.sizes}
    if len(residues) == 1:
        return Verdict(False, f"part sizes {P.sizes} are all congruent mod 3")
    return Verdict(True, f"cyclic three-part barrier with sizes {P.sizes}")


def _rot_up(d: int) -> int:
    """Colour set {x + 1 : x in d}."""
    return ((d << 1) | (d >> 2)) & ALL_COLOURS


def _rot_down(d: int) -> int:
    return ((d >> 1) | (d << 2)) & ALL_COLOURS


def find_divisibility_barrier(G: OrientedGraph, timeout: float | None = None) -> BarrierCertificate | None:
    """Return a barrier certificate, or None after an exhaustive search.

    Backtracking over mod-3 colourings with vertex 0 fixed to colour 1 (the
    constraints are invariant under rotating all colours).  Assigning a
    colour restricts each out-neighbour to {c, c+1} and each in-neighbour to
    {c-1, c}; singleton domains propagate.  The next vertex is the one with
    the smallest domain, preferring the most already-coloured neighbours.
    """
    n = G.n
    if n % 3:
        return trivial_certificate()
    if n < 3:
        return None
    out, inn = G.out, G.inn
    nbr = [o | i for o, i in zip(out, inn)]
    deadline = None if timeout is None else time.perf_counter() + timeout
    nodes = 0

    def assign(dom: list[int], v: int, colour_bit: int) -> list[int] | None:
        dom = dom[:]
        dom[v] = colour_bit
        stack = [v]
        while stack:
            u = stack.pop()
            d = dom[u]
            up, down = d | _rot_up(d), d | _rot_down(d)
            for w in iter_bits(out[u]):
                old = dom[w]
                new = old & up
                if new != old:
                    if not new:
                        return None
                    dom[w] = new
                    if new & (new - 1) == 0:
                        stack.append(w)
            for w in iter_bits(inn[u]):
                old = dom[w]
                new = old & down
                if new != old:
                    if not new:
                        return None
                    dom[w] = new
                    if new & (new - 1) == 0:
                        stack.append(w)
        return dom

    def search(dom: list[int]):
        nonlocal nodes
        nodes += 1
        if deadline is not None and not nodes & 1023 and time.perf_counter() > deadline:
            raise SearchTimeout
        fixed = 0
        for v, d in enumerate(dom):
            if d & (d - 1) == 0:
                fixed |= 1 << v
        pick, pick_key = -1, None
        for v in range(n):
            if fixed >> v & 1:
                continue
            key = (dom[v].bit_count(), -(nbr[v] & fixed).bit_count())
            if pick_key is None or key < pick_key:
                pick, pick_key = v, key
        if pick < 0:
            sizes = [0, 0, 0]
            for d in dom:
                sizes[d.bit_length() - 1] += 1
            if all(sizes) and len({s % 3 for s in sizes}) > 1:
                return dom
            return None
        for colour in iter_bits(dom[pick]):
            nxt = assign(dom, pick, 1 << colour)
            if nxt is not None:
                found = search(nxt)
                if found is not None:
                    return found
        return None

    start = assign([ALL_COLOURS] * n, 0, 1 << 1)
    found = None if start is None else search(start)
    if found is None:
        return None
    labels = [d.bit_length() - 1 for d in found]
    return BarrierCertificate(THREE_PART, Partition.from_labels(labels, 3))
