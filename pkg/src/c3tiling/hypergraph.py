"""H(G): the 3-uniform hypergraph whose edges are the cyclic triangles of G."""

from __future__ import annotations

from .graph_core import OrientedGraph, cyclic_triples


class TriangleHypergraph:
    """Cyclic triangles of a graph with a per-vertex incidence index.

    ``triples[i]`` is the sorted vertex triple of hyperedge i, ``cycles[i]`` the
    same triangle as (a, b, c) with a->b->c->a, and ``masks[i]`` its bitmask.
    ``incident[v]`` lists the hyperedge indices through v.
    """

    __slots__ = ("n", "graph", "triples", "cycles", "masks", "incident")

    def __init__(self, G: OrientedGraph):
        self.n = G.n
        self.graph = G
        cycles = list(cyclic_triples(G))
        cycles.sort(key=lambda t: sorted(t))
        self.cycles = cycles
        self.triples = [tuple(sorted(t)) for t in cycles]
        self.masks = [(1 << a) | (1 << b) | (1 << c) for a, b, c in cycles]
        incident: list[list[int]] = [[] for _ in range(G.n)]
        for i, (a, b, c) in enumerate(self.triples):
            incident[a].append(i)
            incident[b].append(i)
            incident[c].append(i)
        self.incident = incident

    def __len__(self):
        return len(self.triples)

    @property
    def num_edges(self) -> int:
        return len(self.triples)

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    def edge_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(t) for t in self.triples)

    def has_edge(self, a: int, b: int, c: int) -> bool:
        target = (1 << a) | (1 << b) | (1 << c)
        return any(self.masks[i] == target for i in self.incident[a])


def build_hypergraph(G: OrientedGraph) -> TriangleHypergraph:
    return TriangleHypergraph(G)


def min_hyperdegree(H: TriangleHypergraph) -> int:
    if H.n == 0:
        raise ValueError("empty hypergraph has no minimum degree")
    return min(len(inc) for inc in H.incident)
