"""Oriented graphs on dense vertex labels, with degree and triangle counting kernels.

Vertices are ``0..n-1``.  Adjacency is kept as two tuples of integer
bitmasks (out- and in-neighbourhoods), so co-degree queries are a single
``&`` followed by ``int.bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

PLUS = "+"
MINUS = "-"


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def _as_mask(vs, n: int) -> int:
    if isinstance(vs, int):
        raise TypeError("vertex sets are passed as collections of vertices, not ints")
    mask = mask_of(vs)
    if mask >> n:
        raise ValueError(f"vertex set {sorted(vs)} not contained in 0..{n - 1}")
    return mask


class OrientedGraph:
    """Immutable oriented graph: no loops, at most one arc per pair."""

    __slots__ = ("n", "out", "inn", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        out = [0] * n
        inn = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if out[v] >> u & 1:
                raise ValueError(f"antiparallel pair ({u}, {v})")
            if out[u] >> v & 1:
                raise ValueError(f"duplicate edge ({u}, {v})")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        self.n = n
        self.out = tuple(out)
        self.inn = tuple(inn)
        self._edges = None

    @classmethod
    def from_out_masks(cls, n: int, out: Sequence[int]) -> "OrientedGraph":
        full = (1 << n) - 1
        inn = [0] * n
        for u in range(n):
            m = out[u]
            if m & ~full or m >> u & 1:
                raise ValueError(f"bad out-neighbourhood mask for vertex {u}")
            for v in iter_bits(m):
                inn[v] |= 1 << u
        for u in range(n):
            if out[u] & inn[u]:
                raise ValueError(f"antiparallel pair at vertex {u}")
        return cls._trusted(n, tuple(out), tuple(inn))

    @classmethod
    def _trusted(cls, n: int, out: tuple, inn: tuple) -> "OrientedGraph":
        g = object.__new__(cls)
        g.n = n
        g.out = out
        g.inn = inn
        g._edges = None
        return g

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        if self._edges is None:
            self._edges = frozenset(
                (u, v) for u in range(self.n) for v in iter_bits(self.out[u])
            )
        return self._edges

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self.out)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def outdeg(self, v: int, within: int | None = None) -> int:
        m = self.out[v]
        return (m if within is None else m & within).bit_count()

    def indeg(self, v: int, within: int | None = None) -> int:
        m = self.inn[v]
        return (m if within is None else m & within).bit_count()

    def is_tournament(self) -> bool:
        full = self.vertex_mask
        return all((self.out[v] | self.inn[v] | 1 << v) == full for v in range(self.n))

    def induced(self, vertices: Iterable[int]) -> "OrientedGraph":
        """Subgraph induced on ``vertices``, relabelled in increasing order."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        return OrientedGraph(
            len(vs),
            ((index[u], index[v]) for u in vs for v in iter_bits(self.out[u]) if v in index),
        )

    def __eq__(self, other):
        return isinstance(other, OrientedGraph) and self.n == other.n and self.out == other.out

    def __hash__(self):
        return hash((self.n, self.out))

    def __repr__(self):
        return f"OrientedGraph(n={self.n}, m={self.num_edges()})"


@dataclass(frozen=True)
class Partition:
    """Ordered list of disjoint nonempty parts covering ``0..n-1``."""

    parts: tuple[frozenset[int], ...]
    n: int

    def __init__(self, parts: Iterable[Iterable[int]], n: int | None = None):
        ps = tuple(frozenset(p) for p in parts)
        total = sum(len(p) for p in ps)
        if n is None:
            n = total
        if any(not p for p in ps):
            raise ValueError("partition parts must be nonempty")
        union = frozenset().union(*ps)
        if len(union) != total:
            raise ValueError("partition parts overlap")
        if union != frozenset(range(n)):
            raise ValueError(f"partition does not cover exactly 0..{n - 1}")
        object.__setattr__(self, "parts", ps)
        object.__setattr__(self, "n", n)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(p) for p in self.parts)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def is_trivial(self) -> bool:
        return len(self.parts) == 1

    def as_lists(self) -> list[list[int]]:
        return [sorted(p) for p in self.parts]

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: int) -> "Partition":
        return cls([[v for v, c in enumerate(labels) if c == i] for i in range(k)], len(labels))


def _unit_fraction(name: str, value) -> Fraction:
    f = Fraction(value)
    if not 0 <= f <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return f


@dataclass(frozen=True)
class Thresholds:
    """Explicit constants for the lemma audits; all exact rationals."""

    c: Fraction = Fraction(0)
    alpha: Fraction = Fraction(1, 1000)
    beta: Fraction = Fraction(1, 100)
    gamma: Fraction = Fraction(1, 10)
    mu: Fraction = Fraction(0)
    xi: Fraction = Fraction(1, 10)
    eta: Fraction = Fraction(1, 10)
    ell: int = 1

    def __post_init__(self):
        for name in ("c", "alpha", "beta", "gamma", "mu", "xi", "eta"):
            object.__setattr__(self, name, _unit_fraction(name, getattr(self, name)))
        if int(self.ell) != self.ell or self.ell < 1:
            raise ValueError("ell must be a positive integer")


def semidegree(G: OrientedGraph) -> int:
    if G.n == 0:
        raise ValueError("semidegree of the empty graph is undefined")
    return min(min(o.bit_count(), i.bit_count()) for o, i in zip(G.out, G.inn))


def effective_c(G: OrientedGraph) -> Fraction:
    """Smallest c with semidegree(G) >= (1/2 - c) n."""
    return max(Fraction(0), Fraction(1, 2) - Fraction(semidegree(G), G.n))


def pair_codegree(G: OrientedGraph, u: int, v: int, sigma: str, tau: str, A=None) -> int:
    """|N^sigma(u) & N^tau(v) & A| for signs in {'+', '-'}; ``A`` defaults to V."""
    if u == v:
        raise ValueError("pair co-degree needs two distinct vertices")
    nu = G.out[u] if sigma == PLUS else G.inn[u]
    nv = G.out[v] if tau == PLUS else G.inn[v]
    a = G.vertex_mask if A is None else _as_mask(A, G.n)
    return (nu & nv & a).bit_count()


def directed_edge_count(G: OrientedGraph, A, B) -> int:
    """|E+(A, B)|: arcs u->v with u in A and v in B."""
    b = _as_mask(B, G.n)
    return sum((G.out[u] & b).bit_count() for u in iter_bits(_as_mask(A, G.n)))


def edge_count_masks(G: OrientedGraph, a: int, b: int) -> int:
    return sum((G.out[u] & b).bit_count() for u in iter_bits(a))


def cyclic_triples(G: OrientedGraph, within: int | None = None) -> Iterator[tuple[int, int, int]]:
    """Each cyclic triangle once, as (u, v, w) with u the smallest label and u->v->w->u."""
    out, inn = G.out, G.inn
    full = G.vertex_mask if within is None else within
    for u in iter_bits(full):
        above = full & ~((2 << u) - 1)
        iu = inn[u] & above
        if not iu:
            continue
        for v in iter_bits(out[u] & above):
            for w in iter_bits(out[v] & iu):
                yield (u, v, w)


def _slot_fit(x: int, y: int, z: int, slots: tuple[int, int, int]) -> bool:
    s1, s2, s3 = slots
    for a, b, c in ((x, y, z), (x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)):
        if s1 >> a & 1 and s2 >> b & 1 and s3 >> c & 1:
            return True
    return False


def count_cyclic(G: OrientedGraph, U1, U2=None, U3=None) -> int:
    """Number of cyclic triangles whose vertices can be assigned bijectively to the slots.

    A triangle is counted once if some ordering (v1, v2, v3) of its vertices has
    v_i in U_i; ``count_cyclic(G, A, A, A)`` is the number of cyclic triangles
    inside ``A``.  Omitted slots repeat ``U1``.
    """
    m1 = _as_mask(U1, G.n)
    m2 = m1 if U2 is None else _as_mask(U2, G.n)
    m3 = m1 if U3 is None else _as_mask(U3, G.n)
    if m1 == m2 == m3:
        return sum(1 for _ in cyclic_triples(G, m1))
    union = m1 | m2 | m3
    slots = (m1, m2, m3)
    return sum(1 for t in cyclic_triples(G, union) if _slot_fit(*t, slots))


def count_transitive(G: OrientedGraph, A) -> int:
    """trn(A) as a sum over sources v of the arcs inside N+(v, A).

    In a tournament every pair of out-neighbours is adjacent, so the summand
    reduces to C(d+(v, A), 2).
    """
    a = _as_mask(A, G.n)
    out = G.out
    if G.is_tournament():
        return sum(comb((out[v] & a).bit_count(), 2) for v in iter_bits(a))
    total = 0
    for v in iter_bits(a):
        nbrs = out[v] & a
        total += sum((out[w] & nbrs).bit_count() for w in iter_bits(nbrs))
    return total
