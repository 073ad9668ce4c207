"""Index vectors, edge-vector multisets, integer lattices and transferrals."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .graph_core import Partition, _as_mask
from .hypergraph import TriangleHypergraph

Vector = tuple[int, ...]


def index_vector(P: Partition, U) -> Vector:
    u = _as_mask(U, P.n)
    return tuple((u & m).bit_count() for m in P.masks)


@dataclass(frozen=True)
class EdgeVectorSet:
    """Edge-vectors with the number of hyperedges realising each one."""

    counts: dict

    @property
    def vectors(self) -> list[Vector]:
        return sorted(self.counts)

    def multiplicity(self, v: Sequence[int]) -> int:
        return self.counts.get(tuple(v), 0)

    def __contains__(self, v):
        return tuple(v) in self.counts

    def __len__(self):
        return len(self.counts)

    def to_json(self) -> list[dict]:
        return [{"vec": list(v), "mult": self.counts[v]} for v in self.vectors]


def edge_vectors(H: TriangleHypergraph, P: Partition, mu=0) -> EdgeVectorSet:
    """Vectors realised by at least ceil(mu n^3) hyperedges (every realised vector when mu = 0)."""
    mu = Fraction(mu)
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    if P.n != H.n:
        raise ValueError("partition and hypergraph have different vertex counts")
    label = [0] * H.n
    for i, part in enumerate(P.parts):
        for v in part:
            label[v] = i
    d = len(P)
    counts: Counter = Counter()
    for a, b, c in H.triples:
        vec = [0] * d
        vec[label[a]] += 1
        vec[label[b]] += 1
        vec[label[c]] += 1
        counts[tuple(vec)] += 1
    floor_mult = max(1, ceil(mu * H.n**3))
    return EdgeVectorSet({v: k for v, k in counts.items() if k >= floor_mult})


def hermite_normal_form(rows: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite normal form of the integer row space.

    Nonzero rows only; pivots move strictly right, are positive, and the
    entries above each pivot are reduced into [0, pivot).
    """
    work = [list(r) for r in rows]
    for r in work:
        if len(r) != dim:
            raise ValueError(f"expected vectors of length {dim}, got {len(r)}")
    basis: list[list[int]] = []
    pivots: list[int] = []
    for col in range(dim):
        active = [r for r in work if r[col]]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            for r in active[1:]:
                q = r[col] // p[col]
                for j in range(col, dim):
                    r[j] -= q * p[j]
            active = [p] + [r for r in active[1:] if r[col]]
        piv = active[0]
        if piv[col] < 0:
            for j in range(dim):
                piv[j] = -piv[j]
        work = [r for r in work if r is not piv and any(r)]
        for prev in basis:
            q = prev[col] // piv[col]
            if q:
                for j in range(col, dim):
                    prev[j] -= q * piv[j]
        basis.append(piv)
        pivots.append(col)
    return basis


class LatticeBasis:
    """Integer lattice in Z^d given by its Hermite-normal-form basis rows."""

    __slots__ = ("dim", "rows", "pivots")

    def __init__(self, generators: Iterable[Sequence[int]], dim: int):
        self.dim = dim
        self.rows = [tuple(r) for r in hermite_normal_form(generators, dim)]
        self.pivots = [next(j for j, x in enumerate(r) if x) for r in self.rows]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def __contains__(self, v: Sequence[int]) -> bool:
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} in a lattice of dimension {self.dim}")
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            if w[p] % row[p]:
                return False
            q = w[p] // row[p]
            if q:
                for j in range(p, self.dim):
                    w[j] -= q * row[j]
        return not any(w)

    def __eq__(self, other):
        return isinstance(other, LatticeBasis) and self.dim == other.dim and self.rows == other.rows

    def __repr__(self):
        return f"LatticeBasis(dim={self.dim}, rows={self.rows})"


def lattice_contains(B, v: Sequence[int]) -> bool:
    """Membership of ``v`` in a LatticeBasis or in the span of a generator list."""
    if not isinstance(B, LatticeBasis):
        gens = [tuple(g) for g in B]
        for g in gens:
            if len(g) != len(v):
                raise ValueError("generator and vector dimensions differ")
        B = LatticeBasis(gens, len(v))
    return v in B


def edge_lattice(S: EdgeVectorSet, dim: int) -> LatticeBasis:
    return LatticeBasis(S.vectors, dim)


@dataclass(frozen=True)
class Transferral:
    """v1 - v2 = u_i - u_j for robust edge-vectors v1, v2 (0-based part indices)."""

    i: int
    j: int
    v1: Vector
    v2: Vector

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "v1": list(self.v1), "v2": list(self.v2)}


def find_2_transferral(S: EdgeVectorSet) -> Transferral | None:
    vecs = S.vectors
    for v1 in vecs:
        for v2 in vecs:
            diff = [a - b for a, b in zip(v1, v2)]
            plus = [k for k, x in enumerate(diff) if x == 1]
            minus = [k for k, x in enumerate(diff) if x == -1]
            if len(plus) == 1 and len(minus) == 1 and sum(map(abs, diff)) == 2:
                return Transferral(plus[0], minus[0], v1, v2)
    return None


def merge_parts(P: Partition, i: int, j: int) -> Partition:
    """Merge parts i and j; the union takes the lower index, other parts keep their order."""
    d = len(P)
    if i == j or not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"invalid part indices ({i}, {j}) for {d} parts")
    lo, hi = sorted((i, j))
    parts = list(P.parts)
    parts[lo] = parts[lo] | parts[hi]
    del parts[hi]
    return Partition(parts, P.n)


def ell_after(ell: int) -> int:
    """Reachability length after one merge along a 2-transferral."""
    return 4 * ell + 1
