"""Linking sets, reachability neighbourhoods, closed partitions and a heuristic absorber."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, sqrt
from statistics import NormalDist

from .graph_core import Partition, iter_bits, mask_of
from .hypergraph import TriangleHypergraph
from .solver import perfect_matching


@dataclass(frozen=True)
class SamplerConfig:
    samples: int = 2000
    seed: int = 0
    confidence: float = 0.99


def _links(H: TriangleHypergraph, x: int) -> set[int]:
    """Masks of the 2-sets {a, b} with {x, a, b} a hyperedge."""
    bit = 1 << x
    return {H.masks[i] & ~bit for i in H.incident[x]}


def count_linking_pairs(H: TriangleHypergraph, x: int, y: int) -> int:
    if x == y:
        raise ValueError("linking pairs need two distinct vertices")
    forbid = (1 << x) | (1 << y)
    return sum(1 for s in _links(H, x) & _links(H, y) if not s & forbid)


def _is_linking(H: TriangleHypergraph, s: int, x: int, y: int) -> bool:
    return (
        perfect_matching(H, s | 1 << x) is not None
        and perfect_matching(H, s | 1 << y) is not None
    )


def count_linking_sets(H: TriangleHypergraph, x: int, y: int, ell: int) -> int:
    """Exact number of (3 ell - 1)-sets linking x and y, by full enumeration."""
    if x == y:
        raise ValueError("linking sets need two distinct vertices")
    if ell == 1:
        return count_linking_pairs(H, x, y)
    others = [v for v in range(H.n) if v not in (x, y)]
    return sum(1 for S in combinations(others, 3 * ell - 1) if _is_linking(H, mask_of(S), x, y))


def wilson_interval(hits: int, samples: int, confidence: float = 0.99) -> tuple[float, float]:
    if samples == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = hits / samples
    denom = 1 + z * z / samples
    centre = (p + z * z / (2 * samples)) / denom
    half = z * sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class LinkingStats:
    x: int
    y: int
    ell: int
    threshold: Fraction
    exact_count: int | None = None
    estimate: float | None = None
    samples: int = 0
    hits: int = 0
    population: int = 0
    lower: float | None = None
    upper: float | None = None
    threshold_met: bool | None = None

    @property
    def exact(self) -> bool:
        return self.exact_count is not None

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "ell": self.ell,
            "threshold": str(self.threshold),
            "exact_count": self.exact_count,
            "estimate": self.estimate,
            "samples": self.samples,
            "hits": self.hits,
            "population": self.population,
            "lower": self.lower,
            "upper": self.upper,
            "threshold_met": self.threshold_met,
        }


def _pair_rng(cfg: SamplerConfig, x: int, y: int, ell: int) -> random.Random:
    a, b = min(x, y), max(x, y)
    return random.Random(f"{cfg.seed}:{a}:{b}:{ell}")


def linking_stats(H: TriangleHypergraph, x: int, y: int, beta, ell: int = 1, cfg: SamplerConfig | None = None) -> LinkingStats:
    """Count or estimate the (3 ell - 1)-sets linking x and y against beta n^(3 ell - 1).

    For ell = 1 the count is exact.  Otherwise uniformly random
    (3 ell - 1)-subsets of V - {x, y} are tested with the exact matcher and
    the count is bracketed by a Wilson interval; ``threshold_met`` is None
    when the threshold falls inside the interval.
    """
    if x == y:
        raise ValueError("linking sets need two distinct vertices")
    if ell < 1:
        raise ValueError("ell must be at least 1")
    n = H.n
    size = 3 * ell - 1
    threshold = Fraction(beta) * n**size
    if ell == 1:
        k = count_linking_pairs(H, x, y)
        return LinkingStats(x, y, ell, threshold, exact_count=k, population=comb(n - 2, 2), threshold_met=k >= threshold)
    cfg = cfg or SamplerConfig()
    population = comb(n - 2, size)
    others = [v for v in range(n) if v not in (x, y)]
    stats = LinkingStats(x, y, ell, threshold, samples=cfg.samples, population=population)
    if population == 0:
        stats.estimate, stats.lower, stats.upper = 0.0, 0.0, 0.0
        stats.threshold_met = 0 >= threshold
        return stats
    rng = _pair_rng(cfg, x, y, ell)
    hits = 0
    for _ in range(cfg.samples):
        if _is_linking(H, mask_of(rng.sample(others, size)), x, y):
            hits += 1
    lo, hi = wilson_interval(hits, cfg.samples, cfg.confidence)
    stats.hits = hits
    stats.estimate = hits / cfg.samples * population if cfg.samples else 0.0
    stats.lower, stats.upper = lo * population, hi * population
    if stats.lower >= threshold:
        stats.threshold_met = True
    elif stats.upper < threshold:
        stats.threshold_met = False
    return stats


@dataclass(frozen=True)
class ReachableSet:
    vertex: int
    members: frozenset[int]
    indeterminate: frozenset[int] = frozenset()
    exact: bool = True

    def __contains__(self, v):
        return v in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)


def reachable_set(H: TriangleHypergraph, v: int, beta, ell: int = 1, cfg: SamplerConfig | None = None) -> ReachableSet:
    """The vertices y != v that are (H, beta, ell)-reachable from v."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    yes, unsure = set(), set()
    exact = True
    for y in range(H.n):
        if y == v:
            continue
        st = linking_stats(H, v, y, beta, ell, cfg)
        exact &= st.exact
        if st.threshold_met:
            yes.add(y)
        elif st.threshold_met is None:
            unsure.add(y)
    return ReachableSet(v, frozenset(yes), frozenset(unsure), exact)


@dataclass
class PartClosure:
    index: int
    pairs: int
    reachable: int
    indeterminate: int
    exact: bool

    @property
    def fraction(self) -> Fraction:
        return Fraction(1) if self.pairs == 0 else Fraction(self.reachable, self.pairs)

    @property
    def closed(self) -> bool | None:
        if self.reachable == self.pairs:
            return True
        if self.reachable + self.indeterminate == self.pairs:
            return None
        return False

    def to_json(self) -> dict:
        return {
            "part": self.index,
            "pairs": self.pairs,
            "reachable": self.reachable,
            "indeterminate": self.indeterminate,
            "fraction": str(self.fraction),
            "closed": self.closed,
            "exact": self.exact,
        }


def is_closed_partition(H: TriangleHypergraph, P: Partition, beta, ell: int = 1, cfg: SamplerConfig | None = None) -> list[PartClosure]:
    report = []
    for idx, part in enumerate(P.parts):
        pairs = reach = unsure = 0
        exact = True
        for x, y in combinations(sorted(part), 2):
            pairs += 1
            st = linking_stats(H, x, y, beta, ell, cfg)
            exact &= st.exact
            if st.threshold_met:
                reach += 1
            elif st.threshold_met is None:
                unsure += 1
        report.append(PartClosure(idx, pairs, reach, unsure, exact))
    return report


def partition_is_closed(report: list[PartClosure]) -> bool | None:
    flags = [p.closed for p in report]
    if all(f is True for f in flags):
        return True
    if any(f is False for f in flags):
        return False
    return None


@dataclass
class AbsorbingResult:
    members: frozenset[int]
    success: bool
    tested: int = 0
    failure: tuple[int, ...] | None = None
    reason: str = ""
    checked: list[tuple[int, ...]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "members": sorted(self.members),
            "success": self.success,
            "tested": self.tested,
            "failure": None if self.failure is None else list(self.failure),
            "reason": self.reason,
        }


def build_absorbing_set(
    H: TriangleHypergraph,
    target_size: int,
    seed: int = 0,
    tests: int = 100,
    max_leftover: int = 3,
) -> AbsorbingResult:
    """Greedy randomised absorber with an exact-solver certificate.

    U grows by vertex-disjoint triangles {x, a, b} where {a, b} is a linking
    2-set for a sampled pair (x, y); among the candidates the triangle whose
    pairs have the most apexes outside U wins.  The certificate checks that
    H[U + W] has a perfect matching for W empty and for ``tests`` random
    W from V - U with 3 <= |W| <= max_leftover, 3 dividing |W|.  Any failing W
    is reported; success is claimed only when every check passed.
    """
    n = H.n
    if target_size % 3 or not 0 <= target_size <= n:
        raise ValueError(f"target size {target_size} must be a multiple of 3 in [0, {n}]")
    if max_leftover < 0 or max_leftover % 3:
        raise ValueError("max_leftover must be a nonnegative multiple of 3")
    rng = random.Random(seed)
    if target_size and not H.num_edges:
        return AbsorbingResult(frozenset(), False, reason="hypergraph has no edges")

    apex: dict[int, int] = {}
    for m in H.masks:
        for v in iter_bits(m):
            pair = m & ~(1 << v)
            apex[pair] = apex.get(pair, 0) | 1 << v

    def score(tri: int, used: int) -> int:
        total = 0
        for v in iter_bits(tri):
            total += (apex.get(tri & ~(1 << v), 0) & ~used & ~tri).bit_count()
        return total

    used = 0
    while used.bit_count() < target_size:
        free = [v for v in range(n) if not used >> v & 1]
        candidates = set()
        for _ in range(20):
            if len(free) < 2:
                break
            x, y = rng.sample(free, 2)
            forbid = used | 1 << x | 1 << y
            for s in _links(H, x) & _links(H, y):
                if not s & forbid:
                    candidates.add(s | 1 << x)
        if not candidates:
            candidates = {m for m in H.masks if not m & used}
        if not candidates:
            return AbsorbingResult(frozenset(iter_bits(used)), False, reason="ran out of disjoint triangles")
        ranked = sorted(candidates, key=lambda t: (-score(t, used), t))
        used |= ranked[0]

    members = frozenset(iter_bits(used))
    outside = [v for v in range(n) if not used >> v & 1]
    result = AbsorbingResult(members, True)
    leftovers: list[tuple[int, ...]] = [()]
    sizes = [s for s in range(3, max_leftover + 1, 3) if s <= len(outside)]
    if sizes:
        for _ in range(tests):
            leftovers.append(tuple(sorted(rng.sample(outside, rng.choice(sizes)))))
    for W in leftovers:
        result.tested += 1
        result.checked.append(W)
        if perfect_matching(H, used | mask_of(W)) is None:
            result.success = False
            result.failure = W
            result.reason = "H[U + W] has no perfect matching" if W else "H[U] has no perfect matching"
            break
    else:
        result.reason = f"all {result.tested} leftover sets absorbed"
    return result
