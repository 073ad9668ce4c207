"""Strong neighbourhoods, gamma-extremal partitions and exact inequality audits."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, floor
from typing import Iterable, Sequence

import numpy as np

from .barrier import backward_edge_counts
from .graph_core import (
    MINUS,
    PLUS,
    OrientedGraph,
    Partition,
    Thresholds,
    _as_mask,
    count_cyclic,
    count_transitive,
    edge_count_masks,
    effective_c,
    iter_bits,
    members,
)
from .hypergraph import build_hypergraph, min_hyperdegree
from .reachability import reachable_set

EXHAUSTIVE_LIMIT = 12


def strong_neighborhood(G: OrientedGraph, A, sigma: str, beta) -> frozenset[int]:
    """SN+ (sigma='+'): x outside A with d-(x, A) >= |A| - beta n; SN- uses d+(x, A)."""
    a = _as_mask(A, G.n)
    cutoff = a.bit_count() - Fraction(beta) * G.n
    if sigma not in (PLUS, MINUS):
        raise ValueError(f"sign must be '+' or '-', got {sigma!r}")
    adj = G.inn if sigma == PLUS else G.out
    return frozenset(x for x in iter_bits(G.vertex_mask & ~a) if (adj[x] & a).bit_count() >= cutoff)


@dataclass(frozen=True)
class ExtremalCheck:
    ok: bool
    sizes: tuple[int, int, int]
    backward: tuple[int, int, int]
    size_window: tuple[Fraction, Fraction]
    edge_bound: Fraction

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "sizes": list(self.sizes),
            "backward": list(self.backward),
            "size_window": [str(x) for x in self.size_window],
            "edge_bound": str(self.edge_bound),
        }


def _windows(n: int, gamma: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    third = Fraction(1, 3)
    return (third - gamma) * n, (third + gamma) * n, gamma * n * n


def verify_gamma_extremal(G: OrientedGraph, P: Partition, gamma) -> ExtremalCheck:
    if len(P) != 3:
        raise ValueError(f"gamma-extremal partitions have three parts, got {len(P)}")
    gamma = Fraction(gamma)
    lo, hi, bound = _windows(G.n, gamma)
    sizes = P.sizes
    back = backward_edge_counts(G, P)
    ok = all(lo <= s <= hi for s in sizes) and all(b <= bound for b in back)
    return ExtremalCheck(ok, sizes, back, (lo, hi), bound)


def _mirror(P: Partition) -> Partition:
    return Partition([P[0], P[2], P[1]], P.n)


def _exhaustive_extremal(G: OrientedGraph, gamma: Fraction) -> Partition | None:
    n = G.n
    lo, hi, bound = _windows(n, gamma)
    size_lo, size_hi, edge_cap = ceil(lo), floor(hi), floor(bound)
    codes = np.arange(3**n, dtype=np.int64)
    labels = np.empty((codes.size, n), dtype=np.int8)
    for v in range(n):
        labels[:, v] = (codes // 3**v) % 3
    ok = np.ones(codes.size, dtype=bool)
    for r in range(3):
        s = (labels == r).sum(axis=1)
        ok &= (s >= size_lo) & (s <= size_hi)
    back = np.zeros((3, codes.size), dtype=np.int32)
    is_part = [labels == r for r in range(3)]
    for u in range(n):
        for v in iter_bits(G.out[u]):
            for r in range(3):
                back[r] += is_part[r][:, v] & is_part[(r + 1) % 3][:, u]
    worst = back.max(axis=0)
    ok &= worst <= edge_cap
    if not ok.any():
        return None
    score = np.where(ok, worst, np.iinfo(np.int32).max)
    best = int(np.argmin(score))
    return Partition.from_labels(labels[best].tolist(), 3)


class _LocalSearch:
    """Single-vertex relabelling descent on (size violation, max backward, total backward)."""

    def __init__(self, G: OrientedGraph, gamma: Fraction):
        self.G = G
        lo, hi, _ = _windows(G.n, gamma)
        self.size_lo, self.size_hi = ceil(lo), floor(hi)

    def run(self, labels: list[int], effort: int) -> list[int]:
        G, n = self.G, self.G.n
        dout = [[0, 0, 0] for _ in range(n)]
        din = [[0, 0, 0] for _ in range(n)]
        for v in range(n):
            for w in iter_bits(G.out[v]):
                dout[v][labels[w]] += 1
            for w in iter_bits(G.inn[v]):
                din[v][labels[w]] += 1
        sizes = [labels.count(r) for r in range(3)]
        back = [0, 0, 0]
        for v in range(n):
            p = labels[v]
            back[(p - 1) % 3] += dout[v][(p - 1) % 3]

        def key(sz, bk):
            viol = sum(max(0, self.size_lo - s) + max(0, s - self.size_hi) for s in sz)
            return (viol, max(bk), sum(bk))

        current = key(sizes, back)
        for _ in range(effort):
            best = None
            for v in range(n):
                p = labels[v]
                for q in range(3):
                    if q == p:
                        continue
                    bk = back[:]
                    bk[(p - 1) % 3] -= dout[v][(p - 1) % 3]
                    bk[p] -= din[v][(p + 1) % 3]
                    bk[(q - 1) % 3] += dout[v][(q - 1) % 3]
                    bk[q] += din[v][(q + 1) % 3]
                    sz = sizes[:]
                    sz[p] -= 1
                    sz[q] += 1
                    k = key(sz, bk)
                    if k < current and (best is None or k < best[0]):
                        best = (k, v, q, bk, sz)
            if best is None:
                break
            current, v, q, back, sizes = best
            p = labels[v]
            labels[v] = q
            for w in iter_bits(G.inn[v]):
                dout[w][p] -= 1
                dout[w][q] += 1
            for w in iter_bits(G.out[v]):
                din[w][p] -= 1
                din[w][q] += 1
        return labels


def _seeded_start(G: OrientedGraph, rng: random.Random) -> list[int]:
    """Rough split around a random vertex, refined towards the cyclic pattern.

    Every round moves each vertex x to the part r maximising
    d-(x, V_{r-1}) + d+(x, V_{r+1}), i.e. the part whose predecessor it is
    dominated by and whose successor it dominates.
    """
    n = G.n
    s = rng.randrange(n)
    labels = [rng.randrange(3) for _ in range(n)]
    labels[s] = 0
    for w in iter_bits(G.out[s]):
        labels[w] = 1
    for w in iter_bits(G.inn[s]):
        labels[w] = 2
    for _ in range(3):
        masks = [0, 0, 0]
        for v, r in enumerate(labels):
            masks[r] |= 1 << v
        labels = [
            max(range(3), key=lambda r: ((G.inn[x] & masks[(r - 1) % 3]).bit_count()
                                         + (G.out[x] & masks[(r + 1) % 3]).bit_count(), -r))
            for x in range(n)
        ]
    return labels


def find_gamma_extremal(
    G: OrientedGraph,
    gamma,
    effort: int = 200,
    exhaustive: bool | None = None,
    seed: int = 0,
    restarts: int = 8,
) -> Partition | None:
    """Search for a gamma-extremal partition.

    Exhaustive over all 3^n labellings when n <= 12 (or when forced), where
    None proves absence.  Otherwise seeded local search; None then only
    means nothing was found.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma < Fraction(1, 3):
        raise ValueError("gamma must lie strictly between 0 and 1/3")
    if G.n == 0:
        return None
    if exhaustive is None:
        exhaustive = G.n <= EXHAUSTIVE_LIMIT
    if exhaustive:
        return _exhaustive_extremal(G, gamma)
    search = _LocalSearch(G, gamma)
    best, best_key = None, None
    for k in range(restarts):
        rng = random.Random(f"{seed}:{k}")
        start = _seeded_start(G, rng) if k % 2 == 0 else [rng.randrange(3) for _ in range(G.n)]
        labels = search.run(start, effort)
        if len(set(labels)) < 3:
            continue
        P = Partition.from_labels(labels, 3)
        for cand in (P, _mirror(P)):
            check = verify_gamma_extremal(G, cand, gamma)
            if check.ok:
                key = (max(check.backward), sum(check.backward))
                if best_key is None or key < best_key:
                    best, best_key = cand, key
    return best


ASSERTED = "asserted"
REPORTED = "reported"


@dataclass
class CheckRecord:
    name: str
    parameters: dict
    lhs: object
    rhs: object
    relation: str
    satisfied: bool | None
    mode: str

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, (tuple, list)):
                return [enc(y) for y in x]
            if isinstance(x, Fraction):
                return str(x)
            return x

        return {
            "name": self.name,
            "parameters": {k: enc(v) for k, v in self.parameters.items()},
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "relation": self.relation,
            "satisfied": self.satisfied,
            "mode": self.mode,
        }


@dataclass
class AuditReport:
    effective_c: Fraction
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def asserted(self) -> list[CheckRecord]:
        return [r for r in self.records if r.mode == ASSERTED]

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.asserted if r.satisfied is False]

    @property
    def all_asserted_pass(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "effective_c": str(self.effective_c),
            "all_asserted_pass": self.all_asserted_pass,
            "records": [r.to_json() for r in self.records],
        }


def _within(x, lo, hi) -> bool:
    return lo <= x <= hi


def _random_sets(n: int, count: int, rng: random.Random) -> list[int]:
    sets = []
    for _ in range(count):
        k = rng.randint(1, max(1, n - 1))
        sets.append(sum(1 << v for v in rng.sample(range(n), k)))
    return sets


def _random_disjoint_pairs(n: int, count: int, rng: random.Random) -> list[tuple[int, int]]:
    pairs = []
    if n < 2:
        return pairs
    for _ in range(count):
        order = list(range(n))
        rng.shuffle(order)
        cut = rng.randint(1, n - 1)
        cut2 = rng.randint(cut, n)
        a = sum(1 << v for v in order[:cut])
        b = sum(1 << v for v in order[cut:cut2])
        pairs.append((a, b))
    return pairs


def balance_condition(G: OrientedGraph, P: Partition, xi) -> CheckRecord:
    """Congruent part sizes and d+(v, V_{i+1}), d-(v, V_{i-1}) >= (1/3 - xi) n on every part."""
    if len(P) != 3:
        raise ValueError("the balance condition concerns three-part partitions")
    xi = Fraction(xi)
    need = (Fraction(1, 3) - xi) * G.n
    masks = P.masks
    worst = None
    for i in range(3):
        nxt, prv = masks[(i + 1) % 3], masks[(i - 1) % 3]
        for v in iter_bits(masks[i]):
            d = min((G.out[v] & nxt).bit_count(), (G.inn[v] & prv).bit_count())
            worst = d if worst is None else min(worst, d)
    congruent = len({s % 3 for s in P.sizes}) == 1
    return CheckRecord(
        "balance",
        {"sizes": list(P.sizes), "xi": xi, "congruent_mod_3": congruent},
        worst,
        need,
        ">=",
        congruent and worst >= need,
        REPORTED,
    )


def audit(
    G: OrientedGraph,
    thresholds: Thresholds | None = None,
    partitions: Sequence[Partition] = (),
    sets: Iterable[Iterable[int]] = (),
    pairs: Iterable[tuple[Iterable[int], Iterable[int]]] = (),
    random_sets: int = 12,
    seed: int = 0,
    promote: bool = False,
) -> AuditReport:
    """Measure c = effective_c(G) and check the exact degree lemmas.

    Asserted (exact for every n): the in/out cut window for each tested set,
    the minimum hyperdegree window (when c < 1/2), the per-arc co-degree
    balance and the arc-sum cyclic-triangle lower bound for disjoint pairs,
    and cyc(A) + trn(A) <= C(|A|, 3).  Reported only: the reachable-set lower
    bound at ``alpha``, the strong-neighbourhood structure at
    (alpha, beta, xi, eta) for sets with few cyclic triangles leaving them,
    and the balance condition for three-part partitions.  ``promote`` turns
    reported checks into asserted ones.
    """
    th = thresholds or Thresholds()
    n = G.n
    c = effective_c(G)
    report = AuditReport(c)
    rng = random.Random(seed)
    soft = ASSERTED if promote else REPORTED
    full = G.vertex_mask

    family: list[int] = []
    for P in partitions:
        family.extend(P.masks)
    family.extend(_as_mask(s, n) for s in sets)
    explicit = len(family)
    family.extend(_random_sets(n, random_sets, rng))
    seen = set()
    family = [a for a in family if a and not (a in seen or seen.add(a))]

    for a in family:
        size = a.bit_count()
        comp = full & ~a
        centre = Fraction(size * (n - size), 2)
        slack = c * size * n
        for sign, value in ((PLUS, edge_count_masks(G, a, comp)), (MINUS, edge_count_masks(G, comp, a))):
            report.records.append(CheckRecord(
                f"in_out{sign}", {"A": sorted(members(a)), "c": c}, value,
                (centre - slack, centre + slack), "in", _within(value, centre - slack, centre + slack), ASSERTED,
            ))
        cyc = count_cyclic(G, members(a))
        trn = count_transitive(G, members(a))
        report.records.append(CheckRecord(
            "cyc_plus_trn", {"A": sorted(members(a))}, cyc + trn, comb(size, 3), "<=", cyc + trn <= comb(size, 3), ASSERTED,
        ))

    H = build_hypergraph(G)
    if n:
        d1 = min_hyperdegree(H)
        centre, slack = Fraction(n * n, 8), 2 * c * n * n
        report.records.append(CheckRecord(
            "min_vertex_degree", {"c": c}, d1, (centre - slack, centre + slack), "in",
            _within(d1, centre - slack, centre + slack), ASSERTED if c < Fraction(1, 2) else soft,
        ))

    worst_gap, worst_edge = 0, None
    cyc_through = {}
    for u in range(n):
        for v in iter_bits(G.out[u]):
            minus_plus = (G.inn[u] & G.out[v]).bit_count()
            plus_minus = (G.out[u] & G.inn[v]).bit_count()
            cyc_through[(u, v)] = minus_plus
            gap = abs(minus_plus - plus_minus)
            if worst_edge is None or gap > worst_gap:
                worst_gap, worst_edge = gap, (u, v)
    if worst_edge is not None:
        report.records.append(CheckRecord(
            "p0_edge", {"c": c, "worst_edge": list(worst_edge)}, worst_gap, 4 * c * n, "<=",
            worst_gap <= 4 * c * n, ASSERTED,
        ))

    pair_family = [(_as_mask(A, n), _as_mask(B, n)) for A, B in pairs]
    pair_family.extend(_random_disjoint_pairs(n, max(1, random_sets // 2), rng))
    for a, b in pair_family:
        if a & b:
            raise ValueError("p0 arc-sum check needs disjoint sets")
        if not a:
            continue
        m = edge_count_masks(G, a, b)
        lhs = sum(cyc_through[(u, v)] for u in iter_bits(a) for v in iter_bits(G.out[u] & b))
        if 5 * m <= n * n:
            rhs, form = Fraction(m * m, 2 * a.bit_count()) - c * n**3, "e^2/(2|A|) - c n^3"
        else:
            rhs, form = Fraction(m * m, 2 * a.bit_count()) - 5 * c * n * m, "e^2/(2|A|) - 5 c n e"
        report.records.append(CheckRecord(
            "p0_sum", {"A": sorted(members(a)), "B": sorted(members(b)), "c": c, "form": form},
            lhs, rhs, ">=", lhs >= rhs, ASSERTED,
        ))

    if n:
        need = (Fraction(1, 8) - 10 * th.alpha) * n
        smallest, where = None, None
        for v in range(n):
            k = len(reachable_set(H, v, th.alpha, 1))
            if smallest is None or k < smallest:
                smallest, where = k, v
        report.records.append(CheckRecord(
            "l1", {"alpha": th.alpha, "c": c, "vertex": where}, smallest, need, ">=", smallest >= need, soft,
        ))

    for a in family[:explicit]:
        size = a.bit_count()
        comp_list = members(full & ~a)
        leaving = count_cyclic(G, members(a), members(a), comp_list)
        hyp = size > th.eta * n and leaving <= th.alpha * n**3
        params = {"A": sorted(members(a)), "alpha": th.alpha, "beta": th.beta, "xi": th.xi, "eta": th.eta,
                  "cyc_A_A_Abar": leaving, "hypothesis": hyp}
        if not hyp:
            report.records.append(CheckRecord("main_not_closed_2", params, None, None, "hypothesis", None, soft))
            continue
        centre, slack = Fraction(n - size, 2), th.xi * n
        for sign in (PLUS, MINUS):
            k = len(strong_neighborhood(G, members(a), sign, th.beta))
            report.records.append(CheckRecord(
                f"main_not_closed_2_SN{sign}", params, k, (centre - slack, centre + slack), "in",
                _within(k, centre - slack, centre + slack), soft,
            ))
        cap = (Fraction(1, 3) + th.xi) * n
        report.records.append(CheckRecord("main_not_closed_2_size", params, size, cap, "<=", size <= cap, soft))

    for P in partitions:
        if len(P) == 3:
            rec = balance_condition(G, P, th.xi)
            rec.mode = soft
            report.records.append(rec)
    return report
