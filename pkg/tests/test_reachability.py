from fractions import Fraction
from itertools import combinations
from math import sqrt

import pytest
from hypothesis import given

import oracles
from strategies import C3, oriented_graphs
from c3tiling.constructions import circulant_tournament
from c3tiling.graph_core import OrientedGraph, Partition
from c3tiling.hypergraph import build_hypergraph
from c3tiling.reachability import (
    SamplerConfig,
    build_absorbing_set,
    count_linking_pairs,
    count_linking_sets,
    is_closed_partition,
    linking_stats,
    partition_is_closed,
    reachable_set,
    wilson_interval,
)
from c3tiling.solver import perfect_matching
from c3tiling.graph_core import mask_of

FOUR = OrientedGraph(4, [(0, 1), (1, 2), (2, 0), (3, 0), (1, 3), (2, 3)])


class TestLinkingPairs:
    def test_c3(self):
        assert count_linking_pairs(build_hypergraph(C3), 0, 1) == 0

    def test_four_vertex(self):
        H = build_hypergraph(FOUR)
        assert count_linking_pairs(H, 2, 3) == 1
        assert count_linking_pairs(H, 0, 3) == 0

    def test_same_vertex(self):
        with pytest.raises(ValueError):
            count_linking_pairs(build_hypergraph(C3), 1, 1)

    @given(oriented_graphs(min_n=2, max_n=12))
    def test_matches_enumeration_and_symmetric(self, G):
        H = build_hypergraph(G)
        E = oracles.arcs(G)
        for x, y in combinations(range(G.n), 2):
            k = count_linking_pairs(H, x, y)
            assert k == count_linking_pairs(H, y, x) == oracles.linking_pairs(G.n, E, x, y)


class TestLinkingSets:
    def test_ell2_exact_matches_oracle(self):
        G = circulant_tournament(9)
        H = build_hypergraph(G)
        assert count_linking_sets(H, 0, 1, 2) == oracles.linking_sets(9, oracles.arcs(G), 0, 1, 5)

    def test_ell1_stats_exact(self):
        H = build_hypergraph(circulant_tournament(9))
        st = linking_stats(H, 0, 1, Fraction(1, 81))
        assert st.exact and st.exact_count == count_linking_pairs(H, 0, 1)
        assert st.threshold_met == (st.exact_count >= 1)

    @pytest.mark.parametrize("seed", range(3))
    def test_ell2_estimate_within_three_se(self, seed):
        H = build_hypergraph(circulant_tournament(9))
        exact = count_linking_sets(H, 0, 2, 2)
        cfg = SamplerConfig(samples=600, seed=seed)
        st = linking_stats(H, 0, 2, Fraction(1, 10**6), 2, cfg)
        assert not st.exact and st.samples == 600
        p = exact / st.population
        se = sqrt(p * (1 - p) / cfg.samples) * st.population
        assert abs(st.estimate - exact) <= 3 * se + 1e-9

    def test_sampler_deterministic(self):
        H = build_hypergraph(circulant_tournament(9))
        cfg = SamplerConfig(samples=100, seed=4)
        a, b = linking_stats(H, 1, 5, 0, 2, cfg), linking_stats(H, 1, 5, 0, 2, cfg)
        assert a == b
        # the stream depends on the unordered pair only
        assert linking_stats(H, 5, 1, 0, 2, cfg).hits == a.hits

    def test_indeterminate_when_threshold_inside_interval(self):
        H = build_hypergraph(circulant_tournament(9))
        cfg = SamplerConfig(samples=50, seed=1)
        st = linking_stats(H, 0, 1, 0, 2, cfg)
        beta = Fraction(st.estimate) / 9**5
        again = linking_stats(H, 0, 1, beta, 2, cfg)
        assert again.lower <= again.threshold <= again.upper
        assert again.threshold_met is None

    def test_wilson(self):
        lo, hi = wilson_interval(50, 100)
        assert lo < 0.5 < hi
        assert wilson_interval(0, 0) == (0.0, 1.0)


class TestReachable:
    def test_c3_empty(self):
        assert len(reachable_set(build_hypergraph(C3), 0, 1)) == 0

    def test_circulant9_symmetric(self):
        H = build_hypergraph(circulant_tournament(9))
        beta = Fraction(1, 81)
        sets = [reachable_set(H, v, beta) for v in range(9)]
        for x in range(9):
            assert x not in sets[x]
            for y in range(9):
                assert (y in sets[x]) == (x in sets[y])

    def test_circulant99_l1_bound(self):
        n = 99
        H = build_hypergraph(circulant_tournament(n))
        alpha = Fraction(1, 100)
        assert len(reachable_set(H, 0, alpha)) >= (Fraction(1, 8) - 10 * alpha) * n


class TestClosed:
    def test_singletons_vacuous(self):
        report = is_closed_partition(build_hypergraph(C3), Partition([[0], [1], [2]], 3), 1)
        assert partition_is_closed(report) is True

    def test_c3_not_closed(self):
        report = is_closed_partition(build_hypergraph(C3), Partition([range(3)], 3), 1)
        assert partition_is_closed(report) is False

    def test_circulant9_matches_pairs(self):
        G = circulant_tournament(9)
        H = build_hypergraph(G)
        beta = Fraction(1, 729)
        report = is_closed_partition(H, Partition([range(9)], 9), beta)
        E = oracles.arcs(G)
        reach = sum(1 for x, y in combinations(range(9), 2) if oracles.linking_pairs(9, E, x, y) >= beta * 81)
        assert report[0].pairs == 36 and report[0].reachable == reach
        assert report[0].closed == (reach == 36)


class TestAbsorber:
    def test_circulant15(self):
        G = circulant_tournament(15)
        H = build_hypergraph(G)
        res = build_absorbing_set(H, 6, seed=0, tests=100)
        assert len(res.members) == 6
        assert res.tested >= 1
        for W in res.checked:
            ok = perfect_matching(H, mask_of(res.members) | mask_of(W)) is not None
            if res.success:
                assert ok
        if not res.success:
            assert res.failure is not None

    def test_target_not_divisible(self):
        with pytest.raises(ValueError):
            build_absorbing_set(build_hypergraph(circulant_tournament(9)), 4)

    def test_no_triangles(self):
        G = OrientedGraph(6, [(0, 1), (1, 2)])
        res = build_absorbing_set(build_hypergraph(G), 3)
        assert not res.success
