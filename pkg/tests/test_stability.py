from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import C3, oriented_graphs
from c3tiling.barrier import backward_edge_counts
from c3tiling.constructions import (
    barrier_tournament,
    circulant_tournament,
    ks_construction,
    random_min_semidegree,
)
from c3tiling.graph_core import MINUS, PLUS, Partition, Thresholds, effective_c
from c3tiling.stability import (
    audit,
    balance_condition,
    find_gamma_extremal,
    strong_neighborhood,
    verify_gamma_extremal,
)


class TestStrongNeighborhood:
    def test_barrier2_single_vertex(self):
        G, P = barrier_tournament(2)
        assert strong_neighborhood(G, P[0], PLUS, 0) == P[1]
        assert strong_neighborhood(G, P[0], MINUS, 0) == P[2]

    def test_all_vertices(self):
        G = circulant_tournament(7)
        assert strong_neighborhood(G, range(7), PLUS, 0) == frozenset()

    def test_barrier3(self):
        G, P = barrier_tournament(3)
        assert strong_neighborhood(G, P[1], PLUS, 0) == P[2]

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            strong_neighborhood(C3, [0], "*", 0)

    @given(oriented_graphs(min_n=1, max_n=12), st.data())
    def test_both_signs_force_small_set(self, G, data):
        A = data.draw(st.sets(st.integers(0, G.n - 1)))
        beta = data.draw(st.fractions(0, 1))
        both = strong_neighborhood(G, A, PLUS, beta) & strong_neighborhood(G, A, MINUS, beta)
        if both:
            assert len(A) <= 2 * beta * G.n


def brute_extremal_exists(G, gamma):
    n = G.n
    for labels in product(range(3), repeat=n):
        if len(set(labels)) < 3:
            continue
        if verify_gamma_extremal(G, Partition.from_labels(labels, 3), gamma).ok:
            return True
    return False


class TestExtremal:
    def test_barrier2(self):
        G, P = barrier_tournament(2)
        check = verify_gamma_extremal(G, P, Fraction(1, 6))
        assert check.ok and check.backward == (0, 0, 0)
        found = find_gamma_extremal(G, Fraction(1, 6))
        assert found is not None and verify_gamma_extremal(G, found, Fraction(1, 6))

    def test_circulant9_none(self):
        assert find_gamma_extremal(circulant_tournament(9), Fraction(1, 100), exhaustive=True) is None

    def test_barrier4(self):
        G, P = barrier_tournament(4)
        gamma = Fraction(1, 12)
        assert verify_gamma_extremal(G, P, gamma)
        found = find_gamma_extremal(G, gamma)
        assert found is not None and verify_gamma_extremal(G, found, gamma)

    def test_local_search_finds_planted(self):
        G, P = barrier_tournament(6)
        gamma = Fraction(1, 9)
        found = find_gamma_extremal(G, gamma, exhaustive=False, seed=3)
        assert found is not None and verify_gamma_extremal(G, found, gamma)

    def test_reject_size_window(self):
        G, _ = barrier_tournament(2)
        P = Partition([[0], [1], [2, 3, 4, 5]], 6)
        assert not verify_gamma_extremal(G, P, Fraction(1, 6))

    def test_wrong_part_count(self):
        with pytest.raises(ValueError):
            verify_gamma_extremal(C3, Partition([[0, 1, 2]], 3), Fraction(1, 6))

    def test_gamma_range(self):
        with pytest.raises(ValueError):
            find_gamma_extremal(C3, Fraction(1, 2))

    def test_cyclic_rotation_preserves_acceptance(self):
        G, P = barrier_tournament(4)
        for k in range(3):
            rot = Partition([P[(i + k) % 3] for i in range(3)], G.n)
            assert verify_gamma_extremal(G, rot, Fraction(1, 12))
            assert sorted(backward_edge_counts(G, rot)) == sorted(backward_edge_counts(G, P))

    @given(oriented_graphs(min_n=3, max_n=7), st.sampled_from([Fraction(1, 20), Fraction(1, 9), Fraction(1, 4)]))
    def test_exhaustive_matches_brute(self, G, gamma):
        found = find_gamma_extremal(G, gamma, exhaustive=True)
        assert (found is not None) == brute_extremal_exists(G, gamma)
        if found is not None:
            assert verify_gamma_extremal(G, found, gamma)

    @given(oriented_graphs(min_n=3, max_n=12), st.integers(0, 10))
    def test_local_search_sound(self, G, seed):
        found = find_gamma_extremal(G, Fraction(1, 6), exhaustive=False, seed=seed, effort=20, restarts=2)
        if found is not None:
            assert verify_gamma_extremal(G, found, Fraction(1, 6))


class TestAudit:
    def test_c3_p0(self):
        report = audit(C3)
        rec = next(r for r in report.records if r.name == "p0_edge")
        assert rec.lhs == 1 and rec.rhs == 2 and rec.satisfied

    def test_circulant7_degree(self):
        report = audit(circulant_tournament(7))
        rec = next(r for r in report.records if r.name == "min_vertex_degree")
        assert rec.lhs == 6
        assert rec.rhs == (Fraction(-7, 8), Fraction(105, 8))

    def test_circulant9_cut(self):
        G = circulant_tournament(9)
        report = audit(G, sets=[range(4)], random_sets=0)
        rec = next(r for r in report.records if r.name == "in_out+" and r.parameters["A"] == [0, 1, 2, 3])
        assert effective_c(G) == Fraction(1, 18)
        assert rec.rhs == (8, 12)
        assert 8 <= rec.lhs <= 12

    @pytest.mark.parametrize(
        "G",
        [
            circulant_tournament(9),
            barrier_tournament(4)[0],
            ks_construction(1)[0],
            random_min_semidegree(15, Fraction(1, 10), 2),
        ],
        ids=["circulant9", "barrier4", "ks1", "random15"],
    )
    def test_asserted_checks_pass(self, G):
        report = audit(G, Thresholds(), random_sets=6, seed=1)
        assert report.all_asserted_pass, [r.to_json() for r in report.failures]

    def test_reported_checks_not_asserted(self):
        G, P = barrier_tournament(4)
        report = audit(G, partitions=[P])
        for r in report.records:
            if r.name.startswith(("l1", "main_not_closed", "balance")):
                assert r.mode == "reported"
        promoted = audit(G, partitions=[P], promote=True)
        assert any(r.name == "l1" and r.mode == "asserted" for r in promoted.records)

    def test_records_recomputable(self):
        G = circulant_tournament(11)
        report = audit(G, random_sets=3)
        from c3tiling.graph_core import directed_edge_count

        for r in report.records:
            if r.name == "in_out+":
                A = r.parameters["A"]
                assert r.lhs == directed_edge_count(G, A, set(range(G.n)) - set(A))

    def test_json(self):
        obj = audit(C3).to_json()
        assert obj["effective_c"] == "1/6"
        assert {"name", "parameters", "lhs", "rhs", "relation", "satisfied", "mode"} <= set(obj["records"][0])

    @given(oriented_graphs(min_n=2, max_n=10), st.integers(0, 100))
    def test_asserted_checks_hold_everywhere(self, G, seed):
        report = audit(G, random_sets=4, seed=seed)
        assert report.all_asserted_pass, [r.to_json() for r in report.failures]


def test_balance_condition():
    G = circulant_tournament(9)
    P = Partition([range(0, 3), range(3, 6), range(6, 9)], 9)
    rec = balance_condition(G, P, Fraction(1, 10))
    assert rec.parameters["congruent_mod_3"]
    assert isinstance(rec.satisfied, bool)
