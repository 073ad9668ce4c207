from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import oriented_graphs
from c3tiling.barrier import find_divisibility_barrier, verify_divisibility_barrier
from c3tiling.constructions import barrier_tournament, circulant_tournament
from c3tiling.graph_core import Partition
from c3tiling.hypergraph import build_hypergraph
from c3tiling.lattice import (
    EdgeVectorSet,
    LatticeBasis,
    edge_lattice,
    edge_vectors,
    ell_after,
    find_2_transferral,
    hermite_normal_form,
    index_vector,
    lattice_contains,
    merge_parts,
)
from c3tiling.solver import FOUND, find_factor, max_tiling


class TestIndexVector:
    def test_barrier2_all(self):
        G, P = barrier_tournament(2)
        assert index_vector(P, range(6)) == (1, 2, 3)

    def test_empty(self):
        _, P = barrier_tournament(3)
        assert index_vector(P, []) == (0, 0, 0)

    def test_single_part(self):
        assert index_vector(Partition([[0, 1, 2]], 3), [0, 2]) == (2,)


class TestEdgeVectors:
    def test_barrier2_constant_residue(self):
        G, P = barrier_tournament(2)
        S = edge_vectors(build_hypergraph(G), P)
        assert len(S) > 0
        for v in S.vectors:
            assert len({x % 3 for x in v}) == 1

    def test_mu_zero_is_unfiltered(self):
        G = circulant_tournament(9)
        H = build_hypergraph(G)
        P = Partition([range(0, 3), range(3, 6), range(6, 9)], 9)
        S = edge_vectors(H, P, 0)
        assert sum(S.counts.values()) == H.num_edges
        assert (1, 1, 1) in S

    def test_mu_filter(self):
        G = circulant_tournament(9)
        H = build_hypergraph(G)
        P = Partition([range(0, 3), range(3, 6), range(6, 9)], 9)
        full = edge_vectors(H, P, 0)
        cut = max(full.counts.values())
        S = edge_vectors(H, P, Fraction(cut, 729))
        assert all(full.multiplicity(v) >= cut for v in S.vectors)
        assert len(S) >= 1

    def test_negative_mu_rejected(self):
        G, P = barrier_tournament(2)
        with pytest.raises(ValueError):
            edge_vectors(build_hypergraph(G), P, -1)


class TestMembership:
    def test_barrier_instance(self):
        gens = [(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)]
        assert not lattice_contains(gens, (1, 2, 3))

    def test_difference(self):
        assert lattice_contains([(2, 1, 0), (1, 2, 0)], (1, -1, 0))

    def test_zero(self):
        assert lattice_contains([(5, 7)], (0, 0))
        assert (0, 0, 0) in LatticeBasis([], 3)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lattice_contains([(1, 0)], (1, 0, 0))
        with pytest.raises(ValueError):
            (1, 0) in LatticeBasis([(1, 0, 0)], 3)

    def test_hnf_shape(self):
        B = hermite_normal_form([(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)], 3)
        assert B == [[1, 1, 1], [0, 3, 0], [0, 0, 3]]

    def test_hnf_canonical(self):
        a = LatticeBasis([(2, 1, 0), (1, 2, 0)], 3)
        b = LatticeBasis([(1, -1, 0), (1, 2, 0), (4, 2, 0)], 3)
        assert a == b and a.rank == 2

    @given(
        st.integers(1, 4).flatmap(
            lambda d: st.tuples(
                st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), max_size=4),
                st.lists(st.integers(-6, 6), min_size=d, max_size=d),
            )
        )
    )
    def test_matches_oracles(self, case):
        gens, v = case
        got = lattice_contains(gens, v) if gens else not any(v)
        assert got == oracles.lattice_contains(gens, v)
        if gens and oracles.bounded_combination(gens[:3], v, bound=3):
            assert lattice_contains(gens[:3], v)


class TestTransferral:
    def test_simple(self):
        t = find_2_transferral(EdgeVectorSet({(2, 1, 0): 1, (1, 2, 0): 1}))
        assert t is not None
        diff = [a - b for a, b in zip(t.v1, t.v2)]
        assert diff[t.i] == 1 and diff[t.j] == -1 and sum(map(abs, diff)) == 2
        # u_2 - u_1 with v1 = (1,2,0), v2 = (2,1,0); indices are 0-based
        assert (t.i, t.j, t.v1, t.v2) == (1, 0, (1, 2, 0), (2, 1, 0))

    def test_none(self):
        assert find_2_transferral(EdgeVectorSet({(3, 0, 0): 1, (0, 3, 0): 1})) is None

    def test_barrier4(self):
        G, P = barrier_tournament(4)
        assert find_2_transferral(edge_vectors(build_hypergraph(G), P)) is None


class TestMerge:
    def test_merge(self):
        P = Partition([[0], [1], [2]], 3)
        assert merge_parts(P, 0, 1).as_lists() == [[0, 1], [2]]
        assert merge_parts(P, 2, 0).as_lists() == [[0, 2], [1]]

    @pytest.mark.parametrize("i, j", [(0, 0), (0, 3), (-1, 1)])
    def test_invalid(self, i, j):
        with pytest.raises(ValueError):
            merge_parts(Partition([[0], [1], [2]], 3), i, j)

    def test_ell_after(self):
        assert ell_after(8) == 33
        assert ell_after(ell_after(ell_after(8))) == 533 <= 1000


@pytest.mark.parametrize("m", range(2, 7))
def test_barrier_total_outside_lattice(m):
    G, P = barrier_tournament(m)
    L = edge_lattice(edge_vectors(build_hypergraph(G), P), 3)
    assert index_vector(P, range(G.n)) not in L


@given(oriented_graphs(min_n=3, max_n=9), st.data())
def test_tilings_stay_in_lattice(G, data):
    labels = data.draw(st.lists(st.integers(0, 2), min_size=G.n, max_size=G.n))
    k = len(set(labels))
    relabel = {c: i for i, c in enumerate(sorted(set(labels)))}
    P = Partition.from_labels([relabel[c] for c in labels], k)
    H = build_hypergraph(G)
    L = edge_lattice(edge_vectors(H, P), k)
    T = max_tiling(H).tiling
    assert index_vector(P, T.vertices) in L
    res = find_factor(H)
    if res.outcome == FOUND:
        assert index_vector(P, range(G.n)) in L


@given(oriented_graphs(min_n=3, max_n=9))
def test_verified_barrier_outside_lattice(G):
    cert = find_divisibility_barrier(G)
    if cert is not None and cert.partition is not None:
        P = cert.partition
        assert verify_divisibility_barrier(G, P)
        assert index_vector(P, range(G.n)) not in edge_lattice(edge_vectors(build_hypergraph(G), P), 3)
