"""Cyclic triangle factors in oriented graphs: constructions, exact solvers and audits."""

from .barrier import BarrierCertificate, find_divisibility_barrier, verify_divisibility_barrier
from .constructions import (
    barrier_tournament,
    circulant_tournament,
    enumerate_regular_tournaments,
    ks_construction,
    near_regular_tournament,
    random_min_semidegree,
    random_regular_tournament,
)
from .formats import GraphFormatError, parse_dg, format_dg, read_dg, write_dg
from .graph_core import (
    OrientedGraph,
    Partition,
    Thresholds,
    count_cyclic,
    count_transitive,
    directed_edge_count,
    effective_c,
    pair_codegree,
    semidegree,
)
from .hypergraph import TriangleHypergraph, build_hypergraph, min_hyperdegree
from .lattice import (
    LatticeBasis,
    edge_lattice,
    edge_vectors,
    find_2_transferral,
    index_vector,
    lattice_contains,
    merge_parts,
)
from .reachability import (
    build_absorbing_set,
    count_linking_pairs,
    is_closed_partition,
    linking_stats,
    reachable_set,
)
from .solver import Tiling, TilingResult, decide, find_factor, max_tiling, verify_tiling
from .stability import audit, find_gamma_extremal, strong_neighborhood, verify_gamma_extremal

__version__ = "0.1.0"
