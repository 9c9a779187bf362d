"""Highly connected bipartitions of dense digraphs, with independent
verification and cycle tools for tournaments."""

from .connectivity import (
    find_disjoint_path_fans,
    is_strongly_connected,
    is_strongly_k_connected,
    pair_k_connected_from,
    pair_k_connected_to,
    select_short_subfamily,
)
from .digraph import Digraph, complete_digraph, parse_digraph, read_digraph, write_digraph
from .dominating import almost_in_dominating, almost_out_dominating, core_set, reach_sets
from .engine import Parameters, run_pipeline
from .instances import gen_dense_digraph, gen_strong_tournament, gen_tournament
from .tournaments import cycle_through_vertex, disjoint_cycles, hamiltonian_cycle
from .verify import PartitionCertificate, brute_force_partition, reverify, verify_partition

__version__ = "0.1.0"

__all__ = [
    "Digraph", "complete_digraph", "parse_digraph", "read_digraph", "write_digraph",
    "is_strongly_connected", "is_strongly_k_connected", "pair_k_connected_from", "pair_k_connected_to",
    "find_disjoint_path_fans", "select_short_subfamily",
    "almost_out_dominating", "almost_in_dominating", "core_set", "reach_sets",
    "Parameters", "run_pipeline",
    "gen_tournament", "gen_dense_digraph", "gen_strong_tournament",
    "cycle_through_vertex", "hamiltonian_cycle", "disjoint_cycles",
    "PartitionCertificate", "verify_partition", "reverify", "brute_force_partition",
]
