"""Loose Hamilton cycles in 3-uniform hypergraphs.

Exact constructions and the degree threshold, barrier certificates, a
budgeted exhaustive searcher, Y-tiling machinery, and the constructive
solver for near-extremal instances.
"""

from .core import Graph, Parameters, ThreeGraph, bit_list, build_graph, mask_of
from .constructions import (LabeledPartitionGraph, build_H1, build_H1_plus,
                            build_H2, is_beta_extremal, random_extremal,
                            random_graph, threshold)
from .hamsearch import (Certificate, LooseCycle, LoosePath, SearchOutcome,
                        check_certificate, find_barrier_certificate,
                        find_loose_hamilton_cycle, find_loose_path_between,
                        greedy_tripartite_path, verify_loose_cycle,
                        verify_loose_hamilton_cycle, verify_loose_path)
from .ytiling import (LinkClass, TilingAnalysis, YCopy, YTiling, analyze_tiling,
                      classify_link, exact_max_y_tiling,
                      find_forbidden_configuration, greedy_max_y_tiling,
                      is_y_free, max_codegree_le_one, y_free_edge_bound_check)
from .extremal import (Classification, ExtremalPartition, SolverTrace,
                       balance_and_cap, build_b_prime_structure,
                       build_cover_path, check_cover_path, classify_vertices,
                       complete_bipartite_stage, connect_pair,
                       find_extremal_partition, solve_extremal)
from .io3g import dumps_3g, loads_3g, parse_3g, write_3g
from .harness import (ExperimentConfig, ResultRecord, exhaustive_n6_scan,
                      run_campaign, strip_timing)

__version__ = "0.1.0"
