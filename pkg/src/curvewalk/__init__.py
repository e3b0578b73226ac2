"""Curvature-guided Markov chain sampling and statistics on weighted networks.

The package computes Forman curvature on graphs, runs curvature-driven and
uniform Markov chain samplers over the node set (edge kernels and
Metropolis-Hastings node kernels), evaluates centrality-style network
statistics, and measures how fast multi-chain sampled estimates converge to
full-network values.
"""

from .graph import (GraphFormatError, GraphMeta, WeightedGraph,
                    connected_components, induced_subgraph, largest_component,
                    load_edge_list, write_edge_list)
from .curvature import (CURVATURE_MODES, CurvatureMap, compute_curvature_map,
                        edge_forman, edge_forman_combinatorial, node_forman)
from .sampler import (DEFAULT_EPSILON_FLOOR, GENERATOR_NAME, SAMPLER_KINDS,
                      ChainTrace, SamplerConfig, TransitionMatrix,
                      build_transition_matrix, chain_seed, edge_curved_step,
                      make_rng, make_target, mh_step, run_chain, splitmix64,
                      stationary_distribution)
from .netstats import (PATH_MODES, STAT_KINDS, StatVector, betweenness,
                       closeness, compute_statistics, mean_statistic,
                       strength_vector, weighted_clustering)
from .convergence import (BackboneRanking, ConvergenceCurve, ExperimentPlan,
                          ExperimentResult, estimator_mean, extract_backbone,
                          run_experiment)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graph
    "GraphFormatError", "GraphMeta", "WeightedGraph", "connected_components",
    "induced_subgraph", "largest_component", "load_edge_list", "write_edge_list",
    # curvature
    "CURVATURE_MODES", "CurvatureMap", "compute_curvature_map", "edge_forman",
    "edge_forman_combinatorial", "node_forman",
    # sampler
    "DEFAULT_EPSILON_FLOOR", "GENERATOR_NAME", "SAMPLER_KINDS", "ChainTrace",
    "SamplerConfig", "TransitionMatrix", "build_transition_matrix",
    "chain_seed", "edge_curved_step", "make_rng", "make_target", "mh_step",
    "run_chain", "splitmix64", "stationary_distribution",
    # netstats
    "PATH_MODES", "STAT_KINDS", "StatVector", "betweenness", "closeness",
    "compute_statistics", "mean_statistic", "strength_vector",
    "weighted_clustering",
    # convergence
    "BackboneRanking", "ConvergenceCurve", "ExperimentPlan",
    "ExperimentResult", "estimator_mean", "extract_backbone", "run_experiment",
]
