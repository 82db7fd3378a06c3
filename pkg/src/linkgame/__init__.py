"""Link prediction with closeness-based Shapley and semivalue interaction indices."""

from .functions import DistanceFunction, SemivalueWeights, banzhaf_weights, shapley_weights
from .graph import Graph, RandomSeed, load_edge_list, read_edge_list, remove_random_edges
from .kernels import semivalue_closeness_all_pairs, shapley_closeness_all_pairs
from .neighborhood import NeighborhoodTable, bounded_sssp, build_neighborhood_table
from .scores import PairScores

__version__ = "0.1.0"

__all__ = [
    "DistanceFunction",
    "Graph",
    "NeighborhoodTable",
    "PairScores",
    "RandomSeed",
    "SemivalueWeights",
    "banzhaf_weights",
    "bounded_sssp",
    "build_neighborhood_table",
    "load_edge_list",
    "read_edge_list",
    "remove_random_edges",
    "semivalue_closeness_all_pairs",
    "shapley_closeness_all_pairs",
    "shapley_weights",
]
