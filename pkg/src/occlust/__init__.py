"""Online correlation clustering with merge-only clusterings."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .clustering import Clustering, Score, coarsens, score
from .dense import DenseConfig, check_constants, dense_run, forest_reference
from .greedy import GreedyPolicy, greedy_run, greedy_step
from .instance import (EdgeSign, LabeledInstance, gen_all_positive, gen_planted, gen_random,
                       gen_two_clique, gen_yao_gadget, read_instance, write_instance)
from .mixed import MixedConfig, mixed_run, recommended_p
from .oracle import CapacityError, OracleResult, exact_optimum, local_search_optimum, oracle

__all__ = [
    "BACKEND", "CapacityError", "Clustering", "DenseConfig", "EdgeSign", "GreedyPolicy",
    "LabeledInstance", "MixedConfig", "OracleResult", "Score", "check_constants", "coarsens",
    "dense_run", "exact_optimum", "forest_reference", "gen_all_positive", "gen_planted",
    "gen_random", "gen_two_clique", "gen_yao_gadget", "greedy_run", "greedy_step",
    "local_search_optimum", "mixed_run", "oracle", "read_instance", "recommended_p", "score",
    "write_instance",
]
