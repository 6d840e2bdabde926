"""Computational tools for the arithmetic Kakeya problem.

Exact entropy calculus for rational random vectors, Kakeya ratio functionals
and witness search, product bounds in higher dimension, Fourier checks over
F_p and the graph/progression reduction to finite fields.
"""

from .bounds import alpha_root, bound_table, combine_product, delta_of, minkowski_bound
from .entropy import (
    ENTROPY_TOL,
    DistributionError,
    JointDist,
    cond_entropy,
    entropy,
    marginal,
    pushforward_linear,
    shearer_check,
    uniform_graph_dist,
)
from .ratios import (
    BetaBound,
    RSet,
    gap_ratio,
    homogeneous_ratio,
    kakeya_ratio,
    rset_clear_denominators,
    witness_replay,
)
from .search import SearchConfig, search_lower_bound

__version__ = "0.1.0"

__all__ = [
    "ENTROPY_TOL", "DistributionError", "JointDist", "cond_entropy", "entropy", "marginal",
    "pushforward_linear", "shearer_check", "uniform_graph_dist",
    "BetaBound", "RSet", "gap_ratio", "homogeneous_ratio", "kakeya_ratio",
    "rset_clear_denominators", "witness_replay", "SearchConfig", "search_lower_bound",
    "alpha_root", "bound_table", "combine_product", "delta_of", "minkowski_bound",
    "__version__",
]
