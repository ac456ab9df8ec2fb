"""Gibbs distributions over the source-to-sink paths of a DAG.

Paths get probability proportional to ``exp(alpha * score)``; one
log-space pass in topological order yields exact sampling, likelihoods,
edge marginals, hitting probabilities, KL divergences and score-function
gradients, all in time linear in the number of edges.  Dense wavefront
kernels cover dynamic-time-warping and monotonic-alignment lattices.
"""

__version__ = "0.1.0"

from .dag import Dag, as_weights, build_dag, optimal_path, path_score
from .distribution import (
    EdgeMarginals,
    HittingProbabilities,
    PathDistribution,
    SoftPath,
    edge_marginals,
    fit,
    grad_log_prob,
    hitting_probabilities,
    kl_divergence,
    kl_grad_posterior_mc,
    kl_grad_prior,
    log_partition,
    node_bernoulli_soft,
    path_log_prob,
    reinforce_grad,
    sample_path,
    soft_sample,
)
from .errors import (
    AlphaMismatchError,
    BadEndpointsError,
    DisconnectedNodeError,
    DomainError,
    DuplicateEdgeError,
    EdgeNotForwardError,
    GraphMismatchError,
    GumbelPathError,
    InvalidPathError,
    KindMismatchError,
    NonPositiveAlphaError,
    NonPositiveTauError,
    NoPathError,
    NumericalConsistencyError,
    PathSetMismatchError,
    RowsExceedColsError,
    ShapeMismatchError,
    SpecMismatchError,
    TooManyPathsError,
    ValidationError,
)
from .gumbel import (
    binary_gumbel_softmax,
    exponential_integral_ei,
    gumbel_kl,
    gumbel_kl_full_support,
    gumbel_log_pdf,
    gumbel_sample,
)
from .lattice import (
    LatticePath,
    LatticeSpec,
    dtw_fit_fast,
    dtw_graph,
    lattice_marginals,
    lattice_sample,
    ma_fit_fast,
    ma_graph,
    random_dag,
)
from .oracle import (
    PathTable,
    enumerate_paths,
    exact_distribution,
    exact_hitting,
    exact_kl,
    exact_marginals,
    gumbel_race_sample,
)

__all__ = [name for name in dir() if not name.startswith("_")]
