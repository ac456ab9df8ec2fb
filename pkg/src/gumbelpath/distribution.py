"""Gibbs distributions over the source-to-sink paths of a DAG.

A path ``y`` gets probability proportional to ``exp(alpha * score(y))``
where the score sums the path's edge weights.  Fitting runs one log-space
pass in topological order: the node potential ``mu[v]`` is the log-sum-exp
of ``mu[u] + alpha * w[u, v]`` over the parents of ``v``, after which
``log_pi[u, v] = mu[u] + alpha * w[u, v] - mu[v]`` is the log-probability
that the step into ``v`` came from ``u``.  Everything else - exact reverse
sampling, likelihoods, edge marginals, hitting probabilities, KL
divergences and score-function gradients - reads off those two cached
tables in time linear in the number of edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .dag import Dag, Path, as_weights, _readonly
from .errors import (
    AlphaMismatchError,
    GraphMismatchError,
    NonPositiveAlphaError,
    NonPositiveTauError,
    NumericalConsistencyError,
)
from .gumbel import binary_gumbel_softmax, gumbel_sample

# KL values in [-KL_CLAMP, 0) are floating-point noise and clamp to zero;
# anything more negative indicates an internal inconsistency.
KL_CLAMP = 1e-12
_ZETA_CLIP = 1e-12


@dataclass(frozen=True, eq=False)
class PathDistribution:
    """Fitted distribution: graph, weights, alpha and the cached tables.

    ``mu`` has one entry per node (index 0 unused); ``mu[N]`` is the log
    normaliser.  ``log_pi`` has one entry per edge in the graph's edge
    order.  Instances are immutable; sampling state lives in the rng the
    caller passes in.
    """

    dag: Dag
    weights: np.ndarray
    alpha: float
    mu: np.ndarray
    log_pi: np.ndarray

    @cached_property
    def _pi(self) -> np.ndarray:
        return _readonly(np.exp(self.log_pi))

    @cached_property
    def _marginals(self) -> "EdgeMarginals":
        return _compute_marginals(self)

    @cached_property
    def _hitting(self) -> "HittingProbabilities":
        return _compute_hitting(self)

    @cached_property
    def _parent_tables(self) -> list:
        """Per node: (parent ids, cumulative transition probabilities)."""
        dag, pi = self.dag, self._pi
        tables: list = [None, None]  # indices 0 and 1 unused (node 1 has no parents)
        for v in range(2, dag.node_count + 1):
            ids = dag.in_edge_ids(v)
            parents = dag.edge_u[ids]
            if ids.shape[0] == 1:
                tables.append((int(parents[0]), None))
            else:
                tables.append((parents, np.cumsum(pi[ids])))
        return tables


@dataclass(frozen=True)
class EdgeMarginals:
    """Per-edge visit probabilities with their forward/backward masses.

    ``omega[k]`` is the probability that a random path crosses edge ``k``;
    ``lam``/``rho`` are the per-node forward and backward masses (index 0
    unused) with ``omega = pi * lam[u] * rho[v]``.
    """

    omega: np.ndarray
    lam: np.ndarray
    rho: np.ndarray


@dataclass(frozen=True)
class HittingProbabilities:
    """Per-node probability that a random path visits the node (index 0 unused)."""

    zeta: np.ndarray


@dataclass(frozen=True)
class SoftPath:
    """Relaxed path sample.

    ``delta`` holds one weight per edge, normalised across each node's
    parents; ``gamma`` per node is the relaxed visit indicator obtained by
    pushing mass from the sink back through ``delta``.  As ``tau -> 0`` the
    draw sharpens onto a hard path with the exact path probabilities.
    """

    gamma: np.ndarray
    delta: np.ndarray
    tau: float


def fit(dag: Dag, weights, alpha: float) -> PathDistribution:
    """Fit the path distribution on ``dag`` with the given edge log-scores.

    Raises:
        NonPositiveAlphaError: alpha is not a positive finite real.
    """
    w = as_weights(dag, weights)
    a = float(alpha)
    if not (math.isfinite(a) and a > 0.0):
        raise NonPositiveAlphaError(f"alpha must be a positive finite real, got {alpha!r}")
    n = dag.node_count
    mu = np.zeros(n + 1)
    log_pi = np.empty(dag.num_edges)
    aw = a * w
    in_order, bounds, edge_u = dag._in_order, dag._in_bounds, dag.edge_u
    for v in range(2, n + 1):
        ids = in_order[bounds[v - 1] : bounds[v]]
        s = mu[edge_u[ids]] + aw[ids]
        m = s.max()
        lse = m + np.log(np.exp(s - m).sum())
        mu[v] = lse
        log_pi[ids] = s - lse
    return PathDistribution(dag, w, a, _readonly(mu), _readonly(log_pi))


def log_partition(dist: PathDistribution) -> float:
    """Log of the Gibbs normaliser, i.e. the sink potential ``mu[N]``."""
    return float(dist.mu[dist.dag.node_count])


def path_log_prob(dist: PathDistribution, path: Sequence[int]) -> float:
    """Log-probability of a path: the sum of its edge log-transitions."""
    return float(dist.log_pi[dist.dag.path_edge_ids(path)].sum())


def sample_path(dist: PathDistribution, rng: np.random.Generator) -> Path:
    """Draw one exact path by walking backwards from the sink.

    At each node the parent is drawn from the cached transition table by
    inverse CDF on one uniform; single-parent nodes consume no randomness.
    """
    tables = dist._parent_tables
    v = dist.dag.node_count
    rev = [v]
    while v != 1:
        parents, cum = tables[v]
        if cum is None:
            v = parents
        else:
            k = int(np.searchsorted(cum, rng.random(), side="right"))
            if k >= parents.shape[0]:  # r landed beyond cum[-1] ~ 1.0
                k = parents.shape[0] - 1
            v = int(parents[k])
        rev.append(v)
    rev.reverse()
    return tuple(rev)


def _compute_marginals(dist: PathDistribution) -> EdgeMarginals:
    dag, pi = dist.dag, dist._pi
    n = dag.node_count
    lam = np.zeros(n + 1)
    lam[1] = 1.0
    in_order, in_bounds = dag._in_order, dag._in_bounds
    edge_u, edge_v = dag.edge_u, dag.edge_v
    for v in range(2, n + 1):
        ids = in_order[in_bounds[v - 1] : in_bounds[v]]
        lam[v] = lam[edge_u[ids]] @ pi[ids]
    rho = np.zeros(n + 1)
    rho[n] = 1.0
    out_order, out_bounds = dag._out_order, dag._out_bounds
    for u in range(n - 1, 0, -1):
        ids = out_order[out_bounds[u - 1] : out_bounds[u]]
        rho[u] = rho[edge_v[ids]] @ pi[ids]
    omega = pi * lam[edge_u] * rho[edge_v]
    return EdgeMarginals(_readonly(omega), _readonly(lam), _readonly(rho))


def edge_marginals(dist: PathDistribution) -> EdgeMarginals:
    """Probability that a random path crosses each edge.

    One forward and one backward pass over the transition table; the
    result is cached on the distribution.
    """
    return dist._marginals


def _compute_hitting(dist: PathDistribution) -> HittingProbabilities:
    dag, pi = dist.dag, dist._pi
    n = dag.node_count
    zeta = np.zeros(n + 1)
    zeta[n] = 1.0
    out_order, out_bounds = dag._out_order, dag._out_bounds
    edge_v = dag.edge_v
    for u in range(n - 1, 0, -1):
        ids = out_order[out_bounds[u - 1] : out_bounds[u]]
        zeta[u] = zeta[edge_v[ids]] @ pi[ids]
    return HittingProbabilities(_readonly(zeta))


def hitting_probabilities(dist: PathDistribution) -> HittingProbabilities:
    """Probability that a random path visits each node."""
    return dist._hitting


def _check_same_family(p: PathDistribution, q: PathDistribution) -> None:
    if not p.dag.structurally_equal(q.dag):
        raise GraphMismatchError("distributions live on structurally different graphs")
    if p.alpha != q.alpha:
        raise AlphaMismatchError(f"alpha differs: {p.alpha} vs {q.alpha}")


def kl_divergence(p: PathDistribution, q: PathDistribution) -> float:
    """KL(p || q) for two distributions on the same graph and alpha.

    Closed form: the log-normaliser gap plus ``alpha`` times the
    p-marginal-weighted difference of edge weights.  Tiny negative values
    (within ``KL_CLAMP`` of zero) clamp to 0.
    """
    _check_same_family(p, q)
    n = p.dag.node_count
    omega = p._marginals.omega
    value = float(q.mu[n] - p.mu[n] + p.alpha * (omega @ (p.weights - q.weights)))
    if value < 0.0:
        if value < -KL_CLAMP:
            raise NumericalConsistencyError(f"KL evaluated to {value}, below -{KL_CLAMP}")
        return 0.0
    return value


def grad_log_prob(dist: PathDistribution, path: Sequence[int]) -> np.ndarray:
    """Gradient of the path log-probability in the edge weights.

    ``alpha * (indicator(path) - omega)`` per edge: raising a weight helps
    exactly when the path uses the edge more than the distribution does.
    """
    ids = dist.dag.path_edge_ids(path)
    indicator = np.zeros(dist.dag.num_edges)
    indicator[ids] = 1.0
    return dist.alpha * (indicator - dist._marginals.omega)


def reinforce_grad(dist: PathDistribution, path: Sequence[int], reward: float) -> np.ndarray:
    """Score-function gradient estimate: ``reward * grad_log_prob``."""
    r = float(reward)
    if not math.isfinite(r):
        raise ValueError(f"reward must be finite, got {reward!r}")
    return r * grad_log_prob(dist, path)


def kl_grad_prior(p: PathDistribution, q: PathDistribution) -> np.ndarray:
    """Gradient of ``kl_divergence(p, q)`` in q's edge weights.

    Equals ``alpha * (omega_q - omega_p)`` per edge because the weights
    enter q only through its log-normaliser and the cross term.
    """
    _check_same_family(p, q)
    return p.alpha * (q._marginals.omega - p._marginals.omega)


def kl_grad_posterior_mc(
    p: PathDistribution, q: PathDistribution, num_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Monte-Carlo score-function estimate of d KL(p || q) / d w_p.

    No closed form is provided for the first argument's weights (it would
    need edge-indicator covariances), so this averages
    ``grad_log_prob(p, y) * (log p(y) - log q(y))`` over sampled paths.
    Unbiased; variance falls as 1/num_samples.
    """
    _check_same_family(p, q)
    acc = np.zeros(p.dag.num_edges)
    for _ in range(int(num_samples)):
        y = sample_path(p, rng)
        f = path_log_prob(p, y) - path_log_prob(q, y)
        acc += f * grad_log_prob(p, y)
    return acc / float(num_samples)


def _check_tau(tau: float) -> float:
    t = float(tau)
    if not (math.isfinite(t) and t > 0.0):
        raise NonPositiveTauError(f"tau must be a positive finite real, got {tau!r}")
    return t


def soft_sample(dist: PathDistribution, tau: float, rng: np.random.Generator) -> SoftPath:
    """Relaxed path draw at temperature ``tau``.

    One unit Gumbel is drawn per edge (in edge order).  For each node the
    perturbed log-transitions ``(log_pi + g) / tau`` are softmaxed across
    its parents, then the sink's unit mass flows backwards:
    ``gamma[u] = sum over children v of gamma[v] * delta[u, v]``.
    """
    t = _check_tau(tau)
    dag = dist.dag
    n = dag.node_count
    g = gumbel_sample(rng, 0.0, size=dag.num_edges)
    z = (dist.log_pi + g) / t
    delta = np.empty(dag.num_edges)
    in_order, in_bounds = dag._in_order, dag._in_bounds
    for v in range(2, n + 1):
        ids = in_order[in_bounds[v - 1] : in_bounds[v]]
        s = z[ids]
        s = np.exp(s - s.max())
        delta[ids] = s / s.sum()
    gamma = np.zeros(n + 1)
    gamma[n] = 1.0
    out_order, out_bounds = dag._out_order, dag._out_bounds
    edge_v = dag.edge_v
    for u in range(n - 1, 0, -1):
        ids = out_order[out_bounds[u - 1] : out_bounds[u]]
        gamma[u] = gamma[edge_v[ids]] @ delta[ids]
    return SoftPath(_readonly(gamma), _readonly(delta), t)


def node_bernoulli_soft(
    dist: PathDistribution, tau: float, rng: np.random.Generator
) -> np.ndarray:
    """Independent relaxed Bernoulli visit indicators, one per node.

    Interior nodes draw ``binary_gumbel_softmax(zeta, tau)`` with their
    hitting probability as the parameter (clipped away from {0, 1});
    endpoints and nodes hit with probability exactly 1 (or 0) stay fixed
    and consume no randomness.  Index 0 of the result is unused.
    """
    t = _check_tau(tau)
    n = dist.dag.node_count
    zeta = dist._hitting.zeta
    out = np.ones(n + 1)
    free = (zeta != 1.0) & (zeta != 0.0)
    free[[0, 1, n]] = False
    out[zeta == 0.0] = 0.0
    out[[0, 1, n]] = 1.0
    if free.any():
        z = np.clip(zeta[free], _ZETA_CLIP, 1.0 - _ZETA_CLIP)
        out[free] = binary_gumbel_softmax(z, t, rng)
    return out
