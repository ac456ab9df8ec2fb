"""Brute-force references by exhaustive path enumeration.

Ground truth for tests: everything here is deliberately simple and
independent of the dynamic-programming implementations it checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dag import Dag, Path, as_weights, path_score
from .errors import PathSetMismatchError, TooManyPathsError
from .gumbel import gumbel_sample

DEFAULT_LIMIT = 10**6


@dataclass(frozen=True)
class PathTable:
    """All paths of a graph with their scores and exact probabilities."""

    paths: tuple[Path, ...]
    scores: np.ndarray
    pmf: np.ndarray
    alpha: float


def enumerate_paths(dag: Dag, limit: int = DEFAULT_LIMIT) -> list[Path]:
    """All source-to-sink paths, depth first in lexicographic node order.

    Raises:
        TooManyPathsError: more than ``limit`` paths exist.
    """
    n = dag.node_count
    children = [None] + [dag.children(u).tolist() for u in range(1, n + 1)]
    out: list[Path] = []
    stack = [1]

    def walk(u: int) -> None:
        if u == n:
            if len(out) >= limit:
                raise TooManyPathsError(f"more than {limit} paths")
            out.append(tuple(stack))
            return
        for v in children[u]:
            stack.append(v)
            walk(v)
            stack.pop()

    walk(1)
    return out


def exact_distribution(
    dag: Dag, weights, alpha: float, limit: int = DEFAULT_LIMIT
) -> PathTable:
    """Exact path probabilities by enumeration and a max-shifted softmax."""
    w = as_weights(dag, weights)
    paths = enumerate_paths(dag, limit)
    scores = np.array([path_score(dag, w, y) for y in paths])
    s = float(alpha) * scores
    e = np.exp(s - s.max())
    return PathTable(tuple(paths), scores, e / e.sum(), float(alpha))


def exact_marginals(table: PathTable, dag: Dag) -> np.ndarray:
    """Per-edge visit probability: sum of the pmf over paths using the edge."""
    omega = np.zeros(dag.num_edges)
    for y, p in zip(table.paths, table.pmf):
        omega[dag.path_edge_ids(y)] += p
    return omega


def exact_hitting(table: PathTable, dag: Dag) -> np.ndarray:
    """Per-node visit probability (index 0 unused)."""
    zeta = np.zeros(dag.node_count + 1)
    for y, p in zip(table.paths, table.pmf):
        zeta[list(y)] += p
    return zeta


def exact_kl(table_p: PathTable, table_q: PathTable) -> float:
    """Divergence ``sum p * log(p / q)`` over a shared path enumeration."""
    if table_p.paths != table_q.paths:
        raise PathSetMismatchError("tables enumerate different paths")
    return float(np.sum(table_p.pmf * (np.log(table_p.pmf) - np.log(table_q.pmf))))


def gumbel_race_sample(table: PathTable, rng: np.random.Generator) -> Path:
    """Draw a path by the perturb-and-argmax construction.

    Adds an independent unit Gumbel to each path's scaled score and returns
    the winner; distributed exactly like the softmax pmf, which makes this
    an independent check of the reverse sampler.
    """
    noise = gumbel_sample(rng, 0.0, size=len(table.paths))
    k = int(np.argmax(table.alpha * table.scores + noise))
    return table.paths[k]
