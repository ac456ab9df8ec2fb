"""Topologically numbered DAGs with a unique source and a unique sink.

Nodes are the integers ``1..N``.  Every edge ``(u, v)`` satisfies ``u < v``,
node 1 is the only parentless node, node ``N`` the only childless one, and
every node lies on at least one ``1 -> N`` path.  All other modules consume
graphs in this shape.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .errors import (
    BadEndpointsError,
    DisconnectedNodeError,
    DuplicateEdgeError,
    EdgeNotForwardError,
    InvalidPathError,
    NoPathError,
    ShapeMismatchError,
)

Path = tuple[int, ...]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Dag:
    """Validated DAG; construct through :func:`build_dag`.

    Instances are immutable after construction and safe to share across
    threads.  ``edge_u`` / ``edge_v`` keep the edges in the order they were
    supplied; that order also indexes every per-edge array in the library
    (weights, transition probabilities, marginals, gradients).
    """

    def __init__(self, node_count: int, edge_u: np.ndarray, edge_v: np.ndarray):
        self.node_count = int(node_count)
        self.edge_u = _readonly(np.ascontiguousarray(edge_u, dtype=np.int64))
        self.edge_v = _readonly(np.ascontiguousarray(edge_v, dtype=np.int64))
        self.num_edges = self.edge_u.shape[0]

        n = self.node_count
        # Incoming edges grouped by child, parents in ascending order; the
        # ascending order fixes tie-breaking and rng consumption downstream.
        self._in_order = _readonly(np.lexsort((self.edge_u, self.edge_v)))
        self._in_bounds = _readonly(
            np.searchsorted(self.edge_v[self._in_order], np.arange(1, n + 2))
        )
        # Outgoing edges grouped by parent, children ascending.
        self._out_order = _readonly(np.lexsort((self.edge_v, self.edge_u)))
        self._out_bounds = _readonly(
            np.searchsorted(self.edge_u[self._out_order], np.arange(1, n + 2))
        )
        # Sorted (u, v) keys for O(log E) membership queries.
        key = self.edge_u * np.int64(n + 1) + self.edge_v
        self._key_order = _readonly(np.argsort(key))
        self._sorted_keys = _readonly(key[self._key_order])

    # -- adjacency ---------------------------------------------------------

    def in_edge_ids(self, v: int) -> np.ndarray:
        """Edge indices entering ``v``, ordered by ascending parent."""
        return self._in_order[self._in_bounds[v - 1] : self._in_bounds[v]]

    def out_edge_ids(self, u: int) -> np.ndarray:
        """Edge indices leaving ``u``, ordered by ascending child."""
        return self._out_order[self._out_bounds[u - 1] : self._out_bounds[u]]

    def parents(self, v: int) -> np.ndarray:
        return self.edge_u[self.in_edge_ids(v)]

    def children(self, u: int) -> np.ndarray:
        return self.edge_v[self.out_edge_ids(u)]

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) tuples in input order."""
        return list(zip(self.edge_u.tolist(), self.edge_v.tolist()))

    # -- queries -----------------------------------------------------------

    def edge_index(self, u: int, v: int) -> int:
        """Index of edge (u, v), or -1 if absent."""
        key = np.int64(u) * np.int64(self.node_count + 1) + np.int64(v)
        pos = int(np.searchsorted(self._sorted_keys, key))
        if pos < self.num_edges and self._sorted_keys[pos] == key:
            return int(self._key_order[pos])
        return -1

    def path_edge_ids(self, path: Sequence[int]) -> np.ndarray:
        """Edge indices of a source-to-sink path.

        Raises:
            InvalidPathError: if the sequence is not a ``1 -> N`` path whose
                consecutive pairs are all edges of this graph.
        """
        nodes = np.asarray(path, dtype=np.int64)
        if nodes.ndim != 1 or nodes.shape[0] < 2:
            raise InvalidPathError(f"path must list at least two nodes, got {list(path)!r}")
        if nodes[0] != 1 or nodes[-1] != self.node_count:
            raise InvalidPathError(
                f"path must run from node 1 to node {self.node_count}, got {nodes.tolist()}"
            )
        u, v = nodes[:-1], nodes[1:]
        if not np.all(u < v):
            raise InvalidPathError(f"path nodes must be strictly increasing: {nodes.tolist()}")
        key = u * np.int64(self.node_count + 1) + v
        pos = np.searchsorted(self._sorted_keys, key)
        pos_clip = np.minimum(pos, self.num_edges - 1)
        bad = (pos >= self.num_edges) | (self._sorted_keys[pos_clip] != key)
        if np.any(bad):
            k = int(np.argmax(bad))
            raise InvalidPathError(f"({int(u[k])}, {int(v[k])}) is not an edge")
        return self._key_order[pos]

    def structurally_equal(self, other: "Dag") -> bool:
        return (
            self.node_count == other.node_count
            and np.array_equal(self.edge_u, other.edge_u)
            and np.array_equal(self.edge_v, other.edge_v)
        )

    def __repr__(self) -> str:  # pragma: no cover
        return f"Dag(node_count={self.node_count}, num_edges={self.num_edges})"


def build_dag(node_count: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> Dag:
    """Validate and build a :class:`Dag`.

    ``edges`` may be any sequence of (u, v) pairs or an (E, 2) integer
    array; the input order is preserved and becomes the canonical edge
    indexing.

    Raises:
        NoPathError: fewer than two nodes.
        EdgeNotForwardError: an edge with u >= v.
        DuplicateEdgeError: a repeated (u, v) pair.
        BadEndpointsError: node 1 with a parent or node N with a child.
        DisconnectedNodeError: a node off every ``1 -> N`` path.
    """
    n = int(node_count)
    if n < 2:
        raise NoPathError(f"a source-to-sink path needs at least 2 nodes, got {n}")

    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edges must be a sequence of (u, v) pairs")
    u, v = arr[:, 0], arr[:, 1]

    if arr.size and (u.min() < 1 or v.min() < 1 or u.max() > n or v.max() > n):
        k = int(np.argmax((u < 1) | (u > n) | (v < 1) | (v > n)))
        raise ValueError(f"edge ({int(u[k])}, {int(v[k])}) has a node id outside [1, {n}]")

    not_forward = u >= v
    if np.any(not_forward):
        k = int(np.argmax(not_forward))
        raise EdgeNotForwardError(
            f"edge ({int(u[k])}, {int(v[k])}) must point to a higher-numbered node"
        )

    key = u * np.int64(n + 1) + v
    order = np.argsort(key, kind="stable")
    repeat = key[order][1:] == key[order][:-1]
    if np.any(repeat):
        k = int(order[1:][repeat].min())
        raise DuplicateEdgeError(f"edge ({int(u[k])}, {int(v[k])}) appears more than once")

    # Unreachable given u < v and the range check, but the endpoint rule is
    # part of the contract, so keep it explicit.
    if np.any(v == 1) or np.any(u == n):
        raise BadEndpointsError("node 1 cannot have a parent and node N cannot have a child")

    adj = csr_matrix(
        (np.ones(arr.shape[0], dtype=np.int8), (u - 1, v - 1)), shape=(n, n)
    )
    reached = np.zeros(n, dtype=bool)
    reached[breadth_first_order(adj, 0, directed=True, return_predecessors=False)] = True
    if not reached.all():
        bad = int(np.argmin(reached)) + 1
        raise DisconnectedNodeError(f"node {bad} is unreachable from node 1")

    coreach = np.zeros(n, dtype=bool)
    coreach[
        breadth_first_order(adj.T.tocsr(), n - 1, directed=True, return_predecessors=False)
    ] = True
    if not coreach.all():
        bad = int(np.argmin(coreach)) + 1
        raise DisconnectedNodeError(f"node {bad} cannot reach node {n}")

    return Dag(n, u, v)


def as_weights(dag: Dag, values) -> np.ndarray:
    """Coerce per-edge log-scores to a validated read-only float64 array."""
    w = np.asarray(values, dtype=np.float64)
    if w.shape != (dag.num_edges,):
        raise ShapeMismatchError(
            f"expected {dag.num_edges} edge weights, got shape {w.shape}"
        )
    if not np.all(np.isfinite(w)):
        raise ValueError("edge weights must all be finite; drop the edge instead")
    return _readonly(w.copy())


def path_score(dag: Dag, weights, path: Sequence[int]) -> float:
    """Sum of the path's edge weights."""
    w = as_weights(dag, weights)
    return float(w[dag.path_edge_ids(path)].sum())


def optimal_path(dag: Dag, weights) -> tuple[Path, float]:
    """Highest-scoring source-to-sink path and its score.

    One pass in topological order keeps, per node, the best incoming score
    and its argmax parent; ties go to the smallest parent index so the
    result is deterministic.
    """
    w = as_weights(dag, weights)
    n = dag.node_count
    best = np.full(n + 1, -np.inf)
    best[1] = 0.0
    back = np.zeros(n + 1, dtype=np.int64)
    in_order, bounds, edge_u = dag._in_order, dag._in_bounds, dag.edge_u
    for v in range(2, n + 1):
        ids = in_order[bounds[v - 1] : bounds[v]]
        s = best[edge_u[ids]] + w[ids]
        k = int(np.argmax(s))  # first max == smallest parent (ids sorted by parent)
        best[v] = s[k]
        back[v] = edge_u[ids[k]]
    nodes = [n]
    while nodes[-1] != 1:
        nodes.append(int(back[nodes[-1]]))
    nodes.reverse()
    return tuple(nodes), float(best[n])
