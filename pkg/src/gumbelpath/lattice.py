"""Grid-structured graphs and their fast dense kernels.

Two lattice families over an ``rows x cols`` weight grid:

* ``dtw``: paths from the top-left to the bottom-right cell moving right,
  down or diagonally - the dynamic-time-warping alignment graph.
* ``ma``: right/diagonal moves only, ``rows <= cols`` - the monotonic
  alignment graph; cells that cannot lie on any corner-to-corner path are
  dropped.

Every edge entering cell (i, j) carries that cell's weight, so a path's
score sums the weights of the cells it visits after the start corner.  The
constructors return ordinary validated graphs; the ``*_fit_fast`` kernels
produce the same fitted distribution as the generic pipeline but sweep the
dense grid by anti-diagonals (dtw) or columns (ma), giving a linear number
of vectorised steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dag import Dag, _readonly, build_dag
from .distribution import EdgeMarginals, PathDistribution, sample_path
from .errors import (
    KindMismatchError,
    NonPositiveAlphaError,
    RowsExceedColsError,
    SpecMismatchError,
)

LATTICE_KINDS = ("dtw", "ma")


@dataclass(frozen=True)
class LatticeSpec:
    """A lattice kind plus its per-cell log-score grid."""

    rows: int
    cols: int
    kind: str
    weights: np.ndarray

    def __post_init__(self):
        if self.kind not in LATTICE_KINDS:
            raise KindMismatchError(f"kind must be one of {LATTICE_KINDS}, got {self.kind!r}")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        if self.kind == "ma" and self.rows > self.cols:
            raise RowsExceedColsError(
                f"monotonic alignment needs rows <= cols, got {self.rows}x{self.cols}"
            )
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (self.rows, self.cols):
            raise ValueError(f"weight grid must be {self.rows}x{self.cols}, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weight grid must be finite")
        object.__setattr__(self, "weights", _readonly(w.copy()))


@dataclass(frozen=True)
class LatticePath:
    """A corner-to-corner walk as 1-based (row, col) cells."""

    cells: tuple[tuple[int, int], ...]
    rows: int
    cols: int

    def indicator(self) -> np.ndarray:
        """Dense 0/1 alignment grid with ones on the visited cells."""
        grid = np.zeros((self.rows, self.cols), dtype=np.int8)
        for i, j in self.cells:
            grid[i - 1, j - 1] = 1
        return grid


def _require_kind(spec: LatticeSpec, kind: str) -> None:
    if spec.kind != kind:
        raise KindMismatchError(f"expected a {kind!r} lattice, got {spec.kind!r}")


def _ma_mask(rows: int, cols: int) -> np.ndarray:
    """Cells on at least one corner-to-corner right/diagonal walk."""
    i, j = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    return (i <= j) & (i >= j - (cols - rows))


def _lattice_arrays(spec: LatticeSpec):
    """Edge arrays (u, v, per-edge weight) plus the node id grid.

    Edges are emitted grouped by destination cell in row-major order; the
    predecessor order within a cell is fixed (left, diagonal[, up]), which
    pins the canonical edge indexing.  Node ids are row-major, skipping
    dropped cells, so they remain topological for both move sets.
    """
    rows, cols, w = spec.rows, spec.cols, spec.weights
    if spec.kind == "dtw":
        keep = np.ones((rows, cols), dtype=bool)
        node = np.arange(1, rows * cols + 1, dtype=np.int64).reshape(rows, cols)
    else:
        keep = _ma_mask(rows, cols)
        node = np.zeros((rows, cols), dtype=np.int64)
        node[keep] = np.arange(1, int(keep.sum()) + 1)

    pad = np.zeros((rows + 1, cols + 1), dtype=np.int64)
    pad[1:, 1:] = node  # pad[i, j] == node id of cell (i-1, j-1), 0 outside
    left = pad[1:, :-1]
    diag = pad[:-1, :-1]
    preds = [left, diag] if spec.kind == "ma" else [left, diag, pad[:-1, 1:]]

    u = np.stack(preds, axis=-1)
    v = np.broadcast_to(node[..., None], u.shape)
    ew = np.broadcast_to(w[..., None], u.shape)
    valid = (u > 0) & (v > 0)
    return u[valid], v[valid], ew[valid].copy(), node, keep


def _build_lattice(spec: LatticeSpec) -> tuple[Dag, np.ndarray]:
    u, v, ew, node, _ = _lattice_arrays(spec)
    dag = build_dag(int(node.max()), np.column_stack([u, v]))
    return dag, _readonly(ew)


def dtw_graph(spec: LatticeSpec) -> tuple[Dag, np.ndarray]:
    """Generic graph plus per-edge weights for a right/down/diagonal lattice."""
    _require_kind(spec, "dtw")
    return _build_lattice(spec)


def ma_graph(spec: LatticeSpec) -> tuple[Dag, np.ndarray]:
    """Generic graph plus per-edge weights for a right/diagonal lattice."""
    _require_kind(spec, "ma")
    return _build_lattice(spec)


def _check_alpha(alpha: float) -> float:
    a = float(alpha)
    if not (math.isfinite(a) and a > 0.0):
        raise NonPositiveAlphaError(f"alpha must be a positive finite real, got {alpha!r}")
    return a


def _stacked_lse(cand: np.ndarray) -> np.ndarray:
    """Log-sum-exp over axis 0 with -inf entries ignored; assumes a finite max."""
    m = cand.max(axis=0)
    return m + np.log(np.exp(cand - m).sum(axis=0))


def dtw_fit_fast(spec: LatticeSpec, alpha: float) -> PathDistribution:
    """Fit on a dtw lattice by anti-diagonal sweeps over the dense grid.

    ``rows + cols - 1`` sequential steps; cells on one anti-diagonal only
    depend on earlier diagonals, so each step is one vectorised update.
    The result matches :func:`gumbelpath.distribution.fit` on
    :func:`dtw_graph` entry for entry.
    """
    _require_kind(spec, "dtw")
    a = _check_alpha(alpha)
    rows, cols = spec.rows, spec.cols
    aw = a * spec.weights
    mu_pad = np.full((rows + 1, cols + 1), -np.inf)
    mu_pad[1, 1] = 0.0
    for d in range(1, rows + cols - 1):
        i = np.arange(max(0, d - cols + 1), min(d, rows - 1) + 1)
        j = d - i
        # Predecessor order (diag, up, left) = ascending node id, matching
        # the generic fit's reduction order bit for bit.
        cand = np.stack(
            [mu_pad[i, j], mu_pad[i, j + 1], mu_pad[i + 1, j]], axis=0
        ) + aw[i, j]
        mu_pad[i + 1, j + 1] = _stacked_lse(cand)
    return _finish_lattice_fit(spec, a, mu_pad)


def ma_fit_fast(spec: LatticeSpec, alpha: float) -> PathDistribution:
    """Fit on an ma lattice by column sweeps over the dense grid.

    Both predecessors of a cell live in the previous column, so each of the
    ``cols`` steps updates a whole column at once, restricted to the
    reachable band of rows.  Matches the generic pipeline entry for entry.
    """
    _require_kind(spec, "ma")
    a = _check_alpha(alpha)
    rows, cols = spec.rows, spec.cols
    aw = a * spec.weights
    mu_pad = np.full((rows + 1, cols + 1), -np.inf)
    mu_pad[1, 1] = 0.0
    for j in range(1, cols):
        lo = max(0, j - (cols - rows))
        hi = min(j, rows - 1)
        i = np.arange(lo, hi + 1)
        left = mu_pad[i + 1, j].copy()
        left[i == j] = -np.inf  # the on-diagonal cell has no left neighbour in band
        cand = np.stack([mu_pad[i, j], left], axis=0) + aw[i, j]
        mu_pad[i + 1, j + 1] = _stacked_lse(cand)
    return _finish_lattice_fit(spec, a, mu_pad)


def _finish_lattice_fit(spec: LatticeSpec, alpha: float, mu_pad: np.ndarray) -> PathDistribution:
    """Assemble the standard fitted object from a dense potential grid."""
    u, v, ew, node, keep = _lattice_arrays(spec)
    dag = build_dag(int(node.max()), np.column_stack([u, v]))
    mu = np.zeros(dag.node_count + 1)
    mu[node[keep]] = mu_pad[1:, 1:][keep]
    log_pi = mu[dag.edge_u] + alpha * ew - mu[dag.edge_v]
    return PathDistribution(dag, _readonly(ew), alpha, _readonly(mu), _readonly(log_pi))


def _check_spec_match(dist: PathDistribution, spec: LatticeSpec) -> tuple:
    arrays = _lattice_arrays(spec)
    u, v = arrays[0], arrays[1]
    dag = dist.dag
    if (
        dag.node_count != int(arrays[3].max())
        or dag.num_edges != u.shape[0]
        or not np.array_equal(dag.edge_u, u)
        or not np.array_equal(dag.edge_v, v)
    ):
        raise SpecMismatchError("distribution was not fitted on this lattice spec")
    return arrays


def lattice_sample(
    dist: PathDistribution, spec: LatticeSpec, rng: np.random.Generator
) -> LatticePath:
    """Draw one alignment path, returned as (row, col) cells."""
    arrays = _check_spec_match(dist, spec)
    node, keep = arrays[3], arrays[4]
    cell_of = np.zeros((dist.dag.node_count + 1, 2), dtype=np.int64)
    ii, jj = np.nonzero(keep)
    cell_of[node[keep]] = np.column_stack([ii + 1, jj + 1])
    nodes = sample_path(dist, rng)
    cells = tuple((int(cell_of[n, 0]), int(cell_of[n, 1])) for n in nodes)
    return LatticePath(cells, spec.rows, spec.cols)


def lattice_marginals(dist: PathDistribution, spec: LatticeSpec) -> EdgeMarginals:
    """Edge marginals via dense-grid sweeps.

    Forward mass by anti-diagonal (dtw) or column (ma) order, backward mass
    in reverse, then ``omega = pi * lam[u] * rho[v]`` per edge; identical to
    the generic two-pass computation.
    """
    arrays = _check_spec_match(dist, spec)
    node, keep = arrays[3], arrays[4]
    rows, cols = spec.rows, spec.cols
    n_dirs = 3 if spec.kind == "dtw" else 2

    # Zero-padded per-direction transition grids: pi[i+1, j+1, d] is the
    # probability of the d-th incoming edge of cell (i, j); zeros stand in
    # for absent edges and make the sweeps below branch-free.
    pi = np.zeros((rows + 2, cols + 2, n_dirs))
    pad0 = np.zeros((rows + 1, cols + 1), dtype=np.int64)
    pad0[1:, 1:] = node
    preds = [pad0[1:, :-1], pad0[:-1, :-1]] + ([pad0[:-1, 1:]] if n_dirs == 3 else [])
    valid = (np.stack(preds, axis=-1) > 0) & (node[..., None] > 0)
    pi[1 : rows + 1, 1 : cols + 1][valid] = np.exp(dist.log_pi)

    lam = np.zeros((rows + 2, cols + 2))
    lam[1, 1] = 1.0
    rho = np.zeros((rows + 2, cols + 2))
    rho[rows, cols] = 1.0

    def diagonals(reverse=False):
        span = range(rows + cols - 3, -1, -1) if reverse else range(1, rows + cols - 1)
        for d in span:
            i = np.arange(max(0, d - cols + 1), min(d, rows - 1) + 1)
            yield i, d - i

    def columns(reverse=False):
        span = range(cols - 2, -1, -1) if reverse else range(1, cols)
        for j in span:
            i = np.arange(max(0, j - (cols - rows)), min(j, rows - 1) + 1)
            yield i, j

    sweep = diagonals if spec.kind == "dtw" else columns
    for i, j in sweep():
        acc = lam[i + 1, j] * pi[i + 1, j + 1, 0] + lam[i, j] * pi[i + 1, j + 1, 1]
        if n_dirs == 3:
            acc = acc + lam[i, j + 1] * pi[i + 1, j + 1, 2]
        lam[i + 1, j + 1] = acc
    # Neither reverse sweep revisits the sink's diagonal/column, so its unit
    # mass set above survives.
    for i, j in sweep(reverse=True):
        acc = rho[i + 1, j + 2] * pi[i + 1, j + 2, 0] + rho[i + 2, j + 2] * pi[i + 2, j + 2, 1]
        if n_dirs == 3:
            acc = acc + rho[i + 2, j + 1] * pi[i + 2, j + 1, 2]
        rho[i + 1, j + 1] = acc

    lam_nodes = np.zeros(dist.dag.node_count + 1)
    rho_nodes = np.zeros(dist.dag.node_count + 1)
    lam_nodes[node[keep]] = lam[1 : rows + 1, 1 : cols + 1][keep]
    rho_nodes[node[keep]] = rho[1 : rows + 1, 1 : cols + 1][keep]
    omega = np.exp(dist.log_pi) * lam_nodes[dist.dag.edge_u] * rho_nodes[dist.dag.edge_v]
    return EdgeMarginals(_readonly(omega), _readonly(lam_nodes), _readonly(rho_nodes))


def random_dag(num_nodes: int, edge_probability: float, seed: int) -> Dag:
    """Random valid DAG: independent forward edges plus minimal repairs.

    Each pair ``i < j`` is kept with ``edge_probability``.  Nodes left
    without a parent (or child) are then wired to their nearest neighbour
    by index, which guarantees every node sits on a source-to-sink path.
    Deterministic for a given seed.
    """
    n = int(num_nodes)
    if n < 2:
        raise ValueError("num_nodes must be at least 2")
    p = float(edge_probability)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"edge_probability must lie in (0, 1], got {edge_probability!r}")
    rng = np.random.default_rng(seed)
    iu, jv = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    u = (iu[keep] + 1).tolist()
    v = (jv[keep] + 1).tolist()
    present = set(zip(u, v))
    has_parent = [False] * (n + 1)
    has_child = [False] * (n + 1)
    for a, b in present:
        has_parent[b] = True
        has_child[a] = True
    extras = [(x - 1, x) for x in range(2, n + 1) if not has_parent[x]]
    extras += [(x, x + 1) for x in range(1, n) if not has_child[x]]
    for a, b in extras:
        if (a, b) not in present:
            present.add((a, b))
            u.append(a)
            v.append(b)
    return build_dag(n, np.column_stack([np.array(u), np.array(v)]))
