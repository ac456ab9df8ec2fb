"""Interchange formats: DAG JSON documents and weight-grid CSV files.

The DAG document is ``{"num_nodes": N, "edges": [[u, v, w], ...]}`` with
1-based node ids and finite weights.  Weight grids travel as CSV rows
``row,col,value`` with 1-based indices.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath

import numpy as np

from .dag import Dag, as_weights, build_dag
from .errors import ValidationError


def parse_dag_document(doc: dict) -> tuple[Dag, np.ndarray]:
    """Build a validated graph plus weight vector from a parsed document."""
    if not isinstance(doc, dict) or "num_nodes" not in doc or "edges" not in doc:
        raise ValidationError('document must carry "num_nodes" and "edges"')
    raw = doc["edges"]
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"edges must be [u, v, w] triples: {exc}") from None
    if arr.size == 0:
        arr = arr.reshape(0, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValidationError("edges must be [u, v, w] triples")
    pairs = arr[:, :2]
    if not np.array_equal(pairs, np.round(pairs)):
        raise ValidationError("node ids must be integers")
    dag = build_dag(int(doc["num_nodes"]), pairs.astype(np.int64))
    return dag, as_weights(dag, arr[:, 2])


def dag_document(dag: Dag, weights: np.ndarray) -> dict:
    w = as_weights(dag, weights)
    edges = [[int(u), int(v), float(x)] for u, v, x in zip(dag.edge_u, dag.edge_v, w)]
    return {"num_nodes": dag.node_count, "edges": edges}


def load_dag_json(path: str | FsPath) -> tuple[Dag, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from None
    return parse_dag_document(doc)


def save_dag_json(path: str | FsPath, dag: Dag, weights: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dag_document(dag, weights), fh)
        fh.write("\n")


def load_grid_csv(path: str | FsPath, rows: int, cols: int) -> np.ndarray:
    """Read a ``row,col,value`` CSV into a dense grid; every cell required."""
    grid = np.full((rows, cols), np.nan)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#") or line.lower().startswith("row"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValidationError(f"{path}:{lineno}: expected row,col,value")
            try:
                i, j, x = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise ValidationError(f"{path}:{lineno}: cell ({i}, {j}) outside {rows}x{cols}")
            grid[i - 1, j - 1] = x
    if np.isnan(grid).any():
        i, j = np.argwhere(np.isnan(grid))[0]
        raise ValidationError(f"grid cell ({i + 1}, {j + 1}) missing from {path}")
    return grid


def save_grid_csv(path: str | FsPath, grid: np.ndarray) -> None:
    grid = np.asarray(grid)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("row,col,value\n")
        for i in range(grid.shape[0]):
            for j in range(grid.shape[1]):
                fh.write(f"{i + 1},{j + 1},{float(grid[i, j])!r}\n")
