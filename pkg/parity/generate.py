#!/usr/bin/env python3
"""Regenerate the cross-client parity manifest.

The manifest freezes, for a spread of graphs, the exact numbers the library
produces for every operation the out-of-process client exposes.  Client
implementations replay the cases through the CLI bridge and must match the
stored values bit for bit (deterministic ops) or stream for stream (seeded
sampling).

Usage: python3 parity/generate.py [--check]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

import gumbelpath as gp

MANIFEST = Path(__file__).parent / "manifest.json"


def edge_doc(dag: gp.Dag, weights: np.ndarray) -> dict:
    return {
        "num_nodes": dag.node_count,
        "edges": [
            [int(u), int(v), float(w)] for u, v, w in zip(dag.edge_u, dag.edge_v, weights)
        ],
    }


def lattice_doc(spec: gp.LatticeSpec) -> dict:
    return {
        "rows": spec.rows,
        "cols": spec.cols,
        "kind": spec.kind,
        "weights": [[float(x) for x in row] for row in spec.weights],
    }


def build_case(name, graph_doc, dag, weights, alpha, dist, other_weights, seed):
    other_doc = dict(graph_doc)
    if "rows" in graph_doc:
        other_doc["weights"] = [[float(x) for x in row] for row in other_weights]
        other_spec = gp.LatticeSpec(
            graph_doc["rows"], graph_doc["cols"], graph_doc["kind"], other_weights
        )
        fast = gp.dtw_fit_fast if graph_doc["kind"] == "dtw" else gp.ma_fit_fast
        q = fast(other_spec, alpha)
        flat_other = q.weights
    else:
        other_doc["edges"] = [
            [int(u), int(v), float(w)]
            for u, v, w in zip(dag.edge_u, dag.edge_v, other_weights)
        ]
        q = gp.fit(dag, other_weights, alpha)
        flat_other = other_weights

    path, score = gp.optimal_path(dag, weights)
    rng = np.random.default_rng(seed)
    samples = [list(gp.sample_path(dist, rng)) for _ in range(5)]
    return {
        "name": name,
        "graph": graph_doc,
        "alpha": alpha,
        "expect": {
            "fit": {
                "log_partition": gp.log_partition(dist),
                "num_nodes": dag.node_count,
                "num_edges": dag.num_edges,
            },
            "optimal": {"path": list(path), "score": score},
            "marginals": {"omega": gp.edge_marginals(dist).omega.tolist()},
            "hitting": {"zeta": gp.hitting_probabilities(dist).zeta[1:].tolist()},
            "log_prob": {"path": list(path), "value": gp.path_log_prob(dist, path)},
            "grad_log_prob": {
                "path": list(path),
                "value": gp.grad_log_prob(dist, path).tolist(),
            },
            "sample": {"n": 5, "seed": seed, "paths": samples},
            "kl": {"other": other_doc, "value": gp.kl_divergence(dist, q)},
            "kl_grad_prior": {
                "other": other_doc,
                "value": gp.kl_grad_prior(dist, q).tolist(),
            },
        },
    }


def generate() -> dict:
    cases = []

    dag = gp.build_dag(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    w = np.array([1.0, 0.0, 1.0, 0.0])
    cases.append(
        build_case(
            "diamond", edge_doc(dag, w), dag, w, 1.0, gp.fit(dag, w, 1.0), np.zeros(4), 101
        )
    )
    chain = gp.build_dag(3, [(1, 2), (2, 3)])
    cw = np.array([0.5, 0.25])
    cases.append(
        build_case(
            "chain",
            edge_doc(chain, cw),
            chain,
            cw,
            2.0,
            gp.fit(chain, cw, 2.0),
            np.array([-1.0, 3.0]),
            102,
        )
    )

    for k in range(12):
        n = 5 + (k % 6)
        p = 0.35 + 0.05 * (k % 5)
        dag = gp.random_dag(n, p, 9000 + k)
        rng = np.random.default_rng(9100 + k)
        w = rng.normal(size=dag.num_edges)
        alpha = (0.5, 1.0, 2.0)[k % 3]
        dist = gp.fit(dag, w, alpha)
        other = rng.normal(size=dag.num_edges)
        cases.append(
            build_case(f"generic-{k:02d}", edge_doc(dag, w), dag, w, alpha, dist, other, 9200 + k)
        )

    dtw_shapes = [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (2, 5), (5, 5), (4, 6), (3, 7), (6, 6)]
    for k, (rows, cols) in enumerate(dtw_shapes):
        rng = np.random.default_rng(9300 + k)
        spec = gp.LatticeSpec(rows, cols, "dtw", rng.normal(size=(rows, cols)))
        alpha = (0.7, 1.0, 1.5)[k % 3]
        dist = gp.dtw_fit_fast(spec, alpha)
        other = rng.normal(size=(rows, cols))
        cases.append(
            build_case(
                f"dtw-{rows}x{cols}",
                lattice_doc(spec),
                dist.dag,
                dist.weights,
                alpha,
                dist,
                other,
                9400 + k,
            )
        )

    ma_shapes = [(2, 3), (3, 4), (2, 6), (4, 7), (3, 3), (4, 4), (5, 8), (4, 5), (2, 2), (6, 9)]
    for k, (rows, cols) in enumerate(ma_shapes):
        rng = np.random.default_rng(9500 + k)
        spec = gp.LatticeSpec(rows, cols, "ma", rng.normal(size=(rows, cols)))
        alpha = (0.9, 1.0, 2.5)[k % 3]
        dist = gp.ma_fit_fast(spec, alpha)
        other = rng.normal(size=(rows, cols))
        cases.append(
            build_case(
                f"ma-{rows}x{cols}",
                lattice_doc(spec),
                dist.dag,
                dist.weights,
                alpha,
                dist,
                other,
                9600 + k,
            )
        )

    return {"version": 1, "cases": cases}


def render(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true", help="verify the committed manifest")
    args = ap.parse_args()
    text = render(generate())
    if args.check:
        if MANIFEST.read_text() != text:
            print("manifest is stale; rerun parity/generate.py", file=sys.stderr)
            return 1
        print(f"manifest up to date ({len(json.loads(text)['cases'])} cases)")
        return 0
    MANIFEST.write_text(text)
    print(f"wrote {MANIFEST} ({len(json.loads(text)['cases'])} cases)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
