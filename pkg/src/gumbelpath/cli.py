"""Command-line surface.

Subcommands cover validation, exact-vs-empirical density tables, path
sampling, edge marginals, KL between two weightings, the non-stochastic
argmax path, timing sweeps, and a JSON request/response mode (``eval``)
used by out-of-process clients.  All output is plain CSV or JSON and is
byte-stable for a fixed seed.

Exit codes: 0 success, 1 I/O error, 2 validation error, 3 numerical
consistency error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .dag import Dag, optimal_path
from .distribution import (
    PathDistribution,
    edge_marginals,
    fit,
    grad_log_prob,
    hitting_probabilities,
    kl_divergence,
    kl_grad_prior,
    log_partition,
    path_log_prob,
    reinforce_grad,
    sample_path,
)
from .errors import (
    GumbelPathError,
    NumericalConsistencyError,
    TooManyPathsError,
    ValidationError,
)
from .io import load_dag_json, load_grid_csv, parse_dag_document
from .lattice import (
    LatticeSpec,
    dtw_fit_fast,
    dtw_graph,
    lattice_marginals,
    ma_fit_fast,
    ma_graph,
    random_dag,
)
from .oracle import enumerate_paths, exact_distribution

DEFAULT_SEED = 1729
ENUM_LIMIT = 10**6


@dataclass
class GraphBundle:
    dag: Dag
    weights: np.ndarray
    spec: LatticeSpec | None  # set when the source was a lattice

    def fit(self, alpha: float) -> PathDistribution:
        if self.spec is None:
            return fit(self.dag, self.weights, alpha)
        fast = dtw_fit_fast if self.spec.kind == "dtw" else ma_fit_fast
        return fast(self.spec, alpha)


def _parse_lattice(text: str) -> tuple[int, int]:
    try:
        rows, cols = text.lower().split("x")
        return int(rows), int(cols)
    except ValueError:
        raise ValidationError(f"--lattice expects ROWSxCOLS, got {text!r}") from None


def _load_source(args) -> GraphBundle:
    if getattr(args, "lattice", None):
        rows, cols = _parse_lattice(args.lattice)
        if not getattr(args, "kind", None):
            raise ValidationError("--lattice requires --kind {dtw,ma}")
        grid = load_grid_csv(args.graph, rows, cols)
        spec = LatticeSpec(rows, cols, args.kind, grid)
        dag, w = (dtw_graph if args.kind == "dtw" else ma_graph)(spec)
        return GraphBundle(dag, w, spec)
    dag, w = load_dag_json(args.graph)
    return GraphBundle(dag, w, None)


def _emit(args, columns: list[str], rows: list[list]) -> None:
    fmt = getattr(args, "format", "csv")
    if fmt == "json":
        payload = [dict(zip(columns, row)) for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_cell(x) for x in row))
        text = "\n".join(lines) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _fmt_path(path) -> str:
    return " ".join(str(n) for n in path)


# -- subcommands -------------------------------------------------------------


def cmd_validate(args) -> int:
    bundle = _load_source(args)
    dag = bundle.dag
    try:
        count = str(len(enumerate_paths(dag, ENUM_LIMIT)))
    except TooManyPathsError:
        count = f">{ENUM_LIMIT}"
    print(f"nodes: {dag.node_count}")
    print(f"edges: {dag.num_edges}")
    print(f"paths: {count}")
    return 0


def cmd_density(args) -> int:
    bundle = _load_source(args)
    counts = sorted({int(c) for c in args.counts.split(",")})
    if not counts or counts[0] < 1:
        raise ValidationError(f"--counts must be positive integers, got {args.counts!r}")
    table = exact_distribution(bundle.dag, bundle.weights, args.alpha, ENUM_LIMIT)
    dist = bundle.fit(args.alpha)
    index = {y: k for k, y in enumerate(table.paths)}
    rng = np.random.default_rng(args.seed)
    hits = np.zeros(len(table.paths))
    rows = []
    drawn = 0
    for c in counts:  # one continuing stream; each count extends the last
        while drawn < c:
            hits[index[sample_path(dist, rng)]] += 1
            drawn += 1
        emp = hits / drawn
        tv = 0.5 * float(np.abs(emp - table.pmf).sum())
        for k, y in enumerate(table.paths):
            rows.append([k, _fmt_path(y), float(table.pmf[k]), float(emp[k]), c, tv])
    _emit(args, ["path_id", "nodes", "exact_p", "empirical_p", "n_samples", "tv"], rows)
    return 0


def cmd_sample(args) -> int:
    bundle = _load_source(args)
    dist = bundle.fit(args.alpha)
    rng = np.random.default_rng(args.seed)
    rows = [[k, _fmt_path(sample_path(dist, rng))] for k in range(args.samples)]
    _emit(args, ["sample_id", "nodes"], rows)
    return 0


def cmd_marginals(args) -> int:
    bundle = _load_source(args)
    dist = bundle.fit(args.alpha)
    if bundle.spec is not None:
        omega = lattice_marginals(dist, bundle.spec).omega
    else:
        omega = edge_marginals(dist).omega
    rows = [
        [int(u), int(v), float(w)]
        for u, v, w in zip(dist.dag.edge_u, dist.dag.edge_v, omega)
    ]
    _emit(args, ["u", "v", "omega"], rows)
    return 0


def cmd_kl(args) -> int:
    p_dag, p_w = load_dag_json(args.graph)
    q_dag, q_w = load_dag_json(args.other)
    p = fit(p_dag, p_w, args.alpha)
    q = fit(q_dag, q_w, args.alpha)
    _emit(args, ["kl"], [[kl_divergence(p, q)]])
    return 0


def cmd_optimal(args) -> int:
    bundle = _load_source(args)
    path, score = optimal_path(bundle.dag, bundle.weights)
    _emit(args, ["nodes", "score"], [[_fmt_path(path), score]])
    return 0


def _bench_case(kind: str, size: int, seed: int):
    rng = np.random.default_rng(seed)
    if kind == "generic":
        dag = random_dag(size, min(1.0, 12.0 / size), seed)
        return GraphBundle(dag, rng.normal(size=dag.num_edges), None)
    rows, cols = (size, size) if kind == "dtw" else (size, 2 * size)
    spec = LatticeSpec(rows, cols, kind, rng.normal(size=(rows, cols)))
    dag, w = (dtw_graph if kind == "dtw" else ma_graph)(spec)
    return GraphBundle(dag, w, spec)


def _median_time(fn, repeats: int) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    samples.sort()
    return samples[len(samples) // 2]


def cmd_bench(args) -> int:
    defaults = {
        "generic": "2000,4000,8000,16000",
        "dtw": "128,181,256,362",
        "ma": "128,181,256,362",
    }
    sizes = [int(s) for s in (args.sizes or defaults[args.kind]).split(",")]
    rows = []
    for size in sizes:
        bundle = _bench_case(args.kind, size, args.seed)
        fit_s = _median_time(lambda: bundle.fit(args.alpha), args.repeats)
        dist = bundle.fit(args.alpha)
        if bundle.spec is not None:
            marg = lambda: lattice_marginals(dist, bundle.spec)  # noqa: E731
        else:
            marg = lambda: _compute_marginals_uncached(dist)  # noqa: E731
        marg_s = _median_time(marg, args.repeats)
        rng = np.random.default_rng(args.seed)
        sample_s = _median_time(lambda: sample_path(dist, rng), args.repeats)
        rows.append(
            [args.kind, size, bundle.dag.node_count, bundle.dag.num_edges, fit_s, marg_s, sample_s]
        )
    _emit(
        args,
        ["kind", "size", "num_nodes", "num_edges", "fit_s", "marginals_s", "sample_s"],
        rows,
    )
    return 0


def _compute_marginals_uncached(dist: PathDistribution):
    from .distribution import _compute_marginals

    return _compute_marginals(dist)


# -- eval: JSON request/response bridge --------------------------------------


def _graph_from_request(desc) -> GraphBundle:
    if not isinstance(desc, dict):
        raise ValidationError("graph descriptor must be an object")
    if "rows" in desc:
        spec = LatticeSpec(
            int(desc["rows"]),
            int(desc["cols"]),
            desc.get("kind", "dtw"),
            np.asarray(desc["weights"], dtype=np.float64),
        )
        dag, w = (dtw_graph if spec.kind == "dtw" else ma_graph)(spec)
        return GraphBundle(dag, w, spec)
    dag, w = parse_dag_document(desc)
    return GraphBundle(dag, w, None)


def _eval_one(req: dict) -> dict:
    op = req.get("op")
    bundle = _graph_from_request(req.get("graph"))
    alpha = float(req.get("alpha", 1.0))
    if op == "optimal":
        path, score = optimal_path(bundle.dag, bundle.weights)
        return {"path": list(path), "score": score}
    dist = bundle.fit(alpha)
    if op == "fit":
        return {
            "log_partition": log_partition(dist),
            "num_nodes": dist.dag.node_count,
            "num_edges": dist.dag.num_edges,
        }
    if op == "log_prob":
        return {"value": path_log_prob(dist, req["path"])}
    if op == "sample":
        rng = np.random.default_rng(int(req.get("seed", DEFAULT_SEED)))
        n = int(req.get("n", 1))
        return {"paths": [list(sample_path(dist, rng)) for _ in range(n)]}
    if op == "marginals":
        return {"omega": edge_marginals(dist).omega.tolist()}
    if op == "hitting":
        return {"zeta": hitting_probabilities(dist).zeta[1:].tolist()}
    if op == "grad_log_prob":
        return {"value": grad_log_prob(dist, req["path"]).tolist()}
    if op == "reinforce_grad":
        return {"value": reinforce_grad(dist, req["path"], float(req["reward"])).tolist()}
    if op in ("kl", "kl_grad_prior"):
        other = _graph_from_request(req.get("other"))
        q = other.fit(float(req.get("other_alpha", alpha)))
        if op == "kl":
            return {"value": kl_divergence(dist, q)}
        return {"value": kl_grad_prior(dist, q).tolist()}
    raise ValidationError(f"unknown op {op!r}")


def _eval_envelope(req) -> dict:
    try:
        return {"ok": True, "result": _eval_one(req)}
    except GumbelPathError as exc:
        return {"ok": False, "code": exc.code, "message": str(exc)}
    except (ValueError, KeyError, TypeError) as exc:
        return {"ok": False, "code": "Validation", "message": str(exc)}


def cmd_eval(args) -> int:
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        req = json.loads(text)
    except json.JSONDecodeError as exc:
        envelope = {"ok": False, "code": "Validation", "message": f"bad request JSON: {exc}"}
        print(json.dumps(envelope))
        return 0
    if isinstance(req, dict) and "batch" in req:
        envelope = {"ok": True, "results": [_eval_envelope(r) for r in req["batch"]]}
    else:
        envelope = _eval_envelope(req)
    print(json.dumps(envelope))
    return 0


# -- parser ------------------------------------------------------------------


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="DAG JSON file, or grid CSV with --lattice")
    p.add_argument("--lattice", help="ROWSxCOLS; read --graph as a weight-grid CSV")
    p.add_argument("--kind", choices=["dtw", "ma"], help="lattice move set")


def _add_common_flags(p: argparse.ArgumentParser, *, alpha=True) -> None:
    if alpha:
        p.add_argument("--alpha", type=float, default=1.0, help="sharpness (default 1.0)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"rng seed (default {DEFAULT_SEED})")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gumbelpath",
        description="Gibbs path distributions on DAGs: sampling, likelihood, marginals, KL.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a graph file and print a summary")
    _add_source_flags(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("density", help="exact vs empirical path densities")
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--counts", default="1,50,100,250", help="comma-separated sample counts")
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("sample", help="draw paths")
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--samples", type=int, default=100, help="number of draws")
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("marginals", help="per-edge visit probabilities")
    _add_source_flags(p)
    _add_common_flags(p)
    p.set_defaults(handler=cmd_marginals)

    p = sub.add_parser("kl", help="KL divergence between two weightings of one graph")
    p.add_argument("--graph", required=True, help="DAG JSON file (the p side)")
    p.add_argument("--other", required=True, help="DAG JSON file (the q side)")
    _add_common_flags(p)
    p.set_defaults(handler=cmd_kl)

    p = sub.add_parser("optimal", help="highest-scoring path")
    _add_source_flags(p)
    _add_common_flags(p)
    p.set_defaults(handler=cmd_optimal)

    p = sub.add_parser("bench", help="timing sweep over graph sizes")
    p.add_argument("--kind", choices=["generic", "dtw", "ma"], required=True)
    p.add_argument("--sizes", help="comma-separated sizes (nodes, or lattice side)")
    p.add_argument("--repeats", type=int, default=3)
    _add_common_flags(p)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("eval", help="JSON request/response bridge for client bindings")
    p.add_argument("--in", dest="infile", help="request file (default stdin)")
    p.set_defaults(handler=cmd_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except NumericalConsistencyError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 3
    except GumbelPathError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"Validation: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"IO: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:  # console-script shim
    raise SystemExit(main())
