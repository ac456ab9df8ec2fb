/**
 * Array-in / array-out client for the gumbelpath backend.
 *
 * A {@link BoundDistribution} pins a graph descriptor, its edge weights and
 * a sharpness parameter; every method round-trips one operation through the
 * backend CLI's JSON bridge, so the numbers returned here are exactly the
 * backend's (identical bits for deterministic operations, identical streams
 * for seeded sampling).  No call retains references to caller arrays.
 */

import { runEval, type BridgeOptions } from "./bridge.js";
import { invariant, PrimaryError } from "./errors.js";
import { isLattice, type GraphDescriptor, type WireGraph } from "./types.js";

export { PrimaryError } from "./errors.js";
export { runEval } from "./bridge.js";
export type { BridgeOptions } from "./bridge.js";
export type { EdgeListGraph, GraphDescriptor, LatticeGraph, WireGraph } from "./types.js";

export type Weights = ArrayLike<number>;

function toWire(graph: GraphDescriptor, weights: Weights): WireGraph {
  const w = Array.from(weights, Number);
  invariant(
    w.every((x) => Number.isFinite(x)),
    "ShapeMismatch",
    "weights must be finite numbers",
  );
  if (isLattice(graph)) {
    const { rows, cols, kind } = graph;
    invariant(
      w.length === rows * cols,
      "ShapeMismatch",
      `expected ${rows * cols} weights for a ${rows}x${cols} lattice, got ${w.length}`,
    );
    const grid: number[][] = [];
    for (let i = 0; i < rows; i++) grid.push(w.slice(i * cols, (i + 1) * cols));
    return { rows, cols, kind, weights: grid };
  }
  invariant(
    w.length === graph.edges.length,
    "ShapeMismatch",
    `expected ${graph.edges.length} edge weights, got ${w.length}`,
  );
  return {
    num_nodes: graph.numNodes,
    edges: graph.edges.map(([u, v], k) => [u, v, w[k]] as [number, number, number]),
  };
}

/** Fit a path distribution in the backend and return a handle to it. */
export function bindFit(
  graph: GraphDescriptor,
  weights: Weights,
  alpha: number,
  options: BridgeOptions = {},
): BoundDistribution {
  return new BoundDistribution(toWire(graph, weights), alpha, options);
}

export class BoundDistribution {
  readonly alpha: number;
  readonly numNodes: number;
  readonly numEdges: number;
  private readonly wire: WireGraph;
  private readonly options: BridgeOptions;
  private readonly logZ: number;
  private released = false;

  constructor(wire: WireGraph, alpha: number, options: BridgeOptions = {}) {
    this.wire = wire;
    this.alpha = alpha;
    this.options = options;
    // fitting up front validates the graph and pins the log-normaliser
    const fitted = this.call("fit");
    this.logZ = fitted.log_partition as number;
    this.numNodes = fitted.num_nodes as number;
    this.numEdges = fitted.num_edges as number;
  }

  private call(op: string, extra: Record<string, unknown> = {}): Record<string, unknown> {
    invariant(!this.released, "HandleReleased", "this distribution handle was released");
    return runEval({ op, graph: this.wire, alpha: this.alpha, ...extra }, this.options);
  }

  /** Log of the normalising constant, fixed at fit time. */
  logPartition(): number {
    invariant(!this.released, "HandleReleased", "this distribution handle was released");
    return this.logZ;
  }

  /** Highest-scoring source-to-sink path and its score. */
  optimal(): { path: number[]; score: number } {
    const res = this.call("optimal");
    return { path: res.path as number[], score: res.score as number };
  }

  /** Draw n exact paths; the stream is a pure function of the seed. */
  sample(n: number, seed: number): number[][] {
    return this.call("sample", { n, seed }).paths as number[][];
  }

  /** Log-probability of one path (1-based node ids). */
  logProb(path: number[]): number {
    return this.call("log_prob", { path }).value as number;
  }

  /** Per-edge visit probabilities, aligned with the edge order. */
  marginals(): number[] {
    return this.call("marginals").omega as number[];
  }

  /** Per-node visit probabilities for nodes 1..numNodes. */
  hitting(): number[] {
    return this.call("hitting").zeta as number[];
  }

  /** Gradient of logProb(path) in the edge weights. */
  gradLogProb(path: number[]): number[] {
    return this.call("grad_log_prob", { path }).value as number[];
  }

  /** Score-function gradient estimate: reward * gradLogProb(path). */
  reinforceGrad(path: number[], reward: number): number[] {
    return this.call("reinforce_grad", { path, reward }).value as number[];
  }

  /** KL divergence from this distribution to another on the same graph. */
  kl(other: BoundDistribution): number {
    return this.call("kl", { other: other.wire, other_alpha: other.alpha }).value as number;
  }

  /** Gradient of kl(other) in the other distribution's edge weights. */
  klGradPrior(other: BoundDistribution): number[] {
    return this.call("kl_grad_prior", { other: other.wire, other_alpha: other.alpha })
      .value as number[];
  }

  /** Invalidate the handle; later calls throw `HandleReleased`. */
  release(): void {
    this.released = true;
  }
}
