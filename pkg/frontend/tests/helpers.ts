import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { expect } from "vitest";

import { bindFit, type GraphDescriptor, type WireGraph } from "../src/index.js";

const here = path.dirname(fileURLToPath(import.meta.url));

export interface ManifestCase {
  name: string;
  graph: WireGraph;
  alpha: number;
  expect: Record<string, any>;
}

export function loadManifest(): { cases: ManifestCase[] } {
  const file = path.resolve(here, "../../parity/manifest.json");
  return JSON.parse(readFileSync(file, "utf8"));
}

/** Split a wire graph back into the descriptor + flat weight array. */
export function fromWire(doc: WireGraph): { graph: GraphDescriptor; weights: number[] } {
  if ("rows" in doc) {
    return {
      graph: { rows: doc.rows, cols: doc.cols, kind: doc.kind },
      weights: doc.weights.flat(),
    };
  }
  return {
    graph: { numNodes: doc.num_nodes, edges: doc.edges.map(([u, v]) => [u, v]) },
    weights: doc.edges.map(([, , w]) => w),
  };
}

/**
 * Replay one manifest case through the client and require exact equality:
 * both sides of the comparison are float64s produced by the same backend,
 * so even the last bit must agree.
 */
export function runCase(c: ManifestCase): void {
  const { graph, weights } = fromWire(c.graph);
  const dist = bindFit(graph, weights, c.alpha);
  const e = c.expect;
  expect(dist.logPartition()).toBe(e.fit.log_partition);
  expect(dist.numNodes).toBe(e.fit.num_nodes);
  expect(dist.numEdges).toBe(e.fit.num_edges);
  expect(dist.optimal()).toEqual({ path: e.optimal.path, score: e.optimal.score });
  expect(dist.marginals()).toEqual(e.marginals.omega);
  expect(dist.hitting()).toEqual(e.hitting.zeta);
  expect(dist.logProb(e.log_prob.path)).toBe(e.log_prob.value);
  expect(dist.gradLogProb(e.grad_log_prob.path)).toEqual(e.grad_log_prob.value);
  expect(dist.sample(e.sample.n, e.sample.seed)).toEqual(e.sample.paths);

  const other = fromWire(e.kl.other);
  const q = bindFit(other.graph, other.weights, c.alpha);
  expect(dist.kl(q)).toBe(e.kl.value);
  expect(dist.klGradPrior(q)).toEqual(e.kl_grad_prior.value);
  q.release();
  dist.release();
}
