/** Graph descriptors accepted by {@link bindFit} (weights travel separately). */

export interface EdgeListGraph {
  /** Nodes are 1..numNodes; every edge [u, v] must have u < v. */
  numNodes: number;
  edges: Array<[number, number]>;
}

export interface LatticeGraph {
  rows: number;
  cols: number;
  kind: "dtw" | "ma";
}

export type GraphDescriptor = EdgeListGraph | LatticeGraph;

/** Wire form: the descriptor with weights baked in, as the backend reads it. */
export type WireGraph =
  | { num_nodes: number; edges: Array<[number, number, number]> }
  | { rows: number; cols: number; kind: "dtw" | "ma"; weights: number[][] };

export interface EvalRequest {
  op: string;
  graph: WireGraph;
  alpha: number;
  path?: number[];
  n?: number;
  seed?: number;
  reward?: number;
  other?: WireGraph;
  other_alpha?: number;
}

export type EvalEnvelope =
  | { ok: true; result: Record<string, unknown> }
  | { ok: false; code: string; message: string };

export function isLattice(g: GraphDescriptor): g is LatticeGraph {
  return "rows" in g;
}
