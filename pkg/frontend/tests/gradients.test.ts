import { describe, expect, test } from "vitest";

import { bindFit, type EdgeListGraph } from "../src/index.js";

const diamond: EdgeListGraph = {
  numNodes: 4,
  edges: [
    [1, 2],
    [1, 3],
    [2, 4],
    [3, 4],
  ],
};

describe("gradients through the boundary", () => {
  test("gradLogProb matches finite differences of logProb", () => {
    const w = [1.0, 0.0, 1.0, 0.0];
    const path = [1, 2, 4];
    const dist = bindFit(diamond, w, 1.0);
    const grad = dist.gradLogProb(path);
    const h = 1e-5;
    for (let k = 0; k < w.length; k++) {
      const up = [...w];
      const dn = [...w];
      up[k] += h;
      dn[k] -= h;
      const fd =
        (bindFit(diamond, up, 1.0).logProb(path) - bindFit(diamond, dn, 1.0).logProb(path)) /
        (2 * h);
      expect(Math.abs(fd - grad[k])).toBeLessThan(1e-5 * Math.max(1, Math.abs(grad[k])));
    }
  });

  test("reinforceGrad scales gradLogProb by the reward", () => {
    const dist = bindFit(diamond, [1.0, 0.0, 1.0, 0.0], 1.0);
    const g = dist.gradLogProb([1, 3, 4]);
    expect(dist.reinforceGrad([1, 3, 4], -2.0)).toEqual(g.map((x) => -2.0 * x));
    expect(dist.reinforceGrad([1, 3, 4], 0.0)).toEqual(g.map((x) => 0.0 * x));
  });

  test("single-path lattice has zero log-partition at zero weights", () => {
    const dist = bindFit({ rows: 3, cols: 3, kind: "ma" }, new Float64Array(9), 1.0);
    expect(dist.logPartition()).toBe(0);
    // the band keeps only the diagonal cells, numbered compactly
    expect(dist.optimal().path).toEqual([1, 2, 3]);
  });
});
