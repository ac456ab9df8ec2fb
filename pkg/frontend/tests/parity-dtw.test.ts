import { describe, test } from "vitest";

import { loadManifest, runCase } from "./helpers.js";

const cases = loadManifest().cases.filter((c) => c.name.startsWith("dtw"));

describe("parity: dtw lattices", () => {
  test("covers enough cases", () => {
    if (cases.length < 10) throw new Error("manifest lost its dtw cases");
  });
  for (const c of cases) {
    test(c.name, () => runCase(c));
  }
});
