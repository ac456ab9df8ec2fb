import { defineConfig } from "vitest/config";

// Every backend call spawns an interpreter, so individual tests are slow by
// design; keep timeouts generous.
export default defineConfig({
  test: {
    testTimeout: 300_000,
    hookTimeout: 60_000,
  },
});
