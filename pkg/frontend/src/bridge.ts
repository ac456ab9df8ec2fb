import { spawnSync } from "node:child_process";

import { PrimaryError } from "./errors.js";
import type { EvalEnvelope, EvalRequest } from "./types.js";

export interface BridgeOptions {
  /** Interpreter running the backend; defaults to $GUMBELPATH_PYTHON or python3. */
  python?: string;
  timeoutMs?: number;
}

/**
 * One request/response round trip through the backend's JSON bridge.
 *
 * The backend is spawned per call and holds no state between calls, so a
 * request must carry everything the operation needs.  Backend failures
 * surface as {@link PrimaryError} with the backend's error code.
 */
export function runEval(request: EvalRequest, options: BridgeOptions = {}): Record<string, unknown> {
  const python = options.python ?? process.env.GUMBELPATH_PYTHON ?? "python3";
  const proc = spawnSync(python, ["-m", "gumbelpath", "eval"], {
    input: JSON.stringify(request),
    encoding: "utf8",
    timeout: options.timeoutMs ?? 120_000,
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) {
    throw new PrimaryError("BackendUnavailable", `failed to spawn ${python}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    throw new PrimaryError(
      "BackendUnavailable",
      `backend exited with status ${proc.status}: ${proc.stderr.trim()}`,
    );
  }
  let envelope: EvalEnvelope;
  try {
    envelope = JSON.parse(proc.stdout) as EvalEnvelope;
  } catch {
    throw new PrimaryError("BackendUnavailable", `backend emitted invalid JSON: ${proc.stdout.slice(0, 200)}`);
  }
  if (!envelope.ok) {
    throw new PrimaryError(envelope.code, envelope.message);
  }
  return envelope.result;
}
