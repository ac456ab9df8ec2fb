/**
 * Errors crossing the process boundary arrive as (code, message) pairs; the
 * codes are the backend's stable taxonomy (EdgeNotForward, GraphMismatch,
 * ShapeMismatch, ...).  Client-side failures reuse the same shape with the
 * codes `HandleReleased` and `BackendUnavailable`.
 */
export class PrimaryError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.name = "PrimaryError";
    this.code = code;
  }
}

export function invariant(cond: unknown, code: string, message: string): asserts cond {
  if (!cond) throw new PrimaryError(code, message);
}
