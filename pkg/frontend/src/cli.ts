/**
 * Process-level access to the pairstat executable.  All statistical work
 * happens in that process; this module only launches it and translates
 * failures into exceptions.
 */
import { spawnSync } from "node:child_process";

/** Name of the executable to launch, resolved through PATH. */
export const DEFAULT_BINARY = "pairstat";

/**
 * Raised when the pairstat process exits with a non-zero status.  The
 * message is the tool's own error text with its "error: " prefix
 * stripped; exitCode distinguishes input problems (2) from result
 * contract violations (3).
 */
export class CliError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(message: string, exitCode: number, stderr: string) {
    super(message);
    this.name = "CliError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

function extractMessage(stderr: string): string {
  const lines = stderr.trim().split("\n");
  const last = lines[lines.length - 1] ?? "";
  if (last.startsWith("error: ")) {
    return last.slice("error: ".length);
  }
  return last !== "" ? last : "pairstat failed without an error message";
}

/**
 * Run the pairstat executable synchronously and return its stdout.
 * Throws CliError when the process exits non-zero and the spawn error
 * itself when the executable cannot be started at all.
 */
export function runCli(args: readonly string[], binary: string = DEFAULT_BINARY): string {
  const proc = spawnSync(binary, args as string[], { encoding: "utf8" });
  if (proc.error !== undefined) {
    throw proc.error;
  }
  const status = proc.status ?? -1;
  if (status !== 0) {
    throw new CliError(extractMessage(proc.stderr ?? ""), status, proc.stderr ?? "");
  }
  return proc.stdout ?? "";
}
