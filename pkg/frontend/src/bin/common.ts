/** Shared plumbing for the plot scripts: error-to-exit-code mapping. */

import { ZodError } from "zod";
import { ArtifactError } from "../artifact.js";

export function fail(err: unknown): never {
  const msg = err instanceof Error ? err.message : String(err);
  process.stderr.write(`error: ${msg}\n`);
  // 2 mirrors the simulator CLI: bad input or bad schema, not a crash
  process.exit(err instanceof ArtifactError || err instanceof ZodError ? 2 : 1);
}

export function report(out: string, bytes: number): void {
  process.stdout.write(`wrote ${out} (${bytes} bytes)\n`);
}

export const FORMAT_CHOICES = ["svg", "png"] as const;
