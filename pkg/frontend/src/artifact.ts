/**
 * Readers for the simulator CLI's output files.
 *
 * Every CSV starts with two comment lines (tool version, then the full run
 * configuration as one JSON object) followed by a normal header row; JSON
 * outputs carry the same pair as leading keys. Parsing keeps cell values as
 * strings so the per-plot schemas decide what is numeric.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface CsvArtifact {
  version: string;
  config: Record<string, unknown>;
  columns: string[];
  rows: Record<string, string>[];
}

export class ArtifactError extends Error {}

/** Columns present in `have` but required by `need`, as an error message. */
export function checkColumns(kind: string, have: string[], need: string[]): void {
  const missing = need.filter((c) => !have.includes(c));
  if (missing.length > 0) {
    throw new ArtifactError(
      `${kind} input missing column(s): ${missing.join(", ")} ` +
        `(file has: ${have.join(", ") || "none"})`,
    );
  }
}

export function readCsvArtifact(path: string): CsvArtifact {
  const text = readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/);
  let version = "";
  let config: Record<string, unknown> = {};
  let body = 0;
  for (; body < lines.length && lines[body].startsWith("#"); body++) {
    const comment = lines[body].slice(1).trim();
    if (comment.startsWith("{")) {
      config = JSON.parse(comment) as Record<string, unknown>;
    } else if (comment) {
      version = comment;
    }
  }
  const parsed = Papa.parse<Record<string, string>>(lines.slice(body).join("\n").trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new ArtifactError(`${path}: ${first.message} (row ${first.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  return { version, config, columns, rows: parsed.data };
}

/** Parse a numeric cell; the CLI writes all floats in plain %.17g form. */
export function num(row: Record<string, string>, column: string): number {
  const raw = row[column];
  const value = Number(raw);
  if (raw === undefined || raw === "" || Number.isNaN(value)) {
    throw new ArtifactError(`non-numeric value ${JSON.stringify(raw)} in column ${column}`);
  }
  return value;
}

export function readJsonArtifact(path: string): Record<string, unknown> {
  return JSON.parse(readFileSync(path, "utf-8")) as Record<string, unknown>;
}

/**
 * Pull the constant c out of a saved tunneling-time fit summary.
 *
 * Accepts either the CLI's printed line ("c=14.57 relative_residual=...")
 * saved to a file, or a JSON object with a "c" field.
 */
export function parseFitSummary(text: string): number {
  const trimmed = text.trim();
  if (trimmed.startsWith("{")) {
    const doc = JSON.parse(trimmed) as { c?: unknown };
    if (typeof doc.c === "number") return doc.c;
    throw new ArtifactError('fit summary JSON has no numeric "c" field');
  }
  const match = /(?:^|\s)c=([-+0-9.eE]+)/.exec(trimmed);
  if (!match) throw new ArtifactError('fit summary has no "c=<value>" token');
  return Number(match[1]);
}
