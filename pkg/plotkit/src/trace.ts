/**
 * Parser for the harness trace format: one `# config: {json}` comment line,
 * a fixed CSV header, then rows whose floats round-trip float64 exactly.
 */

import { readFileSync, readdirSync, statSync } from "node:fs";
import { join } from "node:path";

export const TRACE_COLUMNS = [
  "iter",
  "loss",
  "gap",
  "sigma",
  "sigma_pert",
  "eps_sam_norm",
  "queries_cum",
  "cos_true",
  "wall_ms",
] as const;

const CONFIG_PREFIX = "# config: ";

export interface TraceRow {
  iter: number;
  loss: number;
  gap: number;
  sigma: number | null;
  sigmaPert: number | null;
  epsSamNorm: number | null;
  queriesCum: number;
  cosTrue: number | null;
  wallMs: number;
}

export interface TraceConfig {
  optimizer: { kind: string; [key: string]: unknown };
  objective: { kind: string; dimension: number; [key: string]: unknown };
  seed?: number;
  [key: string]: unknown;
}

export interface TraceFile {
  path: string;
  config: TraceConfig;
  rows: TraceRow[];
}

function parseOptional(cell: string): number | null {
  return cell === "" ? null : Number(cell);
}

export function parseTrace(path: string): TraceFile {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n");
  if (!lines[0] || !lines[0].startsWith(CONFIG_PREFIX)) {
    throw new Error(`${path}: missing "# config:" header line`);
  }
  const config = JSON.parse(lines[0].slice(CONFIG_PREFIX.length)) as TraceConfig;
  const header = (lines[1] ?? "").split(",");
  for (let i = 0; i < TRACE_COLUMNS.length; i++) {
    if (header[i] !== TRACE_COLUMNS[i]) {
      throw new Error(
        `${path}: expected column "${TRACE_COLUMNS[i]}" at position ${i}, got "${header[i] ?? ""}"`,
      );
    }
  }
  const rows: TraceRow[] = [];
  for (let i = 2; i < lines.length; i++) {
    const line = lines[i];
    if (line === "") continue;
    const cells = line.split(",");
    if (cells.length !== TRACE_COLUMNS.length) {
      throw new Error(`${path}: malformed row ${i + 1}: "${line}"`);
    }
    rows.push({
      iter: Number(cells[0]),
      loss: Number(cells[1]),
      gap: Number(cells[2]),
      sigma: parseOptional(cells[3]),
      sigmaPert: parseOptional(cells[4]),
      epsSamNorm: parseOptional(cells[5]),
      queriesCum: Number(cells[6]),
      cosTrue: parseOptional(cells[7]),
      wallMs: Number(cells[8]),
    });
  }
  return { path, config, rows };
}

/**
 * Expand inputs to trace files: files are taken as-is, directories are
 * searched recursively for trace_*.csv. Paths come back sorted so every
 * downstream aggregate is order-independent of the command line.
 */
export function collectTracePaths(inputs: string[]): string[] {
  const found: string[] = [];
  const walk = (path: string): void => {
    const info = statSync(path);
    if (info.isDirectory()) {
      for (const entry of readdirSync(path).sort()) {
        walk(join(path, entry));
      }
    } else if (/(^|\/)trace_.*\.csv$/.test(path)) {
      found.push(path);
    }
  };
  for (const input of inputs) {
    walk(input);
  }
  found.sort();
  if (found.length === 0) {
    throw new Error(`no trace_*.csv files found under: ${inputs.join(", ")}`);
  }
  return found;
}

export function loadTraces(inputs: string[]): TraceFile[] {
  return collectTracePaths(inputs).map(parseTrace);
}
