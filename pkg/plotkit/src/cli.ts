#!/usr/bin/env node
/**
 * plot <convergence|alignment_bars|query_compare> --in <paths...> --out <file> [--title <text>]
 *
 * Reads harness trace/summary/report files and writes an SVG figure. Inputs
 * may be files or directories; directories are searched for the right file
 * kind. Inputs are validated before the output file is opened, so a failed
 * invocation never leaves a partial figure behind.
 */

import { mkdirSync, readdirSync, statSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { parseAlignmentReport, renderAlignment } from "./alignment";
import { meanCurves, renderConvergence } from "./convergence";
import { parseSummary, renderQueryCompare } from "./querycompare";
import { loadTraces } from "./trace";

export const FIGURE_KINDS = ["convergence", "alignment_bars", "query_compare"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

function collectFiles(inputs: string[], pattern: RegExp, description: string): string[] {
  const found: string[] = [];
  const walk = (path: string): void => {
    if (statSync(path).isDirectory()) {
      for (const entry of readdirSync(path).sort()) {
        walk(join(path, entry));
      }
    } else if (pattern.test(path)) {
      found.push(path);
    }
  };
  for (const input of inputs) {
    walk(input);
  }
  found.sort();
  if (found.length === 0) {
    throw new Error(`no ${description} found under: ${inputs.join(", ")}`);
  }
  return found;
}

export function buildFigure(kind: FigureKind, inputs: string[], title?: string): string {
  switch (kind) {
    case "convergence":
      return renderConvergence(meanCurves(loadTraces(inputs)), title ?? "convergence");
    case "alignment_bars": {
      // basename must start with "alignment" so sibling reports in the same
      // directory (sam_alignment.json, sigma_law.json, ...) are not swept up
      const reports = collectFiles(inputs, /(^|\/)alignment[^/]*\.json$/, "alignment report files").map(
        parseAlignmentReport,
      );
      return renderAlignment(reports, title ?? "gradient alignment");
    }
    case "query_compare": {
      const summaries = collectFiles(inputs, /(^|\/)summary\.json$/, "summary.json files").map(
        parseSummary,
      );
      return renderQueryCompare(summaries, title ?? "final gap vs queries");
    }
  }
}

export function generateFigure(
  kind: FigureKind,
  inputs: string[],
  outPath: string,
  title?: string,
): void {
  const svg = buildFigure(kind, inputs, title);
  const parent = dirname(outPath);
  if (parent && parent !== ".") {
    mkdirSync(parent, { recursive: true });
  }
  writeFileSync(outPath, svg + "\n", "utf8");
}

interface CliArgs {
  kind: FigureKind;
  inputs: string[];
  out: string;
  title?: string;
}

export function parseArgs(argv: string[]): CliArgs {
  const [kind, ...rest] = argv;
  if (!kind || !(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`usage: plot <${FIGURE_KINDS.join("|")}> --in <paths...> --out <file>`);
  }
  const inputs: string[] = [];
  let out: string | undefined;
  let title: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    const arg = rest[i];
    if (arg === "--in") {
      while (i + 1 < rest.length && !rest[i + 1].startsWith("--")) {
        inputs.push(rest[++i]);
      }
    } else if (arg === "--out") {
      out = rest[++i];
    } else if (arg === "--title") {
      title = rest[++i];
    } else {
      throw new Error(`unknown argument: ${arg}`);
    }
  }
  if (inputs.length === 0 || !out) {
    throw new Error("both --in <paths...> and --out <file> are required");
  }
  return { kind: kind as FigureKind, inputs, out, title };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    generateFigure(args.kind, args.inputs, args.out, args.title);
    process.stdout.write(`wrote ${args.out}\n`);
    return 0;
  } catch (error) {
    process.stderr.write(`plot: ${(error as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
