import assert from "node:assert/strict";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { parseAlignmentReport, renderAlignment } from "../src/alignment";
import { generateFigure, main, parseArgs } from "../src/cli";
import { parseSummary, renderQueryCompare } from "../src/querycompare";

const GOLDEN = join(__dirname, "..", "..", "testdata", "golden");
const FUNCTIONS = ["cubic", "levy", "quadratic", "rosenbrock"];

test("alignment reports parse with function names", () => {
  const report = parseAlignmentReport(join(GOLDEN, "alignment", "alignment_quadratic.json"));
  assert.equal(report.functionName, "quadratic");
  assert.ok(report.baseMean > 0 && report.baseMean <= 1);
  assert.ok(report.baseMax >= report.baseMean);
  assert.ok(Math.abs(report.predicted - Math.sqrt(200 / 219)) < 1e-12);
});

test("alignment report with a missing field names it", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const bad = join(dir, "alignment_bad.json");
  writeFileSync(bad, JSON.stringify({ base_mean_cos: 0.5 }));
  assert.throws(() => parseAlignmentReport(bad), /base_max_cos/);
});

test("alignment figure renders four groups of four bars", () => {
  const reports = FUNCTIONS.map((fn) =>
    parseAlignmentReport(join(GOLDEN, "alignment", `alignment_${fn}.json`)),
  );
  const svg = renderAlignment(reports);
  assert.ok(svg.startsWith("<svg"));
  for (const fn of FUNCTIONS) {
    assert.ok(svg.includes(fn), `figure must label ${fn}`);
  }
  const bars = svg.match(/class="bar"/g) ?? [];
  assert.equal(bars.length, 16);
});

test("summary files parse optimizer and query counts", () => {
  const summary = parseSummary(join(GOLDEN, "convergence", "zosa", "summary.json"));
  assert.equal(summary.optimizer, "zosa");
  assert.equal(summary.queriesPerSeed, 400 * 2 * 9);
  assert.ok(summary.meanFinalGap > 0);
});

test("summary with missing fields names them", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const bad = join(dir, "summary.json");
  writeFileSync(bad, JSON.stringify({ config: { optimizer: { kind: "x" } } }));
  assert.throws(() => parseSummary(bad), /mean_final_gap/);
});

test("query-compare figure renders paired bars per optimizer", () => {
  const entries = ["zosa", "fzoo", "zo_rmsprop"].map((kind) =>
    parseSummary(join(GOLDEN, "convergence", kind, "summary.json")),
  );
  const svg = renderQueryCompare(entries);
  const bars = svg.match(/class="bar"/g) ?? [];
  assert.equal(bars.length, 6);
  for (const kind of ["zosa", "fzoo", "zo_rmsprop"]) {
    assert.ok(svg.includes(kind));
  }
});

test("generateFigure writes alignment and query-compare files", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const alignmentOut = join(dir, "alignment.svg");
  generateFigure("alignment_bars", [join(GOLDEN, "alignment")], alignmentOut);
  assert.ok(existsSync(alignmentOut));
  const compareOut = join(dir, "compare.svg");
  generateFigure("query_compare", [join(GOLDEN, "convergence")], compareOut);
  assert.ok(readFileSync(compareOut, "utf8").startsWith("<svg"));
});

test("cli argument parsing", () => {
  const args = parseArgs([
    "convergence", "--in", "a", "b", "--out", "fig.svg", "--title", "t",
  ]);
  assert.deepEqual(args, { kind: "convergence", inputs: ["a", "b"], out: "fig.svg", title: "t" });
  assert.throws(() => parseArgs(["histogram", "--in", "a", "--out", "o"]), /usage/);
  assert.throws(() => parseArgs(["convergence", "--in", "a"]), /--out/);
  assert.throws(() => parseArgs(["convergence", "--in", "a", "--out", "o", "--bogus"]), /unknown/);
});

test("cli main returns 0 on success and 1 on failure", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const out = join(dir, "fig.svg");
  assert.equal(main(["convergence", "--in", join(GOLDEN, "convergence"), "--out", out]), 0);
  assert.ok(existsSync(out));
  assert.equal(main(["convergence", "--in", dir, "--out", join(dir, "missing.svg")]), 1);
  assert.ok(!existsSync(join(dir, "missing.svg")));
});

test("alignment collector ignores sibling non-alignment reports", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const good = readFileSync(join(GOLDEN, "alignment", "alignment_quadratic.json"), "utf8");
  writeFileSync(join(dir, "alignment_quadratic.json"), good);
  writeFileSync(join(dir, "sam_alignment.json"), JSON.stringify({ mean_cos: 0.9 }));
  writeFileSync(join(dir, "sigma_law.json"), JSON.stringify({ empirical: 1 }));
  const out = join(dir, "fig.svg");
  generateFigure("alignment_bars", [dir], out);
  assert.ok(existsSync(out));
});
