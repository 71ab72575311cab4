import assert from "node:assert/strict";
import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { GAP_LOG_FLOOR, meanCurves, renderConvergence } from "../src/convergence";
import { generateFigure } from "../src/cli";
import { loadTraces } from "../src/trace";

const GOLDEN = join(__dirname, "..", "..", "testdata", "golden");
const CONVERGENCE = join(GOLDEN, "convergence");

// hand-computed from the golden zosa traces: (gap_seed1 + gap_seed2 +
// gap_seed3) / 3 at five sampled iterations
const HAND_MEANS: Array<[number, number]> = [
  [1, 12.157667506037676],
  [100, 7.9436618427997],
  [200, 4.5772525122815315],
  [300, 2.271931739222249],
  [400, 0.8857507541619084],
];

test("three-seed mean matches hand-computed averages at sampled points", () => {
  const curves = meanCurves(loadTraces([join(CONVERGENCE, "zosa")]));
  assert.equal(curves.length, 1);
  assert.equal(curves[0].label, "zosa");
  assert.equal(curves[0].seeds, 3);
  const byIter = new Map(curves[0].points.map((p) => [p.iter, p.meanGap]));
  for (const [iter, expected] of HAND_MEANS) {
    const actual = byIter.get(iter);
    assert.ok(actual !== undefined, `iteration ${iter} missing from mean curve`);
    assert.ok(
      Math.abs(actual! - expected) <= 1e-12,
      `iter ${iter}: ${actual} != ${expected}`,
    );
  }
});

test("renders the golden directory with a log-scale y axis", () => {
  const svg = renderConvergence(meanCurves(loadTraces([CONVERGENCE])));
  assert.ok(svg.startsWith("<svg"));
  assert.match(svg, /data-yscale="log10"/);
  assert.match(svg, /log10/); // axis label
  const ticks = svg.match(/>1e-?\d+</g) ?? [];
  assert.ok(ticks.length >= 2, `expected decade tick labels, got ${ticks.length}`);
  const polylines = svg.match(/<polyline/g) ?? [];
  assert.equal(polylines.length, 3); // zosa, fzoo, zo_rmsprop
  for (const label of ["zosa", "fzoo", "zo_rmsprop"]) {
    assert.ok(svg.includes(label), `legend must name ${label}`);
  }
});

test("generateFigure writes the convergence file", () => {
  const out = join(mkdtempSync(join(tmpdir(), "plotkit-")), "convergence.svg");
  generateFigure("convergence", [CONVERGENCE], out);
  assert.ok(existsSync(out));
  assert.ok(readFileSync(out, "utf8").startsWith("<svg"));
});

test("identical inputs produce byte-identical figures", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
  const a = join(dir, "a.svg");
  const b = join(dir, "b.svg");
  generateFigure("convergence", [CONVERGENCE], a);
  generateFigure("convergence", [CONVERGENCE], b);
  assert.equal(readFileSync(a, "utf8"), readFileSync(b, "utf8"));
});

test("empty input directory fails without creating the output file", () => {
  const dir = mkdtempSync(join(tmpdir(), "plotkit-empty-"));
  const out = join(dir, "fig.svg");
  assert.throws(() => generateFigure("convergence", [dir], out));
  assert.ok(!existsSync(out));
});

test("non-positive gaps are floored before the log transform", () => {
  const curves = [
    {
      label: "x",
      seeds: 1,
      points: [
        { iter: 1, meanGap: 1.0 },
        { iter: 2, meanGap: 0.0 },
      ],
    },
  ];
  const svg = renderConvergence(curves);
  assert.ok(svg.includes(`1e${Math.log10(GAP_LOG_FLOOR)}`));
});
