/**
 * Alignment figure: grouped bars of the mean/max cosine similarity between
 * gradient estimates and true gradients, one group per benchmark function,
 * with the closed-form prediction drawn as a dashed marker.
 */

import { readFileSync } from "node:fs";

import { PALETTE, line, linearScale, rect, svgDocument, text } from "./svg";

export interface AlignmentReport {
  path: string;
  functionName: string;
  baseMean: number;
  baseMax: number;
  perturbedMean: number;
  perturbedMax: number;
  predicted: number;
}

const REQUIRED_FIELDS = [
  "base_mean_cos",
  "base_max_cos",
  "perturbed_mean_cos",
  "perturbed_max_cos",
  "predicted_cos",
] as const;

export function parseAlignmentReport(path: string): AlignmentReport {
  const doc = JSON.parse(readFileSync(path, "utf8")) as Record<string, unknown>;
  for (const field of REQUIRED_FIELDS) {
    if (typeof doc[field] !== "number") {
      throw new Error(`${path}: missing numeric field "${field}"`);
    }
  }
  const params = (doc.params ?? {}) as Record<string, unknown>;
  return {
    path,
    functionName: typeof params.function === "string" ? params.function : path,
    baseMean: doc.base_mean_cos as number,
    baseMax: doc.base_max_cos as number,
    perturbedMean: doc.perturbed_mean_cos as number,
    perturbedMax: doc.perturbed_max_cos as number,
    predicted: doc.predicted_cos as number,
  };
}

const SERIES: Array<{ name: string; pick: (r: AlignmentReport) => number }> = [
  { name: "estimate avg", pick: (r) => r.baseMean },
  { name: "estimate max", pick: (r) => r.baseMax },
  { name: "perturbed avg", pick: (r) => r.perturbedMean },
  { name: "perturbed max", pick: (r) => r.perturbedMax },
];

export function renderAlignment(reports: AlignmentReport[], title = "gradient alignment"): string {
  if (reports.length === 0) {
    throw new Error("alignment figure needs at least one report");
  }
  const width = 640;
  const height = 400;
  const margin = { left: 56, right: 24, top: 56, bottom: 44 };
  const y = linearScale([0, 1.05], [height - margin.bottom, margin.top]);

  const plotWidth = width - margin.left - margin.right;
  const groupWidth = plotWidth / reports.length;
  const barWidth = (groupWidth * 0.72) / SERIES.length;

  const body: string[] = [];
  body.push(text(width / 2, 20, title, 'text-anchor="middle" font-size="14"'));
  const axisStyle = 'stroke="#333333" stroke-width="1"';
  body.push(line(margin.left, margin.top, margin.left, height - margin.bottom, axisStyle));
  body.push(
    line(margin.left, height - margin.bottom, width - margin.right, height - margin.bottom, axisStyle),
  );
  for (let tick = 0; tick <= 1.0001; tick += 0.25) {
    const py = y(tick);
    body.push(line(margin.left - 4, py, margin.left, py, axisStyle));
    body.push(text(margin.left - 8, py + 4, tick.toFixed(2), 'text-anchor="end"'));
  }
  body.push(
    text(16, height / 2, "cosine similarity",
      `text-anchor="middle" transform="rotate(-90 16 ${height / 2})"`),
  );

  reports.forEach((report, g) => {
    const groupLeft = margin.left + g * groupWidth + groupWidth * 0.14;
    SERIES.forEach((series, s) => {
      const value = series.pick(report);
      const px = groupLeft + s * barWidth;
      body.push(
        rect(px, y(value), barWidth * 0.9, y(0) - y(value),
          `fill="${PALETTE[s]}" class="bar"`),
      );
    });
    // closed-form prediction marker across the group
    const py = y(report.predicted);
    body.push(
      line(groupLeft, py, groupLeft + SERIES.length * barWidth, py,
        'stroke="#222222" stroke-width="1" stroke-dasharray="4 3"'),
    );
    body.push(
      text(margin.left + g * groupWidth + groupWidth / 2, height - margin.bottom + 18,
        report.functionName, 'text-anchor="middle"'),
    );
  });

  SERIES.forEach((series, s) => {
    const lx = margin.left + s * 140;
    body.push(rect(lx, 30, 10, 10, `fill="${PALETTE[s]}"`));
    body.push(text(lx + 14, 39, series.name));
  });

  return svgDocument(width, height, body);
}
