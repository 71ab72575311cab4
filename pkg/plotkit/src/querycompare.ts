/**
 * Query-comparison figure: for each experiment summary, a pair of bars --
 * the mean final gap (log10 scale, left axis) and the optimization queries
 * spent per seed (linear, right axis).
 */

import { readFileSync } from "node:fs";

import {
  decadeTicks,
  expLabel,
  line,
  linearScale,
  rect,
  svgDocument,
  text,
} from "./svg";

export interface SummaryEntry {
  path: string;
  optimizer: string;
  meanFinalGap: number;
  queriesPerSeed: number;
}

export function parseSummary(path: string): SummaryEntry {
  const doc = JSON.parse(readFileSync(path, "utf8")) as Record<string, any>;
  const config = doc.config;
  if (!config || !config.optimizer || typeof config.optimizer.kind !== "string") {
    throw new Error(`${path}: missing field "config.optimizer.kind"`);
  }
  if (typeof doc.mean_final_gap !== "number") {
    throw new Error(`${path}: missing numeric field "mean_final_gap"`);
  }
  if (!Array.isArray(doc.per_seed) || doc.per_seed.length === 0) {
    throw new Error(`${path}: missing field "per_seed"`);
  }
  const queries = Math.max(
    ...doc.per_seed.map((entry: Record<string, unknown>) => Number(entry.total_queries)),
  );
  return {
    path,
    optimizer: config.optimizer.kind,
    meanFinalGap: doc.mean_final_gap,
    queriesPerSeed: queries,
  };
}

const GAP_FLOOR = 1e-30;

export function renderQueryCompare(entries: SummaryEntry[], title = "final gap vs queries"): string {
  if (entries.length === 0) {
    throw new Error("query-compare figure needs at least one summary");
  }
  const width = 640;
  const height = 400;
  const margin = { left: 64, right: 64, top: 56, bottom: 44 };

  const logs = entries.map((e) => Math.log10(Math.max(e.meanFinalGap, GAP_FLOOR)));
  let minLog = Math.floor(Math.min(...logs));
  let maxLog = Math.ceil(Math.max(...logs));
  if (maxLog === minLog) maxLog = minLog + 1;
  const maxQueries = Math.max(...entries.map((e) => e.queriesPerSeed));
  const yGap = linearScale([minLog, maxLog], [height - margin.bottom, margin.top]);
  const yQueries = linearScale([0, maxQueries * 1.05], [height - margin.bottom, margin.top]);

  const body: string[] = [];
  body.push(text(width / 2, 20, title, 'text-anchor="middle" font-size="14"'));
  const axisStyle = 'stroke="#333333" stroke-width="1"';
  body.push(line(margin.left, margin.top, margin.left, height - margin.bottom, axisStyle));
  body.push(
    line(width - margin.right, margin.top, width - margin.right, height - margin.bottom, axisStyle),
  );
  body.push(
    line(margin.left, height - margin.bottom, width - margin.right, height - margin.bottom, axisStyle),
  );
  for (const exponent of decadeTicks(minLog, maxLog)) {
    const py = yGap(exponent);
    body.push(line(margin.left - 4, py, margin.left, py, axisStyle));
    body.push(text(margin.left - 8, py + 4, expLabel(exponent), 'text-anchor="end"'));
  }
  for (let i = 0; i <= 4; i++) {
    const value = (maxQueries * 1.05 * i) / 4;
    const py = yQueries(value);
    body.push(line(width - margin.right, py, width - margin.right + 4, py, axisStyle));
    body.push(text(width - margin.right + 8, py + 4, String(Math.round(value))));
  }
  body.push(
    text(16, height / 2, "mean final gap (log10)",
      `text-anchor="middle" transform="rotate(-90 16 ${height / 2})"`),
  );
  body.push(
    text(width - 12, height / 2, "queries per seed",
      `text-anchor="middle" transform="rotate(90 ${width - 12} ${height / 2})"`),
  );

  const plotWidth = width - margin.left - margin.right;
  const groupWidth = plotWidth / entries.length;
  const barWidth = groupWidth * 0.3;
  const gapColor = "#d8604d";
  const queryColor = "#4063d8";
  entries.forEach((entry, g) => {
    const center = margin.left + g * groupWidth + groupWidth / 2;
    const gapTop = yGap(Math.log10(Math.max(entry.meanFinalGap, GAP_FLOOR)));
    body.push(
      rect(center - barWidth, gapTop, barWidth * 0.92, yGap(minLog) - gapTop,
        `fill="${gapColor}" class="bar"`),
    );
    const queryTop = yQueries(entry.queriesPerSeed);
    body.push(
      rect(center + barWidth * 0.08, queryTop, barWidth * 0.92, yQueries(0) - queryTop,
        `fill="${queryColor}" class="bar"`),
    );
    body.push(
      text(center, height - margin.bottom + 18, entry.optimizer, 'text-anchor="middle"'),
    );
  });

  body.push(rect(margin.left, 30, 10, 10, `fill="${gapColor}"`));
  body.push(text(margin.left + 14, 39, "mean final gap"));
  body.push(rect(margin.left + 150, 30, 10, 10, `fill="${queryColor}"`));
  body.push(text(margin.left + 164, 39, "queries per seed"));

  return svgDocument(width, height, body);
}
