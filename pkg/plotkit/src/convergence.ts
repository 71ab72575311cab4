/**
 * Convergence figure: one curve per optimizer, the pointwise mean of the
 * optimality gap across seeds, drawn against iteration with a log10 y-axis.
 */

import {
  PALETTE,
  decadeTicks,
  expLabel,
  line,
  linearScale,
  polyline,
  svgDocument,
  text,
} from "./svg";
import { TraceFile } from "./trace";

/** Gaps at or below zero are floored here before taking logs; the raw trace
 * values are left untouched. */
export const GAP_LOG_FLOOR = 1e-30;

export interface MeanCurve {
  label: string;
  seeds: number;
  points: Array<{ iter: number; meanGap: number }>;
}

/**
 * Group traces by optimizer kind and average the gap column across seeds,
 * iteration by iteration. Only iterations present in every seed of a group
 * are kept, so truncated runs cannot skew the tail of the mean.
 */
export function meanCurves(traces: TraceFile[]): MeanCurve[] {
  const groups = new Map<string, TraceFile[]>();
  for (const trace of traces) {
    const label = trace.config.optimizer.kind;
    const group = groups.get(label) ?? [];
    group.push(trace);
    groups.set(label, group);
  }
  const curves: MeanCurve[] = [];
  for (const label of [...groups.keys()].sort()) {
    const group = groups.get(label)!;
    group.sort((a, b) => (a.path < b.path ? -1 : 1));
    const first = group[0].rows.map((row) => row.iter);
    const shared = first.filter((iter) =>
      group.every((trace) => trace.rows.some((row) => row.iter === iter)),
    );
    const byIter = group.map(
      (trace) => new Map(trace.rows.map((row) => [row.iter, row.gap])),
    );
    const points = shared.map((iter) => {
      let sum = 0;
      for (const rows of byIter) sum += rows.get(iter)!;
      return { iter, meanGap: sum / group.length };
    });
    curves.push({ label, seeds: group.length, points });
  }
  return curves;
}

/** Round-number ticks (1/2/5 times a power of ten) covering [lo, hi]. */
function niceTicks(lo: number, hi: number, maxTicks: number): number[] {
  const span = Math.max(hi - lo, 1);
  const raw = span / maxTicks;
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((k) => k * power).find((s) => span / s <= maxTicks)!;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-9; v += step) {
    ticks.push(Math.round(v));
  }
  return ticks;
}

export function renderConvergence(curves: MeanCurve[], title = "convergence"): string {
  if (curves.length === 0 || curves.every((c) => c.points.length === 0)) {
    throw new Error("convergence figure needs at least one non-empty curve");
  }
  const width = 640;
  const height = 420;
  const margin = { left: 64, right: 24, top: 36, bottom: 44 };

  const logGap = (gap: number): number => Math.log10(Math.max(gap, GAP_LOG_FLOOR));
  let minIter = Infinity;
  let maxIter = -Infinity;
  let minLog = Infinity;
  let maxLog = -Infinity;
  for (const curve of curves) {
    for (const point of curve.points) {
      minIter = Math.min(minIter, point.iter);
      maxIter = Math.max(maxIter, point.iter);
      const value = logGap(point.meanGap);
      minLog = Math.min(minLog, value);
      maxLog = Math.max(maxLog, value);
    }
  }
  if (maxLog - minLog < 1) {
    // pad to a full decade so the log axis always shows real ticks
    minLog = Math.floor(minLog);
    maxLog = minLog + 1;
  }
  const x = linearScale([minIter, maxIter], [margin.left, width - margin.right]);
  const y = linearScale([minLog, maxLog], [height - margin.bottom, margin.top]);

  const body: string[] = [];
  body.push(text(width / 2, 20, title, 'text-anchor="middle" font-size="14"'));
  const axisStyle = 'stroke="#333333" stroke-width="1"';
  body.push(line(margin.left, margin.top, margin.left, height - margin.bottom, axisStyle));
  body.push(
    line(margin.left, height - margin.bottom, width - margin.right, height - margin.bottom, axisStyle),
  );

  for (const exponent of decadeTicks(minLog, maxLog)) {
    const py = y(exponent);
    body.push(line(margin.left - 4, py, margin.left, py, axisStyle));
    body.push(
      line(margin.left, py, width - margin.right, py, 'stroke="#dddddd" stroke-width="0.5"'),
    );
    body.push(text(margin.left - 8, py + 4, expLabel(exponent), 'text-anchor="end"'));
  }
  for (const iter of niceTicks(minIter, maxIter, 6)) {
    const px = x(iter);
    body.push(line(px, height - margin.bottom, px, height - margin.bottom + 4, axisStyle));
    body.push(
      text(px, height - margin.bottom + 18, String(iter), 'text-anchor="middle"'),
    );
  }
  body.push(
    text(width / 2, height - 8, "iteration", 'text-anchor="middle"'),
  );
  body.push(
    text(16, height / 2, "optimality gap (log10)",
      `text-anchor="middle" transform="rotate(-90 16 ${height / 2})"`),
  );

  curves.forEach((curve, index) => {
    const color = PALETTE[index % PALETTE.length];
    body.push(
      polyline(
        curve.points.map((p) => [x(p.iter), y(logGap(p.meanGap))]),
        `stroke="${color}" stroke-width="1.5"`,
      ),
    );
    const legendY = margin.top + 16 * index;
    body.push(line(width - 150, legendY, width - 130, legendY, `stroke="${color}" stroke-width="2"`));
    body.push(text(width - 124, legendY + 4, `${curve.label} (${curve.seeds} seeds)`));
  });

  return svgDocument(width, height, body, 'data-yscale="log10"');
}
