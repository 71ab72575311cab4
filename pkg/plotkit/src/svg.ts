/**
 * Minimal deterministic SVG assembly: no timestamps, no randomness, so the
 * same inputs always produce byte-identical figures.
 */

export const PALETTE = [
  "#4063d8",
  "#d8604d",
  "#3f9b6e",
  "#9558b2",
  "#c98a1c",
  "#4a8fa8",
];

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  return scale;
}

export function fmt(value: number): string {
  return Number(value.toPrecision(6)).toString();
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs = "",
): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" ${attrs}>${esc(content)}</text>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: string): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${attrs}/>`;
}

export function rect(x: number, y: number, w: number, h: number, attrs: string): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ${attrs}/>`;
}

export function polyline(points: Array<[number, number]>, attrs: string): string {
  const joined = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${joined}" fill="none" ${attrs}/>`;
}

export function svgDocument(
  width: number,
  height: number,
  body: string[],
  rootAttrs = "",
): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12" ${rootAttrs}>`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}

/** Integer powers of ten covering [lo, hi] in log10 units, thinned to at
 * most `maxTicks` entries. */
export function decadeTicks(lo: number, hi: number, maxTicks = 8): number[] {
  let start = Math.ceil(lo - 1e-9);
  let stop = Math.floor(hi + 1e-9);
  if (stop < start) {
    start = Math.floor(lo);
    stop = Math.ceil(hi);
  }
  const all: number[] = [];
  for (let e = start; e <= stop; e++) all.push(e);
  const stride = Math.max(1, Math.ceil(all.length / maxTicks));
  return all.filter((_, i) => i % stride === 0);
}

export function expLabel(exponent: number): string {
  return `1e${exponent}`;
}
