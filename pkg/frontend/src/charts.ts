/** Dependency-free inline-SVG line charts.
 *
 * Charts are pure string builders over already-computed series, so they
 * are unit-testable without a DOM and never transform the data beyond
 * pixel mapping.
 */

import type { ChartSeries } from "./state.js";

export interface ChartOptions {
  width?: number;
  height?: number;
  padding?: number;
  /** Horizontal reference line drawn at this y value, if given. */
  referenceY?: number;
  yMin?: number;
  yMax?: number;
  title?: string;
  color?: string;
}

export interface Scale {
  x: (t: number) => number;
  y: (v: number) => number;
}

export function makeScale(
  series: ChartSeries,
  width: number,
  height: number,
  padding: number,
  yMin: number,
  yMax: number,
): Scale {
  const tMin = series.ts.length ? Math.min(...series.ts) : 0;
  const tMax = series.ts.length ? Math.max(...series.ts) : 1;
  const tSpan = Math.max(tMax - tMin, 1);
  const ySpan = Math.max(yMax - yMin, 1e-12);
  const innerW = width - 2 * padding;
  const innerH = height - 2 * padding;
  return {
    x: (t) => padding + ((t - tMin) / tSpan) * innerW,
    y: (v) => padding + (1 - (v - yMin) / ySpan) * innerH,
  };
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}

/** Build the SVG path "d" attribute for a series under a scale. */
export function pathFor(series: ChartSeries, scale: Scale): string {
  return series.ts
    .map((t, i) => {
      const cmd = i === 0 ? "M" : "L";
      const v = series.values[i] ?? 0;
      return `${cmd}${round2(scale.x(t))},${round2(scale.y(v))}`;
    })
    .join(" ");
}

/** Render a complete inline-SVG line chart as an HTML string. */
export function lineChartSvg(
  series: ChartSeries,
  opts: ChartOptions = {},
): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 200;
  const padding = opts.padding ?? 24;
  const color = opts.color ?? "#1a6fb0";

  let yMin = opts.yMin ?? (series.values.length ? Math.min(...series.values) : 0);
  let yMax = opts.yMax ?? (series.values.length ? Math.max(...series.values) : 1);
  if (opts.referenceY !== undefined) {
    yMin = Math.min(yMin, opts.referenceY);
    yMax = Math.max(yMax, opts.referenceY);
  }
  if (yMax - yMin < 1e-9) {
    yMin -= 0.5;
    yMax += 0.5;
  }

  const scale = makeScale(series, width, height, padding, yMin, yMax);
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${width} ${height}" width="${width}" ` +
      `height="${height}" role="img">`,
  );
  if (opts.title) {
    parts.push(
      `<text x="${padding}" y="14" font-size="12" fill="#333">` +
        `${escapeXml(opts.title)}</text>`,
    );
  }
  // Axis frame.
  parts.push(
    `<rect x="${padding}" y="${padding}" width="${width - 2 * padding}" ` +
      `height="${height - 2 * padding}" fill="none" stroke="#ccc"/>`,
  );
  // Y-axis extent labels.
  parts.push(
    `<text x="2" y="${padding + 4}" font-size="10" fill="#666">` +
      `${round2(yMax)}</text>`,
    `<text x="2" y="${height - padding}" font-size="10" fill="#666">` +
      `${round2(yMin)}</text>`,
  );
  if (opts.referenceY !== undefined) {
    const ry = round2(scale.y(opts.referenceY));
    parts.push(
      `<line x1="${padding}" y1="${ry}" x2="${width - padding}" y2="${ry}" ` +
        `stroke="#999" stroke-dasharray="4 3" class="reference-line"/>`,
    );
  }
  if (series.ts.length > 0) {
    parts.push(
      `<path d="${pathFor(series, scale)}" fill="none" stroke="${color}" ` +
        `stroke-width="1.5"/>`,
    );
  } else {
    parts.push(
      `<text x="${width / 2}" y="${height / 2}" font-size="12" ` +
        `fill="#999" text-anchor="middle">no data yet</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Chart of the randomization weight with the 0.5 balance line. */
export function weightChart(series: ChartSeries): string {
  return lineChartSvg(series, {
    title: "Randomization weight wA by patient",
    referenceY: 0.5,
    yMin: 0,
    yMax: 1,
  });
}

/** Chart of log10 BF with the decision threshold line at log10(0.01). */
export function bfChart(series: ChartSeries, threshold = 0.01): string {
  return lineChartSvg(series, {
    title: "log10 Bayes factor by patient",
    referenceY: Math.log10(threshold),
    color: "#b0341a",
  });
}
