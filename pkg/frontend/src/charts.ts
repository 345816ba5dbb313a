// SVG time-series charts rendered straight from API payloads.
// The client only scales coordinates; every plotted number is a payload
// field (standardization, smoothing and trimming all happen server-side,
// toggled through API parameters).

import type { ExtractionSeries, IndicatorSeries, TermFrequencySeries } from "./api.js";

export interface ChartGeometry {
  width: number;
  height: number;
  padding: number;
}

export const defaultGeometry: ChartGeometry = { width: 640, height: 240, padding: 36 };

export interface ChartDatum {
  period: string;
  value: number;
}

export function scaleLinear(domain: [number, number], range: [number, number]) {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function linePath(data: ChartDatum[], geometry: ChartGeometry = defaultGeometry): string {
  if (!data.length) return "";
  const values = data.map((d) => d.value);
  const y = scaleLinear(
    [Math.min(...values), Math.max(...values)],
    [geometry.height - geometry.padding, geometry.padding],
  );
  const x = scaleLinear(
    [0, Math.max(data.length - 1, 1)],
    [geometry.padding, geometry.width - geometry.padding],
  );
  return data
    .map((d, i) => `${i === 0 ? "M" : "L"}${x(i).toFixed(2)},${y(d.value).toFixed(2)}`)
    .join(" ");
}

function svg(inner: string, title: string, geometry: ChartGeometry): string {
  return (
    `<svg viewBox="0 0 ${geometry.width} ${geometry.height}" role="img" aria-label="${title}">` +
    `<title>${title}</title>${inner}</svg>`
  );
}

function axisLabels(data: ChartDatum[], geometry: ChartGeometry): string {
  if (!data.length) return "";
  const first = data[0]!.period;
  const last = data[data.length - 1]!.period;
  return (
    `<text x="${geometry.padding}" y="${geometry.height - 8}" class="axis">${first}</text>` +
    `<text x="${geometry.width - geometry.padding}" y="${geometry.height - 8}" text-anchor="end" class="axis">${last}</text>`
  );
}

export function emptyState(title: string): string {
  return `<div class="chart empty-series">${title}: no data in range</div>`;
}

export function indicatorChart(series: IndicatorSeries, geometry: ChartGeometry = defaultGeometry): string {
  const data = series.points.map((p) => ({ period: p.period, value: p.value }));
  if (!data.length) return emptyState(series.name);
  const suffix = series.standardized ? " (standardised)" : "";
  const inner = `<path d="${linePath(data, geometry)}" fill="none" class="line"/>` + axisLabels(data, geometry);
  return svg(inner, `${series.name}${suffix}`, geometry);
}

export function termFrequencyChart(series: TermFrequencySeries, geometry: ChartGeometry = defaultGeometry): string {
  const data = series.points.map((p) => ({ period: p.period, value: p.share }));
  if (!data.length) return emptyState(`term frequency: ${series.terms.join(", ")}`);
  const inner = `<path d="${linePath(data, geometry)}" fill="none" class="line"/>` + axisLabels(data, geometry);
  return svg(inner, `Share of total words: ${series.terms.join(", ")}`, geometry);
}

export function extractionChart(series: ExtractionSeries, geometry: ChartGeometry = defaultGeometry): string {
  const data = series.points.map((p) => ({ period: p.period, value: p.mean }));
  if (!data.length) return emptyState(`${series.variable} extractions`);
  const inner = `<path d="${linePath(data, geometry)}" fill="none" class="line"/>` + axisLabels(data, geometry);
  const title =
    `${series.variable} growth, firm-reported mean ` +
    `(per-year trim ${series.trim[0]}th-${series.trim[1]}th percentile)`;
  return svg(inner, title, geometry);
}

/** The y-coordinates a chart plots, recovered from the payload (used by
 * contract tests to prove no client-side statistic is recomputed). */
export function plottedValues(payload: IndicatorSeries | TermFrequencySeries | ExtractionSeries): number[] {
  if ("terms" in payload) return payload.points.map((p) => p.share);
  if ("variable" in payload) return payload.points.map((p) => p.mean);
  return payload.points.map((p) => p.value);
}
