/**
 * Deterministic SVG figures from paired benchmark samples: one latency
 * distribution panel per category (fast vs precise histograms on a log10
 * axis) and one speedup bar chart with a dashed baseline rule at 1.0x.
 * No DOM, no timestamps; identical inputs produce identical bytes.
 */

import { PairedSamples } from "./csv";

const FAST_COLOR = "#2a9d4e";
const PRECISE_COLOR = "#3a6ea5";
const ABOVE_COLOR = "#2a9d4e";
const BELOW_COLOR = "#e07b39";
const BASELINE_COLOR = "#d62828";

const WIDTH = 640;
const HEIGHT = 360;
const MARGIN = { top: 44, right: 20, bottom: 52, left: 60 };

export interface Figure {
  name: string;
  svg: string;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

function linearTicks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

function histogram(values: number[], lo: number, hi: number, bins: number): number[] {
  const counts = new Array<number>(bins).fill(0);
  const span = hi - lo;
  for (const v of values) {
    let b = Math.floor(((v - lo) / span) * bins);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    counts[b]++;
  }
  return counts;
}

/**
 * Histogram panel of fast vs precise latencies for one category.
 */
export function distributionPanel(samples: PairedSamples): Figure {
  const fastLog = samples.fast.map(Math.log10);
  const preciseLog = samples.precise.map(Math.log10);
  let lo = Math.min(...fastLog, ...preciseLog);
  let hi = Math.max(...fastLog, ...preciseLog);
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const bins = 24;
  const fastCounts = histogram(fastLog, lo, hi, bins);
  const preciseCounts = histogram(preciseLog, lo, hi, bins);
  const maxCount = Math.max(...fastCounts, ...preciseCounts, 1);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xOf = (v: number) => MARGIN.left + ((v - lo) / (hi - lo)) * plotW;
  const yOf = (c: number) => MARGIN.top + plotH - (c / maxCount) * plotH;
  const binW = plotW / bins;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">${esc(samples.op)} latency distribution</text>`,
  );
  const seriesList: Array<[number[], string]> = [
    [fastCounts, FAST_COLOR],
    [preciseCounts, PRECISE_COLOR],
  ];
  for (const [counts, color] of seriesList) {
    for (let b = 0; b < bins; b++) {
      if (counts[b] === 0) continue;
      const x = MARGIN.left + b * binW;
      const y = yOf(counts[b]);
      parts.push(
        `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(binW)}" height="${fmt(
          MARGIN.top + plotH - y,
        )}" fill="${color}" fill-opacity="0.55"/>`,
      );
    }
  }
  // axes
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" y2="${MARGIN.top + plotH}" stroke="black"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${MARGIN.top + plotH}" stroke="black"/>`,
  );
  for (const t of linearTicks(lo, hi, 6)) {
    const x = xOf(t);
    parts.push(
      `<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 5}" stroke="black"/>`,
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of linearTicks(0, maxCount, 5)) {
    const y = yOf(t);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="black"/>`,
      `<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">latency (log10 ns)</text>`,
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">count</text>`,
    // legend
    `<rect x="${WIDTH - 150}" y="${MARGIN.top}" width="12" height="12" fill="${FAST_COLOR}" fill-opacity="0.55"/>`,
    `<text x="${WIDTH - 133}" y="${MARGIN.top + 10}" font-family="sans-serif" font-size="12">fast</text>`,
    `<rect x="${WIDTH - 150}" y="${MARGIN.top + 18}" width="12" height="12" fill="${PRECISE_COLOR}" fill-opacity="0.55"/>`,
    `<text x="${WIDTH - 133}" y="${MARGIN.top + 28}" font-family="sans-serif" font-size="12">precise</text>`,
    `</svg>`,
  );
  return { name: `dist_${samples.op}.svg`, svg: parts.join("\n") };
}

/**
 * Bar chart of mean speedups (precise/fast per pair) on a log scale,
 * anchored at the dashed 1.0x baseline; below-baseline bars get a
 * distinct color.
 */
export function speedupChart(speedups: Map<string, number>): Figure {
  const entries = [...speedups.entries()];
  if (entries.length === 0) {
    throw new Error("no categories to chart");
  }
  const values = entries.map(([, v]) => v);
  const logLo = Math.min(Math.log10(Math.min(...values)), -0.1);
  const logHi = Math.max(Math.log10(Math.max(...values)), 0.1);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const yOf = (v: number) =>
    MARGIN.top + plotH - ((Math.log10(v) - logLo) / (logHi - logLo)) * plotH;
  const slotW = plotW / entries.length;
  const barW = slotW * 0.56;
  const baselineY = yOf(1.0);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">Mean speedup (precise / fast)</text>`,
  );
  entries.forEach(([op, v], i) => {
    const x = MARGIN.left + i * slotW + (slotW - barW) / 2;
    const yV = yOf(v);
    const top = Math.min(yV, baselineY);
    const height = Math.max(Math.abs(yV - baselineY), 0.5);
    const color = v >= 1.0 ? ABOVE_COLOR : BELOW_COLOR;
    parts.push(
      `<rect x="${fmt(x)}" y="${fmt(top)}" width="${fmt(barW)}" height="${fmt(height)}" fill="${color}"/>`,
      `<text x="${fmt(x + barW / 2)}" y="${fmt(v >= 1.0 ? top - 6 : top + height + 14)}" text-anchor="middle" font-family="sans-serif" font-size="12">${fmt(v)}x</text>`,
      `<text x="${fmt(x + barW / 2)}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-family="sans-serif" font-size="12">${esc(op)}</text>`,
    );
  });
  parts.push(
    `<line x1="${MARGIN.left}" y1="${fmt(baselineY)}" x2="${MARGIN.left + plotW}" y2="${fmt(baselineY)}" stroke="${BASELINE_COLOR}" stroke-dasharray="6 4" stroke-width="1.5" class="baseline"/>`,
    `<text x="${MARGIN.left + plotW - 4}" y="${fmt(baselineY - 6)}" text-anchor="end" font-family="sans-serif" font-size="11" fill="${BASELINE_COLOR}">1.0x baseline</text>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${MARGIN.top + plotH}" stroke="black"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" y2="${MARGIN.top + plotH}" stroke="black"/>`,
    `</svg>`,
  );
  return { name: "speedup.svg", svg: parts.join("\n") };
}

export interface FigureSet {
  figures: Figure[];
  warnings: string[];
}

/** All figures for a run: one panel per category plus the speedup chart. */
export function buildFigures(
  paired: Map<string, PairedSamples>,
  speedups: Map<string, number>,
): FigureSet {
  const figures: Figure[] = [];
  const warnings: string[] = [];
  for (const [op, samples] of paired) {
    if (samples.fast.length === 0) {
      warnings.push(`category '${op}' has no paired samples; panel omitted`);
      continue;
    }
    figures.push(distributionPanel(samples));
  }
  figures.push(speedupChart(speedups));
  return { figures, warnings };
}
