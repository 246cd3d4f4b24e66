/**
 * Assembles category statistics, significance tests, and figure links
 * into a Markdown report plus a machine-readable stats object. Output is
 * a pure function of the input rows.
 */

import { BenchRow, PairedSamples, pairedSamples } from "./csv";
import { buildFigures, FigureSet } from "./figures";
import { shapiroWilk, ShapiroResult } from "./shapiro";
import { wilcoxonSignedRank, WilcoxonResult } from "./wilcoxon";

export interface CategoryStats {
  op: string;
  pairs: number;
  fastMedianNs: number;
  preciseMedianNs: number;
  meanSpeedup: number;
  wilcoxon: WilcoxonResult;
  normalityFast: ShapiroResult | null;
  normalityPrecise: ShapiroResult | null;
}

export interface AnalysisResult {
  categories: CategoryStats[];
  figures: FigureSet;
}

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length >> 1;
  return sorted.length % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

function mean(values: number[]): number {
  return values.reduce((s, v) => s + v, 0) / values.length;
}

function tryShapiro(samples: number[]): ShapiroResult | null {
  if (samples.length < 3 || samples.length > 5000) return null;
  return shapiroWilk(samples);
}

export function analyze(rows: BenchRow[]): AnalysisResult {
  const paired = pairedSamples(rows);
  const categories: CategoryStats[] = [];
  const speedups = new Map<string, number>();
  for (const [op, samples] of paired) {
    const ratios = samples.fast.map((f, i) => samples.precise[i] / f);
    const meanSpeedup = mean(ratios);
    speedups.set(op, meanSpeedup);
    categories.push({
      op,
      pairs: samples.fast.length,
      fastMedianNs: median(samples.fast),
      preciseMedianNs: median(samples.precise),
      meanSpeedup,
      wilcoxon: wilcoxonSignedRank(samples.precise, samples.fast),
      normalityFast: tryShapiro(samples.fast),
      normalityPrecise: tryShapiro(samples.precise),
    });
  }
  return { categories, figures: buildFigures(paired, speedups) };
}

function fmtP(p: number | null): string {
  if (p === null) return "degenerate";
  if (p === 0) return "< 1e-300";
  return p < 1e-4 ? p.toExponential(2) : p.toFixed(4);
}

function fmtNormality(r: ShapiroResult | null): string {
  if (r === null) return "n/a";
  if (r.verdict === "constant") return "constant";
  return `${r.verdict} (p=${fmtP(r.pValue)})`;
}

export function renderMarkdown(result: AnalysisResult, source: string): string {
  const lines: string[] = [];
  lines.push("# Benchmark analysis");
  lines.push("");
  lines.push(`Source: \`${source}\``);
  lines.push("");
  lines.push(
    "| op | pairs | fast median (ns) | precise median (ns) | mean speedup | Wilcoxon p | normality (fast) | normality (precise) |",
  );
  lines.push("|---|---|---|---|---|---|---|---|");
  for (const c of result.categories) {
    lines.push(
      `| ${c.op} | ${c.pairs} | ${c.fastMedianNs.toFixed(1)} | ` +
        `${c.preciseMedianNs.toFixed(1)} | ${c.meanSpeedup.toFixed(3)}x | ` +
        `${fmtP(c.wilcoxon.pValue)} (${c.wilcoxon.method}) | ` +
        `${fmtNormality(c.normalityFast)} | ${fmtNormality(c.normalityPrecise)} |`,
    );
  }
  lines.push("");
  lines.push("## Figures");
  lines.push("");
  for (const figure of result.figures.figures) {
    lines.push(`![${figure.name}](figures/${figure.name})`);
    lines.push("");
  }
  if (result.figures.warnings.length > 0) {
    lines.push("## Warnings");
    lines.push("");
    for (const warning of result.figures.warnings) {
      lines.push(`- ${warning}`);
    }
    lines.push("");
  }
  return lines.join("\n");
}

export function statsJson(result: AnalysisResult): string {
  const payload = result.categories.map((c) => ({
    op: c.op,
    pairs: c.pairs,
    fast_median_ns: c.fastMedianNs,
    precise_median_ns: c.preciseMedianNs,
    mean_speedup: c.meanSpeedup,
    wilcoxon: {
      statistic: c.wilcoxon.statistic,
      w_plus: c.wilcoxon.wPlus,
      p_value: c.wilcoxon.pValue,
      method: c.wilcoxon.method,
      n: c.wilcoxon.n,
      zeros_dropped: c.wilcoxon.zerosDropped,
    },
    normality_fast: c.normalityFast && {
      W: c.normalityFast.W,
      p_value: c.normalityFast.pValue,
      verdict: c.normalityFast.verdict,
    },
    normality_precise: c.normalityPrecise && {
      W: c.normalityPrecise.W,
      p_value: c.normalityPrecise.pValue,
      verdict: c.normalityPrecise.verdict,
    },
  }));
  return JSON.stringify({ categories: payload }, null, 2) + "\n";
}
