/**
 * Wilcoxon signed-rank test for paired samples.
 *
 * Two-sided test on the differences x[i] - y[i]. Zero differences are
 * dropped; tied magnitudes receive midranks. For n <= 25 the p-value
 * comes from the exact permutation distribution of the positive-rank sum
 * (midranks doubled to integers, so ties stay exact); above that, a
 * normal approximation with tie correction and continuity correction.
 */

import { normalUpperTail } from "./normal";

export const EXACT_LIMIT = 25;

export interface WilcoxonResult {
  /** pairs remaining after zero-differences were dropped */
  n: number;
  /** min(W+, W-), the conventional table statistic */
  statistic: number;
  /** sum of ranks of positive differences */
  wPlus: number;
  /** two-sided p-value; null when the test is degenerate */
  pValue: number | null;
  method: "exact" | "normal" | "degenerate";
  zerosDropped: number;
  significant: boolean;
}

/** Midranks of the values (average rank across ties), 1-based. */
export function midranks(values: number[]): number[] {
  const order = values.map((_, i) => i).sort((a, b) => values[a] - values[b]);
  const ranks = new Array<number>(values.length);
  let i = 0;
  while (i < values.length) {
    let j = i;
    while (j + 1 < values.length && values[order[j + 1]] === values[order[i]]) {
      j++;
    }
    const rank = (i + j) / 2 + 1;
    for (let k = i; k <= j; k++) {
      ranks[order[k]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

/**
 * Exact two-sided p-value for the positive-rank sum via subset-sum
 * counting over the observed (doubled) ranks. Counts stay below 2^25,
 * exactly representable in doubles.
 */
function exactPValue(doubledRanks: number[], doubledWPlus: number): number {
  const total = doubledRanks.reduce((s, r) => s + r, 0);
  const counts = new Float64Array(total + 1);
  counts[0] = 1;
  for (const r of doubledRanks) {
    for (let s = total - r; s >= 0; s--) {
      if (counts[s] > 0) {
        counts[s + r] += counts[s];
      }
    }
  }
  const all = Math.pow(2, doubledRanks.length);
  let cdf = 0;
  for (let s = 0; s <= doubledWPlus; s++) cdf += counts[s];
  let sf = 0;
  for (let s = doubledWPlus; s <= total; s++) sf += counts[s];
  return Math.min(1, (2 * Math.min(cdf, sf)) / all);
}

export function wilcoxonSignedRank(
  x: number[],
  y: number[],
  alpha = 0.05,
): WilcoxonResult {
  if (x.length !== y.length) {
    throw new Error(
      `paired samples must have equal length (${x.length} vs ${y.length})`,
    );
  }
  const diffs = x.map((v, i) => v - y[i]).filter((d) => d !== 0);
  const zerosDropped = x.length - diffs.length;
  if (diffs.length === 0) {
    return {
      n: 0,
      statistic: 0,
      wPlus: 0,
      pValue: null,
      method: "degenerate",
      zerosDropped,
      significant: false,
    };
  }
  const n = diffs.length;
  if (n < 6) {
    throw new Error(`need at least 6 nonzero differences, got ${n}`);
  }
  const ranks = midranks(diffs.map(Math.abs));
  let wPlus = 0;
  for (let i = 0; i < n; i++) {
    if (diffs[i] > 0) wPlus += ranks[i];
  }
  const wMinus = (n * (n + 1)) / 2 - wPlus;
  const statistic = Math.min(wPlus, wMinus);

  let pValue: number;
  let method: "exact" | "normal";
  if (n <= EXACT_LIMIT) {
    method = "exact";
    pValue = exactPValue(
      ranks.map((r) => Math.round(2 * r)),
      Math.round(2 * wPlus),
    );
  } else {
    method = "normal";
    const mu = (n * (n + 1)) / 4;
    const tieGroups = new Map<number, number>();
    for (const r of ranks) {
      tieGroups.set(r, (tieGroups.get(r) ?? 0) + 1);
    }
    let tieCorrection = 0;
    for (const t of tieGroups.values()) {
      tieCorrection += t * t * t - t;
    }
    const sigma = Math.sqrt(
      (n * (n + 1) * (2 * n + 1)) / 24 - tieCorrection / 48,
    );
    const diff = wPlus - mu;
    const cc = diff > 0 ? 0.5 : diff < 0 ? -0.5 : 0;
    const z = (diff - cc) / sigma;
    pValue = Math.min(1, 2 * normalUpperTail(Math.abs(z)));
  }
  return {
    n,
    statistic,
    wPlus,
    pValue,
    method,
    zerosDropped,
    significant: pValue <= alpha,
  };
}
