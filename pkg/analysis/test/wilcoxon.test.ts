import { describe, expect, test } from "vitest";

import { midranks, wilcoxonSignedRank } from "../src/wilcoxon";
import { Lcg } from "./util";

/**
 * Pairs whose positive-rank sum is exactly wPlus: magnitudes 1..n give
 * ranks 1..n; signs chosen greedily from the largest rank down.
 */
function pairsForStatistic(n: number, wPlus: number): [number[], number[]] {
  const signs = new Array<number>(n).fill(-1);
  let remaining = wPlus;
  for (let r = n; r >= 1; r--) {
    if (remaining >= r) {
      signs[r - 1] = 1;
      remaining -= r;
    }
  }
  const x = signs.map((s, i) => s * (i + 1));
  return [x, new Array<number>(n).fill(0)];
}

describe("midranks", () => {
  test("ties get the average rank", () => {
    expect(midranks([10, 20, 20, 30])).toEqual([1, 2.5, 2.5, 4]);
    expect(midranks([5, 5, 5])).toEqual([2, 2, 2]);
  });
});

describe("wilcoxonSignedRank exact distribution", () => {
  // published two-sided critical values at alpha = 0.05: 8 at n=10, 52 at n=20;
  // p-values cross-checked against scipy.stats.wilcoxon(mode="exact")
  test("n=10 critical value 8", () => {
    const [x, y] = pairsForStatistic(10, 8);
    const result = wilcoxonSignedRank(x, y);
    expect(result.method).toBe("exact");
    expect(result.statistic).toBe(8);
    expect(result.pValue).toBe(0.048828125);
    expect(result.significant).toBe(true);
  });

  test("n=10 statistic 9 is not significant", () => {
    const [x, y] = pairsForStatistic(10, 9);
    const result = wilcoxonSignedRank(x, y);
    expect(result.pValue).toBe(0.064453125);
    expect(result.significant).toBe(false);
  });

  test("n=20 critical value 52", () => {
    const [x, y] = pairsForStatistic(20, 52);
    const result = wilcoxonSignedRank(x, y);
    expect(result.statistic).toBe(52);
    expect(result.pValue).toBe(0.04844093322753906);
    expect(result.significant).toBe(true);
  });

  test("n=20 statistic 53 is not significant", () => {
    const [x, y] = pairsForStatistic(20, 53);
    const result = wilcoxonSignedRank(x, y);
    expect(result.pValue).toBe(0.05316925048828125);
    expect(result.significant).toBe(false);
  });

  test("sign-symmetric differences are insignificant", () => {
    const x = [1, -1, 2, -2, 3, -3, 4, -4];
    const y = new Array<number>(8).fill(0);
    const result = wilcoxonSignedRank(x, y);
    expect(result.pValue).not.toBeNull();
    expect(result.pValue!).toBeGreaterThanOrEqual(0.5);
    expect(result.pValue!).toBeLessThanOrEqual(1.0);
  });

  test("tied magnitudes stay exact and in range", () => {
    const x = [1, 1, 2, 2, 3, 3, -1, -2];
    const y = new Array<number>(8).fill(0);
    const result = wilcoxonSignedRank(x, y);
    expect(result.method).toBe("exact");
    expect(result.pValue!).toBeGreaterThan(0);
    expect(result.pValue!).toBeLessThanOrEqual(1);
  });
});

describe("wilcoxonSignedRank normal approximation", () => {
  test("constant positive shift of 10x noise scale, n=50", () => {
    const lcg = new Lcg(7);
    const fast: number[] = [];
    const precise: number[] = [];
    for (let i = 0; i < 50; i++) {
      const base = 100 + lcg.uniform(-1, 1);
      fast.push(base);
      precise.push(base + 10 + lcg.uniform(-1, 1));
    }
    const result = wilcoxonSignedRank(precise, fast);
    expect(result.method).toBe("normal");
    expect(result.pValue!).toBeLessThan(1e-4);
    expect(result.significant).toBe(true);
  });

  test("no real shift stays insignificant", () => {
    const lcg = new Lcg(3);
    const a: number[] = [];
    const b: number[] = [];
    for (let i = 0; i < 80; i++) {
      const base = 50 + lcg.uniform(-5, 5);
      a.push(base + lcg.uniform(-1, 1));
      b.push(base + lcg.uniform(-1, 1));
    }
    const result = wilcoxonSignedRank(a, b);
    expect(result.pValue!).toBeGreaterThan(0.05);
  });
});

describe("wilcoxonSignedRank edge cases", () => {
  test("identical vectors are degenerate", () => {
    const v = [5, 6, 7, 8, 9, 10];
    const result = wilcoxonSignedRank(v, v);
    expect(result.method).toBe("degenerate");
    expect(result.pValue).toBeNull();
    expect(result.zerosDropped).toBe(6);
    expect(result.significant).toBe(false);
  });

  test("zero differences are dropped before ranking", () => {
    const x = [1, 2, 3, 4, 5, 6, 7, 10, 10];
    const y = [0, 0, 0, 0, 0, 0, 0, 10, 10];
    const result = wilcoxonSignedRank(x, y);
    expect(result.zerosDropped).toBe(2);
    expect(result.n).toBe(7);
  });

  test("too few nonzero differences rejected", () => {
    expect(() => wilcoxonSignedRank([1, 2, 3, 0, 0, 0], [0, 0, 0, 0, 0, 0])).toThrow();
  });

  test("length mismatch rejected", () => {
    expect(() => wilcoxonSignedRank([1, 2, 3], [1, 2])).toThrow();
  });
});
