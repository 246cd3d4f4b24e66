/**
 * Shapiro-Wilk normality screen (Royston's AS R94 approximation).
 *
 * Valid for 3 <= n <= 5000. Constant data cannot be tested and gets its
 * own verdict instead of a p-value.
 */

import { inverseNormalCdf, normalUpperTail } from "./normal";

export type NormalityVerdict = "gaussian" | "non-gaussian" | "constant";

export interface ShapiroResult {
  n: number;
  W: number | null;
  pValue: number | null;
  verdict: NormalityVerdict;
}

// polynomial coefficients for the two extreme weights, ascending powers of 1/sqrt(n)
const C1 = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2 = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];

function poly(coeffs: number[], x: number): number {
  let s = 0;
  for (let i = coeffs.length - 1; i >= 0; i--) {
    s = s * x + coeffs[i];
  }
  return s;
}

export function shapiroWilk(samples: number[], alpha = 0.05): ShapiroResult {
  const n = samples.length;
  if (n < 3 || n > 5000) {
    throw new Error(`sample size must be in [3, 5000], got ${n}`);
  }
  const y = [...samples].sort((a, b) => a - b);
  if (y[n - 1] - y[0] < 1e-19) {
    return { n, W: null, pValue: null, verdict: "constant" };
  }

  // Blom scores and the weight vector
  const m = new Array<number>(n);
  let ssqM = 0;
  for (let i = 0; i < n; i++) {
    m[i] = inverseNormalCdf((i + 1 - 0.375) / (n + 0.25));
    ssqM += m[i] * m[i];
  }
  const a = new Array<number>(n).fill(0);
  if (n === 3) {
    a[0] = -Math.SQRT1_2;
    a[2] = Math.SQRT1_2;
  } else {
    const rsn = 1 / Math.sqrt(n);
    const aN = m[n - 1] / Math.sqrt(ssqM) + poly(C1, rsn);
    if (n > 5) {
      const aN1 = m[n - 2] / Math.sqrt(ssqM) + poly(C2, rsn);
      const phi =
        (ssqM - 2 * m[n - 1] ** 2 - 2 * m[n - 2] ** 2) /
        (1 - 2 * aN ** 2 - 2 * aN1 ** 2);
      const sphi = Math.sqrt(phi);
      for (let i = 2; i < n - 2; i++) {
        a[i] = m[i] / sphi;
      }
      a[n - 1] = aN;
      a[n - 2] = aN1;
      a[0] = -aN;
      a[1] = -aN1;
    } else {
      const phi = (ssqM - 2 * m[n - 1] ** 2) / (1 - 2 * aN ** 2);
      const sphi = Math.sqrt(phi);
      for (let i = 1; i < n - 1; i++) {
        a[i] = m[i] / sphi;
      }
      a[n - 1] = aN;
      a[0] = -aN;
    }
  }

  const mean = y.reduce((s, v) => s + v, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += a[i] * y[i];
    den += (y[i] - mean) ** 2;
  }
  const W = (num * num) / den;

  // p-value transforms (three sample-size regimes)
  let pValue: number;
  if (n === 3) {
    const pi6 = 1.90985931710274; // 6/pi
    const stqr = 1.04719755119660; // asin(sqrt(3/4))
    pValue = Math.max(0, Math.min(1, pi6 * (Math.asin(Math.sqrt(W)) - stqr)));
  } else {
    let z: number;
    if (n <= 11) {
      const gamma = -2.273 + 0.459 * n;
      const wt = -Math.log(gamma - Math.log1p(-W));
      const mu = 0.544 - 0.39978 * n + 0.025054 * n * n - 0.0006714 * n ** 3;
      const sigma = Math.exp(
        1.3822 - 0.77857 * n + 0.062767 * n * n - 0.0020322 * n ** 3,
      );
      z = (wt - mu) / sigma;
    } else {
      const lnN = Math.log(n);
      const wt = Math.log1p(-W);
      const mu = -1.5861 - 0.31082 * lnN - 0.083751 * lnN * lnN + 0.0038915 * lnN ** 3;
      const sigma = Math.exp(-0.4803 - 0.082676 * lnN + 0.0030302 * lnN * lnN);
      z = (wt - mu) / sigma;
    }
    pValue = Math.max(0, Math.min(1, normalUpperTail(z)));
  }
  return {
    n,
    W,
    pValue,
    verdict: pValue < alpha ? "non-gaussian" : "gaussian",
  };
}
