/** Shared test fixtures: seeded LCG and a headline-shaped synthetic CSV. */

export class Lcg {
  private state: number;

  constructor(seed = 42) {
    this.state = seed >>> 0;
  }

  nextU32(): number {
    this.state = (Math.imul(1664525, this.state) + 1013904223) >>> 0;
    return this.state;
  }

  uniform(lo: number, hi: number): number {
    return lo + ((hi - lo) * this.nextU32()) / 4294967296;
  }
}

/**
 * Five categories shaped like the headline result table: near-constant
 * fast trig latencies vs slow spread precise ones, constant scalar mul,
 * a fast path slower than precise for matmul, and switch overhead far
 * above the bare-dispatch baseline.
 */
export function tableShapedCsv(samplesPerCategory = 50): string {
  const lcg = new Lcg(42);
  const lines = ["op,variant,input_id,latency_ns,repeats,abs_error,dim"];
  const shapes: Array<{
    op: string;
    fast: () => number;
    precise: () => number;
    withError: boolean;
    dim: number | "";
  }> = [
    {
      op: "sin",
      fast: () => 293 + Math.round(lcg.uniform(0, 2)),
      precise: () => 6915 + lcg.uniform(-400, 400),
      withError: true,
      dim: "",
    },
    {
      op: "cos",
      fast: () => 293 + Math.round(lcg.uniform(0, 2)),
      precise: () => 7847 + lcg.uniform(-400, 400),
      withError: true,
      dim: "",
    },
    { op: "mul", fast: () => 12, precise: () => 18, withError: true, dim: "" },
    {
      op: "matmul",
      fast: () => 16591 + lcg.uniform(-3000, 3000),
      precise: () => 7806 + lcg.uniform(-1500, 1500),
      withError: true,
      dim: 16,
    },
    {
      op: "switch",
      fast: () => 1942 + lcg.uniform(-10, 10),
      precise: () => 29 + lcg.uniform(0, 2),
      withError: false,
      dim: "",
    },
  ];
  for (const shape of shapes) {
    for (let i = 0; i < samplesPerCategory; i++) {
      const err = shape.withError ? lcg.uniform(1e-6, 1e-4).toExponential(9) : "";
      lines.push(`${shape.op},fast,${i},${shape.fast()},1,${err},${shape.dim}`);
      lines.push(`${shape.op},precise,${i},${shape.precise()},1,${err},${shape.dim}`);
    }
  }
  return lines.join("\n") + "\n";
}
