/**
 * Reader for the harness CSV schema:
 *   op,variant,input_id,latency_ns,repeats,abs_error,dim
 * abs_error is empty for the switch category; dim is matmul-only.
 */

export interface BenchRow {
  op: string;
  variant: "fast" | "precise";
  inputId: number;
  latencyNs: number;
  repeats: number;
  absError: number | null;
  dim: number | null;
}

export const REQUIRED_COLUMNS = [
  "op",
  "variant",
  "input_id",
  "latency_ns",
  "repeats",
  "abs_error",
  "dim",
] as const;

export function parseRecordsCsv(text: string): BenchRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new Error(`missing column '${column}' in CSV header`);
    }
  }
  const col = (fields: string[], name: string) => fields[index.get(name)!] ?? "";

  const rows: BenchRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new Error(
        `line ${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const variant = col(fields, "variant");
    if (variant !== "fast" && variant !== "precise") {
      throw new Error(`line ${i + 1}: unknown variant '${variant}'`);
    }
    const latencyNs = Number(col(fields, "latency_ns"));
    if (!Number.isFinite(latencyNs) || latencyNs <= 0) {
      throw new Error(`line ${i + 1}: latency_ns must be positive`);
    }
    const absErrorText = col(fields, "abs_error");
    const dimText = col(fields, "dim");
    rows.push({
      op: col(fields, "op"),
      variant,
      inputId: Number(col(fields, "input_id")),
      latencyNs,
      repeats: Number(col(fields, "repeats")),
      absError: absErrorText === "" ? null : Number(absErrorText),
      dim: dimText === "" ? null : Number(dimText),
    });
  }
  return rows;
}

/** Equal-length fast/precise latency vectors aligned by input id. */
export interface PairedSamples {
  op: string;
  inputIds: number[];
  fast: number[];
  precise: number[];
}

export function pairedSamples(rows: BenchRow[]): Map<string, PairedSamples> {
  const byOp = new Map<string, { fast: Map<number, number>; precise: Map<number, number> }>();
  for (const row of rows) {
    let entry = byOp.get(row.op);
    if (!entry) {
      entry = { fast: new Map(), precise: new Map() };
      byOp.set(row.op, entry);
    }
    entry[row.variant].set(row.inputId, row.latencyNs);
  }
  const out = new Map<string, PairedSamples>();
  for (const [op, entry] of byOp) {
    const ids = [...entry.fast.keys()]
      .filter((id) => entry.precise.has(id))
      .sort((a, b) => a - b);
    if (ids.length !== entry.fast.size || ids.length !== entry.precise.size) {
      throw new Error(`category '${op}': fast/precise rows are not fully paired`);
    }
    out.set(op, {
      op,
      inputIds: ids,
      fast: ids.map((id) => entry.fast.get(id)!),
      precise: ids.map((id) => entry.precise.get(id)!),
    });
  }
  return out;
}
