/**
 * CLI: analyze a harness records.csv into report.md, stats.json, and SVGs.
 *
 *   node dist/cli.js <records.csv> --out <dir>
 */

import * as fs from "fs";
import * as path from "path";

import { parseRecordsCsv } from "./csv";
import { analyze, renderMarkdown, statsJson } from "./report";

export function main(argv: string[]): number {
  const args = [...argv];
  let out = "analysis_out";
  const positional: string[] = [];
  while (args.length > 0) {
    const arg = args.shift()!;
    if (arg === "--out") {
      const value = args.shift();
      if (!value) {
        console.error("error: --out requires a directory");
        return 1;
      }
      out = value;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 1) {
    console.error("usage: cli.js <records.csv> [--out <dir>]");
    return 1;
  }
  try {
    const rows = parseRecordsCsv(fs.readFileSync(positional[0], "utf8"));
    const result = analyze(rows);
    const figDir = path.join(out, "figures");
    fs.mkdirSync(figDir, { recursive: true });
    fs.writeFileSync(path.join(out, "report.md"), renderMarkdown(result, positional[0]));
    fs.writeFileSync(path.join(out, "stats.json"), statsJson(result));
    for (const figure of result.figures.figures) {
      fs.writeFileSync(path.join(figDir, figure.name), figure.svg);
    }
    for (const warning of result.figures.warnings) {
      console.warn(`warning: ${warning}`);
    }
    console.log(
      `wrote ${path.join(out, "report.md")}, stats.json, and ` +
        `${result.figures.figures.length} figures`,
    );
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
