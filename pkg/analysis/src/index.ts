export { BenchRow, PairedSamples, parseRecordsCsv, pairedSamples } from "./csv";
export { wilcoxonSignedRank, WilcoxonResult, midranks } from "./wilcoxon";
export { shapiroWilk, ShapiroResult, NormalityVerdict } from "./shapiro";
export { erfc, normalUpperTail, inverseNormalCdf } from "./normal";
export { buildFigures, distributionPanel, speedupChart, Figure } from "./figures";
export { analyze, renderMarkdown, statsJson, CategoryStats } from "./report";
