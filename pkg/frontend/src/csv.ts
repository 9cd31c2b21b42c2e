/**
 * Reader for the benchmark CSV emitted by the estimation backend.
 *
 * Schema (fixed): rep,data_regime,method,true_effect,covered,width,
 * contains_zero,runtime_ms. Extra columns are tolerated; missing ones are
 * a SchemaError naming the first absent column.
 */

export interface BenchmarkRow {
  rep: number;
  data_regime: string;
  method: string;
  true_effect: number;
  covered: number;
  width: number;
  contains_zero: number;
  runtime_ms: number;
}

export const REQUIRED_COLUMNS = [
  "rep",
  "data_regime",
  "method",
  "true_effect",
  "covered",
  "width",
  "contains_zero",
  "runtime_ms",
] as const;

export class SchemaError extends Error {
  readonly column: string;

  constructor(column: string, detail?: string) {
    super(detail ?? `benchmark CSV is missing required column "${column}"`);
    this.name = "SchemaError";
    this.column = column;
  }
}

export function parseBenchmarkCsv(text: string): BenchmarkRow[] {
  const lines = text.split("\n").filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    throw new SchemaError(REQUIRED_COLUMNS[0], "benchmark CSV has no header row");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const index = new Map<string, number>();
  header.forEach((name, at) => index.set(name, at));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new SchemaError(column);
    }
  }

  const numeric = (parts: string[], column: string, lineNo: number): number => {
    const raw = parts[index.get(column)!];
    const value = Number(raw);
    if (raw === undefined || raw === "" || Number.isNaN(value)) {
      throw new SchemaError(
        column,
        `line ${lineNo}: column "${column}" is not numeric (got "${raw}")`
      );
    }
    return value;
  };

  const rows: BenchmarkRow[] = [];
  for (let at = 1; at < lines.length; at++) {
    const parts = lines[at].split(",");
    if (parts.length < header.length) {
      throw new SchemaError(
        header[parts.length],
        `line ${at + 1}: expected ${header.length} columns, got ${parts.length}`
      );
    }
    rows.push({
      rep: numeric(parts, "rep", at + 1),
      data_regime: parts[index.get("data_regime")!],
      method: parts[index.get("method")!],
      true_effect: numeric(parts, "true_effect", at + 1),
      covered: numeric(parts, "covered", at + 1),
      width: numeric(parts, "width", at + 1),
      contains_zero: numeric(parts, "contains_zero", at + 1),
      runtime_ms: numeric(parts, "runtime_ms", at + 1),
    });
  }
  return rows;
}
