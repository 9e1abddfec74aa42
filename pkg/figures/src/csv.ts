/** Reader for sgn2d diagnostics CSV files (one column set, full f64). */

import { readFileSync } from "node:fs";

export class CsvFormatError extends Error {
  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "CsvFormatError";
  }
}

export interface Diagnostics {
  readonly path: string;
  readonly columns: readonly string[];
  /** Column name -> values, all rows, file order. */
  readonly series: ReadonlyMap<string, Float64Array>;
}

/** Parse a diagnostics CSV; every row must be numeric and full width. */
export function readDiagnostics(path: string): Diagnostics {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length < 2) {
    throw new CsvFormatError(path, "no data rows");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  if (!columns.includes("t")) {
    throw new CsvFormatError(path, "missing 't' column");
  }
  const rows = lines.length - 1;
  const data = columns.map(() => new Float64Array(rows));
  for (let r = 0; r < rows; r++) {
    const parts = lines[r + 1].split(",");
    if (parts.length !== columns.length) {
      throw new CsvFormatError(
        path,
        `row ${r + 2} has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    for (let c = 0; c < columns.length; c++) {
      const v = Number(parts[c]);
      if (!Number.isFinite(v)) {
        throw new CsvFormatError(path, `row ${r + 2}: bad number ${parts[c]}`);
      }
      data[c][r] = v;
    }
  }
  const series = new Map<string, Float64Array>();
  columns.forEach((name, c) => series.set(name, data[c]));
  return { path, columns, series };
}

export interface RadialFit {
  readonly a: number;
  readonly b: number;
  readonly residual: number;
  readonly tMin: number;
}

/** Parse a collapse-fit JSON report ({a, b, residual, t_min}). */
export function readRadialFit(path: string): RadialFit {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new CsvFormatError(path, `not valid JSON (${(err as Error).message})`);
  }
  const rec = parsed as Record<string, unknown>;
  for (const key of ["a", "b", "residual", "t_min"]) {
    if (typeof rec[key] !== "number" || !Number.isFinite(rec[key] as number)) {
      throw new CsvFormatError(path, `fit report is missing numeric '${key}'`);
    }
  }
  return {
    a: rec.a as number,
    b: rec.b as number,
    residual: rec.residual as number,
    tMin: rec.t_min as number,
  };
}
