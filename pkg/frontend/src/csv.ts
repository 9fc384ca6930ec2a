/**
 * Minimal CSV reading for the harness output schemas.
 *
 * The harness never quotes fields (no commas or newlines inside values), so a
 * plain split is exact. Missing columns are reported by name so a schema
 * drift fails loudly instead of plotting garbage.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `row has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { header, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Resolve column names to indices, naming whichever is missing. */
export function columnIndex(table: Table, names: string[]): number[] {
  return names.map((name) => {
    const idx = table.header.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(`column ${JSON.stringify(name)} not in CSV header`);
    }
    return idx;
  });
}

/** Numeric cell: empty stays NaN, signed infinities round-trip from Python. */
export function toNumber(cell: string): number {
  if (cell === "") return NaN;
  if (cell === "inf") return Infinity;
  if (cell === "-inf") return -Infinity;
  const value = Number(cell);
  if (Number.isNaN(value) && cell !== "nan") {
    throw new SchemaError(`not a number: ${JSON.stringify(cell)}`);
  }
  return value;
}
