import { readFileSync } from 'node:fs';

/** Parsed CSV with a validated header. Cells stay raw until extracted. */
export interface Table {
  columns: string[];
  cells: string[][];
}

export class SchemaError extends Error {}

/**
 * Read a CSV whose header must match `expectedColumns` exactly (same names,
 * same order). Figures never tolerate a loose schema: a mismatch is an error
 * naming the offending column.
 */
export function readCsv(path: string, expectedColumns: string[]): Table {
  const text = readFileSync(path, 'utf8');
  const lines = text.split('\n').filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty file`);
  }
  const header = lines[0].split(',');
  for (let i = 0; i < Math.max(header.length, expectedColumns.length); i++) {
    if (header[i] !== expectedColumns[i]) {
      throw new SchemaError(
        `${path}: column ${i + 1} is ${JSON.stringify(header[i])}, ` +
          `expected ${JSON.stringify(expectedColumns[i])}`,
      );
    }
  }
  if (lines.length === 1) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const cells: string[][] = [];
  for (let r = 1; r < lines.length; r++) {
    const row = lines[r].split(',');
    if (row.length !== expectedColumns.length) {
      throw new SchemaError(
        `${path}: row ${r} has ${row.length} cells, ` +
          `expected ${expectedColumns.length}`,
      );
    }
    cells.push(row);
  }
  return { columns: expectedColumns, cells };
}

/** Extract one numeric column by name; every cell must be a finite number. */
export function column(table: Table, name: string): number[] {
  const i = table.columns.indexOf(name);
  if (i < 0) {
    throw new SchemaError(`no such column: ${name}`);
  }
  return table.cells.map((row, r) => {
    const v = Number(row[i]);
    if (row[i].trim() === '' || !Number.isFinite(v)) {
      throw new SchemaError(
        `row ${r + 1}, column ${name}: not a finite number ` +
          `(${JSON.stringify(row[i])})`,
      );
    }
    return v;
  });
}

/** Extract one column by name as raw strings (for label columns). */
export function textColumn(table: Table, name: string): string[] {
  const i = table.columns.indexOf(name);
  if (i < 0) {
    throw new SchemaError(`no such column: ${name}`);
  }
  return table.cells.map((row) => row[i]);
}
