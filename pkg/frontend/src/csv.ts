import { readFileSync } from "node:fs";
import { InputError } from "./errors.js";

export interface Table {
  header: string[];
  /** column-major numeric data; blank cells become NaN only if allowed */
  columns: Map<string, number[]>;
  nRows: number;
}

/**
 * Parse a simple comma-separated file with one header row and an all-numeric
 * body.  Cells listed in `optionalColumns` may be empty (NaN); any other
 * non-numeric or missing cell is a hard error.
 */
export function readCsv(path: string, optionalColumns: string[] = []): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new InputError(`cannot read input file: ${path}`);
  }
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) throw new InputError(`empty file: ${path}`);
  const header = lines[0].split(",").map((h) => h.trim());
  if (new Set(header).size !== header.length)
    throw new InputError(`duplicate column names in ${path}`);
  if (lines.length < 2)
    throw new InputError(`no data rows in ${path}`);

  const columns = new Map<string, number[]>(header.map((h) => [h, []]));
  for (let r = 1; r < lines.length; r++) {
    const cells = lines[r].split(",");
    if (cells.length !== header.length)
      throw new InputError(
        `row ${r + 1} of ${path} has ${cells.length} cells, expected ${header.length}`,
      );
    for (let c = 0; c < header.length; c++) {
      const raw = cells[c].trim();
      const v = raw === "" ? NaN : Number(raw);
      if (Number.isNaN(v) && !(raw === "" && optionalColumns.includes(header[c])))
        throw new InputError(
          `non-numeric value ${JSON.stringify(cells[c])} at row ${r + 1}, column ${header[c]} of ${path}`,
        );
      columns.get(header[c])!.push(v);
    }
  }
  return { header, columns, nRows: lines.length - 1 };
}

/** Fetch a required column or fail with a schema error. */
export function column(t: Table, name: string, path: string): number[] {
  const col = t.columns.get(name);
  if (!col) throw new InputError(`missing column ${JSON.stringify(name)} in ${path}`);
  return col;
}
