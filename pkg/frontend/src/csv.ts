/**
 * Reading and writing the delimited matrix files the pairstat command
 * line tool consumes and produces.  The layout is a header line with an
 * empty corner cell followed by the column ids, then one line per row
 * starting with the row id.  Non-finite values are spelled nan, inf and
 * -inf so files round-trip between both sides.
 */
import { readFileSync, writeFileSync } from "node:fs";

import { Matrix, fromRowMajor } from "./matrix.js";

/**
 * Pick the delimiter implied by a file name: tab for .tsv and .tab,
 * comma for everything else.
 */
export function delimiterFor(path: string): string {
  const lower = path.toLowerCase();
  return lower.endsWith(".tsv") || lower.endsWith(".tab") ? "\t" : ",";
}

/**
 * Render one float as text.  Finite values use the shortest decimal
 * string that parses back to the identical 64-bit pattern; NaN and the
 * infinities use the spellings the command line tool reads and writes.
 */
export function formatValue(value: number): string {
  if (Number.isNaN(value)) {
    return "nan";
  }
  if (value === Infinity) {
    return "inf";
  }
  if (value === -Infinity) {
    return "-inf";
  }
  if (Object.is(value, -0)) {
    return "-0";
  }
  return String(value);
}

const SPECIAL_VALUES: Record<string, number> = {
  nan: NaN,
  "-nan": NaN,
  inf: Infinity,
  "+inf": Infinity,
  "-inf": -Infinity,
  infinity: Infinity,
  "-infinity": -Infinity,
};

function parseCell(cell: string, row: number, col: number): number {
  const trimmed = cell.trim();
  const special = SPECIAL_VALUES[trimmed.toLowerCase()];
  if (special !== undefined) {
    return special;
  }
  const value = trimmed === "" ? NaN : Number(trimmed);
  if (Number.isNaN(value)) {
    throw new Error(`malformed numeric cell at row ${row}, column ${col}: ${JSON.stringify(cell)}`);
  }
  return value;
}

/**
 * Write a matrix to a delimited text file.  The delimiter defaults to
 * whatever the file extension implies.
 */
export function writeMatrixFile(path: string, matrix: Matrix, delimiter?: string): void {
  const sep = delimiter ?? delimiterFor(path);
  const lines = new Array<string>(matrix.rows + 1);
  lines[0] = [""].concat(matrix.colIds as string[]).join(sep);
  for (let i = 0; i < matrix.rows; i++) {
    const fields = new Array<string>(matrix.cols + 1);
    fields[0] = matrix.rowIds[i];
    for (let j = 0; j < matrix.cols; j++) {
      fields[j + 1] = formatValue(matrix.values[i * matrix.cols + j]);
    }
    lines[i + 1] = fields.join(sep);
  }
  writeFileSync(path, lines.join("\n") + "\n", "utf8");
}

/**
 * Read a delimited matrix file back into a Matrix.  Raises on ragged
 * rows and on cells that do not parse as floats.
 */
export function readMatrixFile(path: string, delimiter?: string): Matrix {
  const sep = delimiter ?? delimiterFor(path);
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new Error(`empty matrix file: ${path}`);
  }
  const colIds = lines[0].split(sep).slice(1);
  const nRows = lines.length - 1;
  const nCols = colIds.length;
  const rowIds = new Array<string>(nRows);
  const values = new Float64Array(nRows * nCols);
  for (let i = 0; i < nRows; i++) {
    const fields = lines[i + 1].split(sep);
    if (fields.length !== nCols + 1) {
      throw new Error(`row ${i} has ${fields.length - 1} values, expected ${nCols}`);
    }
    rowIds[i] = fields[0];
    for (let j = 0; j < nCols; j++) {
      values[i * nCols + j] = parseCell(fields[j + 1], i, j);
    }
  }
  return fromRowMajor(values, nRows, nCols, rowIds, colIds);
}
