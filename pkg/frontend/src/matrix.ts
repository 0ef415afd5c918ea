/**
 * Dense 2-D matrix of 64-bit floats with string identifiers per row and
 * column.  Values are stored row-major in a single contiguous buffer so
 * they can be handed around without copying.
 */
export interface Matrix {
  /** Row-major cell values, length rows * cols. */
  readonly values: Float64Array;
  readonly rows: number;
  readonly cols: number;
  readonly rowIds: readonly string[];
  readonly colIds: readonly string[];
}

/**
 * Generate identifiers prefix0, prefix1, ... for unnamed rows or columns.
 */
export function defaultIds(prefix: string, count: number): string[] {
  const ids = new Array<string>(count);
  for (let i = 0; i < count; i++) {
    ids[i] = `${prefix}${i}`;
  }
  return ids;
}

function checkIds(ids: readonly string[], count: number, what: string): void {
  if (ids.length !== count) {
    throw new Error(`expected ${count} ${what} ids, got ${ids.length}`);
  }
}

/**
 * Wrap an existing row-major buffer as a Matrix without copying it.  The
 * returned matrix aliases `values`; mutations to the buffer are visible
 * through the matrix and vice versa.
 */
export function fromRowMajor(
  values: Float64Array,
  rows: number,
  cols: number,
  rowIds?: readonly string[],
  colIds?: readonly string[],
): Matrix {
  if (!Number.isInteger(rows) || !Number.isInteger(cols) || rows < 0 || cols < 0) {
    throw new Error(`matrix dimensions must be non-negative integers, got ${rows} x ${cols}`);
  }
  if (values.length !== rows * cols) {
    throw new Error(`expected ${rows * cols} values for a ${rows} x ${cols} matrix, got ${values.length}`);
  }
  const rids = rowIds ?? defaultIds("f", rows);
  const cids = colIds ?? defaultIds("s", cols);
  checkIds(rids, rows, "row");
  checkIds(cids, cols, "column");
  return { values, rows, cols, rowIds: rids, colIds: cids };
}

/**
 * Build a Matrix from an array of rows, copying the numbers into one
 * contiguous buffer.  Every row must have the same length.
 */
export function fromNested(
  rows: readonly ArrayLike<number>[],
  rowIds?: readonly string[],
  colIds?: readonly string[],
): Matrix {
  const nRows = rows.length;
  const nCols = nRows > 0 ? rows[0].length : 0;
  const values = new Float64Array(nRows * nCols);
  for (let i = 0; i < nRows; i++) {
    const row = rows[i];
    if (row.length !== nCols) {
      throw new Error(`row ${i} has ${row.length} values, expected ${nCols}`);
    }
    for (let j = 0; j < nCols; j++) {
      values[i * nCols + j] = row[j];
    }
  }
  return fromRowMajor(values, nRows, nCols, rowIds, colIds);
}

/**
 * Read one cell.  Indices are zero-based and bounds-checked.
 */
export function at(matrix: Matrix, row: number, col: number): number {
  if (row < 0 || row >= matrix.rows || col < 0 || col >= matrix.cols) {
    throw new RangeError(`index (${row}, ${col}) out of bounds for ${matrix.rows} x ${matrix.cols} matrix`);
  }
  return matrix.values[row * matrix.cols + col];
}

/**
 * Compare two matrices for bit-level equality: identical shapes and ids,
 * and every cell has the same 64-bit pattern.  Unlike ===, this treats
 * NaN as equal to an identically encoded NaN and distinguishes -0 from 0.
 */
export function bitsEqual(a: Matrix, b: Matrix): boolean {
  if (a.rows !== b.rows || a.cols !== b.cols) {
    return false;
  }
  if (a.rowIds.length !== b.rowIds.length || a.colIds.length !== b.colIds.length) {
    return false;
  }
  for (let i = 0; i < a.rowIds.length; i++) {
    if (a.rowIds[i] !== b.rowIds[i]) {
      return false;
    }
  }
  for (let j = 0; j < a.colIds.length; j++) {
    if (a.colIds[j] !== b.colIds[j]) {
      return false;
    }
  }
  const wa = new BigUint64Array(a.values.buffer, a.values.byteOffset, a.values.length);
  const wb = new BigUint64Array(b.values.buffer, b.values.byteOffset, b.values.length);
  for (let k = 0; k < wa.length; k++) {
    if (wa[k] !== wb[k]) {
      return false;
    }
  }
  return true;
}
