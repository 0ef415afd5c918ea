/**
 * TypeScript client for the pairstat command line tool.  Matrices live
 * in contiguous Float64Array buffers, move to and from the tool as
 * delimited text files, and come back as maps of named result matrices.
 * Every number is produced by the tool itself; this package only
 * shuttles data.
 */
export { Matrix, at, bitsEqual, defaultIds, fromNested, fromRowMajor } from "./matrix.js";
export { delimiterFor, formatValue, readMatrixFile, writeMatrixFile } from "./csv.js";
export { CliError, DEFAULT_BINARY, runCli } from "./cli.js";
export {
  ResultMap,
  RunOptions,
  SimulateOptions,
  TestName,
  boundAnova,
  boundChi2,
  boundKruskal,
  boundMwu,
  boundPearson,
  boundSpearman,
  boundTtest,
  runTest,
  runTestOnFiles,
  simulateMatrix,
} from "./run.js";
