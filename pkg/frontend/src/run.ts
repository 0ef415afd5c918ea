/**
 * High-level entry points: one function per statistical test plus a
 * simulation helper.  Each call writes its inputs to a scratch
 * directory, runs the pairstat executable once, reads the result files
 * back and cleans up.  Result maps are keyed by the same output names
 * the tool's --outputs option accepts.
 */
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { basename, join } from "node:path";

import { DEFAULT_BINARY, runCli } from "./cli.js";
import { formatValue, readMatrixFile, writeMatrixFile } from "./csv.js";
import { Matrix } from "./matrix.js";

/** Statistical tests the pairstat executable knows. */
export type TestName = "pearson" | "spearman" | "chi2" | "ttest" | "mwu" | "anova" | "kruskal";

/** Options shared by every bound test function. */
export interface RunOptions {
  /** Sentinel marking missing cells; defaults to NaN. */
  naValue?: number;
  /** Which axis of the input files carries features; defaults to rows. */
  featuresOn?: "rows" | "cols";
  /** Worker threads for the engine. */
  threads?: number;
  /** Result matrices to produce; defaults to stat and p. */
  outputs?: readonly string[];
  /** Two-sample t statistic flavour, student or welch. */
  tVariant?: "student" | "welch";
  /** Mann-Whitney p-value mode: exact, asymptotic or auto. */
  uMode?: "exact" | "asymptotic" | "auto";
  /** Executable to launch instead of the default on PATH. */
  binary?: string;
}

/** Map from output name (stat, p, an effect size, ...) to its matrix. */
export type ResultMap = Record<string, Matrix>;

function inScratchDir<T>(body: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "pairstat-client-"));
  try {
    return body(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/**
 * Run one test on matrices already on disk and read back every result
 * file the tool reports on stdout.  Files are written into outDir,
 * which must exist.
 */
export function runTestOnFiles(
  test: TestName,
  inputPath: string,
  input2Path: string | undefined,
  outDir: string,
  options: RunOptions = {},
): ResultMap {
  const args = ["run", "--test", test, "--input", inputPath];
  if (input2Path !== undefined) {
    args.push("--input2", input2Path);
  }
  if (options.naValue !== undefined) {
    args.push("--na-value", formatValue(options.naValue));
  }
  if (options.featuresOn !== undefined) {
    args.push("--features-on", options.featuresOn);
  }
  if (options.threads !== undefined) {
    args.push("--threads", String(options.threads));
  }
  if (options.outputs !== undefined) {
    args.push("--outputs", options.outputs.join(","));
  }
  if (options.tVariant !== undefined) {
    args.push("--t-variant", options.tVariant);
  }
  if (options.uMode !== undefined) {
    args.push("--u-mode", options.uMode);
  }
  args.push("--out-dir", outDir, "--format", "csv");
  const stdout = runCli(args, options.binary ?? DEFAULT_BINARY);
  const results: ResultMap = {};
  for (const line of stdout.split("\n")) {
    const path = line.trim();
    if (path === "") {
      continue;
    }
    const name = basename(path).slice(test.length + 1).replace(/\.csv$/, "");
    results[name] = readMatrixFile(path);
  }
  return results;
}

/**
 * Run one test on in-memory matrices.  The first matrix is the only
 * input for the homogeneous tests and the label matrix for the mixed
 * ones, where the second matrix carries the continuous values.
 */
export function runTest(test: TestName, input: Matrix, input2?: Matrix, options: RunOptions = {}): ResultMap {
  return inScratchDir((dir) => {
    const inputPath = join(dir, "input.csv");
    writeMatrixFile(inputPath, input);
    let input2Path: string | undefined;
    if (input2 !== undefined) {
      input2Path = join(dir, "input2.csv");
      writeMatrixFile(input2Path, input2);
    }
    const outDir = join(dir, "out");
    return runTestOnFiles(test, inputPath, input2Path, outDir, options);
  });
}

/** Pearson correlation of every row pair of one continuous matrix. */
export function boundPearson(values: Matrix, options?: RunOptions): ResultMap {
  return runTest("pearson", values, undefined, options);
}

/** Spearman rank correlation of every row pair of one continuous matrix. */
export function boundSpearman(values: Matrix, options?: RunOptions): ResultMap {
  return runTest("spearman", values, undefined, options);
}

/** Chi-squared independence test of every row pair of one categorical matrix. */
export function boundChi2(labels: Matrix, options?: RunOptions): ResultMap {
  return runTest("chi2", labels, undefined, options);
}

/** Two-sample t-test of every dichotomous row against every continuous row. */
export function boundTtest(labels: Matrix, values: Matrix, options?: RunOptions): ResultMap {
  return runTest("ttest", labels, values, options);
}

/** Mann-Whitney U test of every dichotomous row against every continuous row. */
export function boundMwu(labels: Matrix, values: Matrix, options?: RunOptions): ResultMap {
  return runTest("mwu", labels, values, options);
}

/** One-way ANOVA of every categorical row against every continuous row. */
export function boundAnova(labels: Matrix, values: Matrix, options?: RunOptions): ResultMap {
  return runTest("anova", labels, values, options);
}

/** Kruskal-Wallis test of every categorical row against every continuous row. */
export function boundKruskal(labels: Matrix, values: Matrix, options?: RunOptions): ResultMap {
  return runTest("kruskal", labels, values, options);
}

/** Parameters for the simulation helper. */
export interface SimulateOptions {
  features: number;
  samples: number;
  /** continuous (default), dichotomous or categorical. */
  kind?: "continuous" | "dichotomous" | "categorical";
  /** Distinct labels per categorical feature. */
  categories?: number;
  /** Fraction of cells replaced by NaN, exact per feature. */
  naRatio?: number;
  seed?: number;
  /** Executable to launch instead of the default on PATH. */
  binary?: string;
}

/**
 * Generate a reproducible random matrix through the tool's simulate
 * subcommand and load it.
 */
export function simulateMatrix(options: SimulateOptions): Matrix {
  return inScratchDir((dir) => {
    const outPath = join(dir, "simulated.csv");
    const args = [
      "simulate",
      "--features",
      String(options.features),
      "--samples",
      String(options.samples),
    ];
    if (options.kind !== undefined) {
      args.push("--kind", options.kind);
    }
    if (options.categories !== undefined) {
      args.push("--categories", String(options.categories));
    }
    if (options.naRatio !== undefined) {
      args.push("--na-ratio", String(options.naRatio));
    }
    if (options.seed !== undefined) {
      args.push("--seed", String(options.seed));
    }
    args.push("--out", outPath);
    runCli(args, options.binary ?? DEFAULT_BINARY);
    return readMatrixFile(outPath);
  });
}
