"""Timing sweeps over the pair engine and its reference baseline.

Each benchmark configuration is one (test, features, samples,
missingness, threads, engine) tuple.  Data generation and matrix
validation happen outside the timed window; the clock covers only the
engine call.  Every configuration runs one untimed warmup call (which
also absorbs JIT compilation) followed by a fixed number of timed
repetitions, and reports their mean and standard deviation.

Reference rows always carry ``threads=1`` because the baseline is
single-threaded.  Fast rows carry a speedup factor (reference mean
divided by fast mean) whenever the same data configuration was also
timed on the reference engine.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .datamodel import KINDS_BY_TEST, TESTS, DataMatrix, TestRequest, make_matrix
from .engine import run
from .oracle import oracle_run
from .simulate import simulate_matrix

#: Timed repetitions per configuration.
BENCH_REPS = 3

#: Engine labels accepted by the sweep.
ENGINES = ("fast", "oracle")

#: Column order of the report.
BENCH_COLUMNS = (
    "test",
    "features",
    "samples",
    "na_ratio",
    "threads",
    "engine",
    "mean_seconds",
    "std_seconds",
    "speedup",
)


# ---------------------------------------------------------------- #
# rows
# ---------------------------------------------------------------- #


@dataclass(frozen=True)
class BenchRow:
    """One timed configuration of the sweep.

    Attributes:
        test: Pairwise test name.
        features: Feature count per input matrix.
        samples: Sample count.
        na_ratio: Missing-value proportion per feature.
        threads: Worker count used by the engine call.
        engine: "fast" or "oracle".
        mean_seconds: Mean wall-clock seconds over the repetitions.
        std_seconds: Standard deviation of those repetitions.
        speedup: Reference mean over fast mean; NaN when no matching
            reference row exists or on reference rows themselves.
    """

    test: str
    features: int
    samples: int
    na_ratio: float
    threads: int
    engine: str
    mean_seconds: float
    std_seconds: float
    speedup: float


# ---------------------------------------------------------------- #
# sweep
# ---------------------------------------------------------------- #


def build_inputs(
    test: str,
    n_features: int,
    n_samples: int,
    na_ratio: float,
    seed: int,
) -> tuple[DataMatrix, DataMatrix | None]:
    """Simulate and validate the input matrices for one test."""
    kind_a, kind_b = KINDS_BY_TEST[test]
    mat_a = make_matrix(
        simulate_matrix(
            n_features, n_samples, kind=kind_a, na_ratio=na_ratio, seed=seed
        ),
        kind_a,
    )
    if kind_b is None:
        return mat_a, None
    mat_b = make_matrix(
        simulate_matrix(
            n_features,
            n_samples,
            kind=kind_b,
            na_ratio=na_ratio,
            seed=seed + 1,
        ),
        kind_b,
    )
    return mat_a, mat_b


def _time_call(fn, reps: int) -> tuple[float, float]:
    """Mean and standard deviation of ``reps`` timed calls."""
    fn()
    elapsed = np.empty(reps, dtype=np.float64)
    for i in range(reps):
        start = time.perf_counter()
        fn()
        elapsed[i] = time.perf_counter() - start
    return float(elapsed.mean()), float(elapsed.std())


def run_bench(
    tests: tuple[str, ...],
    features: tuple[int, ...],
    samples: tuple[int, ...],
    na_ratios: tuple[float, ...],
    threads: tuple[int, ...],
    engines: tuple[str, ...],
    seed: int = 0,
    reps: int = BENCH_REPS,
) -> list[BenchRow]:
    """Time every configuration in the cartesian grid.

    Args:
        tests: Test names to sweep.
        features: Feature counts.
        samples: Sample counts.
        na_ratios: Missing-value proportions.
        threads: Worker counts for the fast engine.
        engines: Subset of ``ENGINES``.
        seed: Base seed for data generation.
        reps: Timed repetitions per configuration.

    Returns:
        Rows in grid order: per data configuration the reference row
        (if requested) precedes the fast rows so speedups are filled.
    """
    for test in tests:
        if test not in TESTS:
            raise ValueError(f"unknown test {test!r}; expected one of {TESTS}")
    for engine in engines:
        if engine not in ENGINES:
            raise ValueError(
                f"unknown engine {engine!r}; expected one of {ENGINES}"
            )
    rows: list[BenchRow] = []
    for test in tests:
        for n_features in features:
            for n_samples in samples:
                for na_ratio in na_ratios:
                    mat_a, mat_b = build_inputs(
                        test, n_features, n_samples, na_ratio, seed
                    )
                    oracle_mean = math.nan
                    if "oracle" in engines:
                        request = TestRequest(test=test, outputs=("stat", "p"))
                        mean, std = _time_call(
                            lambda: oracle_run(request, mat_a, mat_b), reps
                        )
                        oracle_mean = mean
                        rows.append(
                            BenchRow(
                                test=test,
                                features=n_features,
                                samples=n_samples,
                                na_ratio=na_ratio,
                                threads=1,
                                engine="oracle",
                                mean_seconds=mean,
                                std_seconds=std,
                                speedup=math.nan,
                            )
                        )
                    if "fast" not in engines:
                        continue
                    for n_threads in threads:
                        request = TestRequest(
                            test=test,
                            outputs=("stat", "p"),
                            threads=n_threads,
                        )
                        mean, std = _time_call(
                            lambda: run(request, mat_a, mat_b), reps
                        )
                        speedup = oracle_mean / mean if mean > 0 else math.nan
                        rows.append(
                            BenchRow(
                                test=test,
                                features=n_features,
                                samples=n_samples,
                                na_ratio=na_ratio,
                                threads=n_threads,
                                engine="fast",
                                mean_seconds=mean,
                                std_seconds=std,
                                speedup=speedup,
                            )
                        )
    return rows


# ---------------------------------------------------------------- #
# report
# ---------------------------------------------------------------- #


def render_rows(rows: list[BenchRow]) -> str:
    """Render rows as CSV text with a header line."""
    lines = [",".join(BENCH_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row.test,
                    str(row.features),
                    str(row.samples),
                    repr(row.na_ratio),
                    str(row.threads),
                    row.engine,
                    repr(row.mean_seconds),
                    repr(row.std_seconds),
                    repr(row.speedup),
                ]
            )
        )
    return "\n".join(lines) + "\n"


__all__ = [
    "BENCH_COLUMNS",
    "BENCH_REPS",
    "ENGINES",
    "BenchRow",
    "build_inputs",
    "render_rows",
    "run_bench",
]
