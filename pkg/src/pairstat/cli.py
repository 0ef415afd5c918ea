"""File-based front end for the pairwise testing engine.

Three subcommands cover the full workflow:

``run``
    Read one or two delimited matrices, run a pairwise test, and write
    one output file per requested matrix into an output directory.
``simulate``
    Generate a seeded synthetic matrix file for benchmarking.
``bench``
    Time the engine (and optionally the reference baseline) over a
    parameter grid and emit machine-readable CSV rows.

Exit codes: 0 on success, 2 on input errors (missing or malformed
files, bad flag values, infeasible simulation settings), 3 on contract
violations (kind mismatches, unsupported outputs, exact-mode limits).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .bench import render_rows, run_bench
from .datamodel import (
    KINDS,
    KINDS_BY_TEST,
    T_VARIANTS,
    TESTS,
    U_MODES,
    DataMatrix,
    TestRequest,
    make_matrix,
)
from .engine import run
from .errors import InfeasibleSimulation, PairstatError
from .matio import read_matrix, write_matrix
from .simulate import simulate_matrix


# ---------------------------------------------------------------- #
# flag parsing
# ---------------------------------------------------------------- #


def _comma_tokens(text: str) -> tuple[str, ...]:
    """Split a comma-separated flag value into trimmed tokens."""
    tokens = tuple(token.strip() for token in text.split(",") if token.strip())
    if not tokens:
        raise argparse.ArgumentTypeError(f"expected at least one token: {text!r}")
    return tokens


def _comma_ints(text: str) -> tuple[int, ...]:
    """Parse a comma-separated list of integers."""
    try:
        return tuple(int(token) for token in _comma_tokens(text))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers: {text!r}"
        ) from None


def _comma_floats(text: str) -> tuple[float, ...]:
    """Parse a comma-separated list of floats."""
    try:
        return tuple(float(token) for token in _comma_tokens(text))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers: {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    """Assemble the argument parser with its three subcommands."""
    parser = argparse.ArgumentParser(
        prog="pairstat",
        description="Pairwise statistical tests over delimited matrices.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    runp = commands.add_parser(
        "run", help="run one test and write the requested result matrices"
    )
    runp.add_argument("--test", required=True, choices=TESTS)
    runp.add_argument(
        "--input", required=True, help="matrix file (labels for mixed tests)"
    )
    runp.add_argument("--input2", help="continuous matrix file for mixed tests")
    runp.add_argument(
        "--na-value",
        dest="na_value",
        type=float,
        default=math.nan,
        help="missing-value sentinel (default nan)",
    )
    runp.add_argument(
        "--features-on",
        dest="features_on",
        choices=("rows", "cols"),
        default="rows",
        help="input orientation (default rows)",
    )
    runp.add_argument("--threads", type=int, default=1)
    runp.add_argument(
        "--outputs",
        type=_comma_tokens,
        default=("stat", "p"),
        help="comma-separated result names (default stat,p)",
    )
    runp.add_argument(
        "--t-variant", dest="t_variant", choices=T_VARIANTS, default="student"
    )
    runp.add_argument("--u-mode", dest="u_mode", choices=U_MODES, default="auto")
    runp.add_argument("--out-dir", dest="out_dir", default=".")
    runp.add_argument("--format", choices=("csv", "tsv"), default="csv")
    runp.set_defaults(func=cmd_run)

    simp = commands.add_parser(
        "simulate", help="generate a seeded synthetic matrix file"
    )
    simp.add_argument("--features", type=int, required=True)
    simp.add_argument("--samples", type=int, required=True)
    simp.add_argument("--kind", choices=KINDS, default="continuous")
    simp.add_argument("--categories", type=int, default=4)
    simp.add_argument("--na-ratio", dest="na_ratio", type=float, default=0.0)
    simp.add_argument("--seed", type=int, default=0)
    simp.add_argument("--out", required=True)
    simp.set_defaults(func=cmd_simulate)

    benchp = commands.add_parser(
        "bench", help="time the engine over a parameter grid"
    )
    benchp.add_argument(
        "--tests",
        type=_comma_tokens,
        default=TESTS,
        help="comma-separated test names (default all)",
    )
    benchp.add_argument("--features", type=_comma_ints, default=(250,))
    benchp.add_argument("--samples", type=_comma_ints, default=(250,))
    benchp.add_argument(
        "--na-ratios", dest="na_ratios", type=_comma_floats, default=(0.0,)
    )
    benchp.add_argument("--threads", type=_comma_ints, default=(1,))
    benchp.add_argument(
        "--engine",
        dest="engines",
        type=_comma_tokens,
        default=("fast",),
        help="fast, oracle, or fast,oracle",
    )
    benchp.add_argument("--seed", type=int, default=0)
    benchp.add_argument("--out", help="report file (default stdout)")
    benchp.set_defaults(func=cmd_bench)

    return parser


# ---------------------------------------------------------------- #
# subcommands
# ---------------------------------------------------------------- #


def _load_matrix(
    path: str, kind: str, test: str, na_value: float, features_on_rows: bool
) -> tuple[DataMatrix, list[str]]:
    """Read and validate one input matrix, returning it with feature ids."""
    values, row_ids, col_ids = read_matrix(path)
    feature_ids = row_ids if features_on_rows else col_ids
    try:
        matrix = make_matrix(
            values, kind, na_sentinel=na_value, features_on_rows=features_on_rows
        )
    except PairstatError as exc:
        raise type(exc)(
            f"{path}: expected a {kind} matrix for {test}: {exc}"
        ) from None
    return matrix, feature_ids


def cmd_run(args: argparse.Namespace) -> int:
    """Run one pairwise test on matrices from disk."""
    request = TestRequest(
        test=args.test,
        outputs=args.outputs,
        t_variant=args.t_variant,
        u_mode=args.u_mode,
        threads=args.threads,
        features_on_rows=args.features_on == "rows",
    )
    kind_a, kind_b = KINDS_BY_TEST[args.test]
    if kind_b is None and args.input2 is not None:
        raise ValueError(
            f"{args.test} compares one matrix against itself; drop --input2"
        )
    if kind_b is not None and args.input2 is None:
        raise ValueError(
            f"{args.test} needs --input2 with the {kind_b} matrix"
        )
    on_rows = args.features_on == "rows"
    mat_a, ids_a = _load_matrix(
        args.input, kind_a, args.test, args.na_value, on_rows
    )
    if kind_b is None:
        mat_b, ids_b = None, ids_a
    else:
        mat_b, ids_b = _load_matrix(
            args.input2, kind_b, args.test, args.na_value, on_rows
        )
    results = run(request, mat_a, mat_b)
    os.makedirs(args.out_dir, exist_ok=True)
    sep = "\t" if args.format == "tsv" else ","
    for name in request.outputs:
        path = os.path.join(args.out_dir, f"{args.test}.{name}.{args.format}")
        write_matrix(
            path, results[name], row_ids=ids_a, col_ids=ids_b, delimiter=sep
        )
        print(path)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    """Write one synthetic matrix file."""
    values = simulate_matrix(
        args.features,
        args.samples,
        kind=args.kind,
        categories=args.categories,
        na_ratio=args.na_ratio,
        seed=args.seed,
    )
    write_matrix(args.out, values)
    print(args.out)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    """Run the timing sweep and emit its CSV report."""
    rows = run_bench(
        tests=args.tests,
        features=args.features,
        samples=args.samples,
        na_ratios=args.na_ratios,
        threads=args.threads,
        engines=args.engines,
        seed=args.seed,
    )
    text = render_rows(rows)
    if args.out:
        with open(args.out, "w", newline="\n") as handle:
            handle.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- #
# entry point
# ---------------------------------------------------------------- #


def main(argv: list[str] | None = None) -> int:
    """Parse arguments and dispatch, translating errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except InfeasibleSimulation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PairstatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
