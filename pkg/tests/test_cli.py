"""Tests for the command-line front end."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from pairstat.bench import BENCH_COLUMNS, render_rows, run_bench
from pairstat.cli import main
from pairstat.datamodel import TestRequest, make_matrix
from pairstat.engine import run
from pairstat.matio import read_matrix, roundtrip_equal, write_matrix
from pairstat.simulate import simulate_matrix

TestRequest.__test__ = False


def simulate_file(tmp_path, name, **kwargs) -> str:
    """Create a matrix file via the simulate subcommand."""
    path = str(tmp_path / name)
    flags = ["simulate", "--out", path]
    for key, value in kwargs.items():
        flags.extend([f"--{key.replace('_', '-')}", str(value)])
    assert main(flags) == 0
    return path


# ---------------------------------------------------------------- #
# run subcommand
# ---------------------------------------------------------------- #


class TestRunCommand:
    def test_homogeneous_run_writes_square_matrices(self, tmp_path) -> None:
        """A continuous run yields one feature-square file per output."""
        data = simulate_file(
            tmp_path, "a.csv", features=5, samples=20, na_ratio=0.1, seed=1
        )
        out = str(tmp_path / "out")
        code = main(
            [
                "run", "--test", "pearson", "--input", data,
                "--na-value", "nan", "--threads", "4",
                "--outputs", "stat,p", "--out-dir", out,
            ]
        )
        assert code == 0
        for name in ("stat", "p"):
            values, row_ids, col_ids = read_matrix(
                os.path.join(out, f"pearson.{name}.csv")
            )
            assert values.shape == (5, 5)
            assert row_ids == ["f0", "f1", "f2", "f3", "f4"]
            assert col_ids == row_ids

    def test_mixed_run_writes_rectangular_matrix(self, tmp_path) -> None:
        """A mixed run crosses label features with continuous features."""
        labels = simulate_file(
            tmp_path, "cat.csv", features=4, samples=30, kind="categorical",
            categories=3, seed=2,
        )
        cont = simulate_file(tmp_path, "cont.csv", features=6, samples=30, seed=3)
        out = str(tmp_path / "out")
        code = main(
            [
                "run", "--test", "anova", "--input", labels,
                "--input2", cont, "--outputs", "p_bh", "--out-dir", out,
            ]
        )
        assert code == 0
        values, row_ids, col_ids = read_matrix(
            os.path.join(out, "anova.p_bh.csv")
        )
        assert values.shape == (4, 6)
        assert row_ids == ["f0", "f1", "f2", "f3"]
        assert col_ids == ["f0", "f1", "f2", "f3", "f4", "f5"]

    def test_kind_mismatch_exits_3(self, tmp_path, capsys) -> None:
        """Categorical tests reject continuous data with a kind message."""
        data = simulate_file(tmp_path, "cont.csv", features=3, samples=15, seed=4)
        code = main(["run", "--test", "chi2", "--input", data])
        assert code == 3
        err = capsys.readouterr().err
        assert "categorical" in err
        assert "chi2" in err

    def test_outputs_match_engine(self, tmp_path) -> None:
        """Files round-trip the engine's matrices bit for bit."""
        data = simulate_file(
            tmp_path, "a.csv", features=6, samples=25, na_ratio=0.2, seed=5
        )
        out = str(tmp_path / "out")
        assert main(
            [
                "run", "--test", "spearman", "--input", data,
                "--outputs", "stat,p,rho", "--out-dir", out,
            ]
        ) == 0
        values, _, _ = read_matrix(data)
        results = run(
            TestRequest(test="spearman", outputs=("stat", "p", "rho")),
            make_matrix(values, "continuous"),
        )
        for name in ("stat", "p", "rho"):
            written, _, _ = read_matrix(os.path.join(out, f"spearman.{name}.csv"))
            assert roundtrip_equal(written, results[name])

    def test_features_on_cols(self, tmp_path) -> None:
        """A transposed input produces the same results."""
        rng = np.random.default_rng(6)
        values = rng.random((5, 18))
        by_rows = str(tmp_path / "rows.csv")
        by_cols = str(tmp_path / "cols.csv")
        write_matrix(by_rows, values)
        write_matrix(
            by_cols,
            values.T.copy(),
            row_ids=[f"s{i}" for i in range(18)],
            col_ids=[f"f{i}" for i in range(5)],
        )
        out_rows = str(tmp_path / "out_rows")
        out_cols = str(tmp_path / "out_cols")
        assert main(
            ["run", "--test", "pearson", "--input", by_rows, "--out-dir", out_rows]
        ) == 0
        assert main(
            [
                "run", "--test", "pearson", "--input", by_cols,
                "--features-on", "cols", "--out-dir", out_cols,
            ]
        ) == 0
        a, ids_a, _ = read_matrix(os.path.join(out_rows, "pearson.stat.csv"))
        b, ids_b, _ = read_matrix(os.path.join(out_cols, "pearson.stat.csv"))
        assert roundtrip_equal(a, b)
        assert ids_a == ids_b

    def test_custom_sentinel(self, tmp_path) -> None:
        """A numeric sentinel marks the same cells NaN does."""
        rng = np.random.default_rng(7)
        values = rng.random((4, 16))
        holes = rng.random((4, 16)) < 0.2
        with_nan = values.copy()
        with_nan[holes] = np.nan
        with_code = values.copy()
        with_code[holes] = 9999.0
        nan_path = str(tmp_path / "nan.csv")
        code_path = str(tmp_path / "code.csv")
        write_matrix(nan_path, with_nan)
        write_matrix(code_path, with_code)
        out_a = str(tmp_path / "a")
        out_b = str(tmp_path / "b")
        assert main(
            ["run", "--test", "pearson", "--input", nan_path, "--out-dir", out_a]
        ) == 0
        assert main(
            [
                "run", "--test", "pearson", "--input", code_path,
                "--na-value", "9999", "--out-dir", out_b,
            ]
        ) == 0
        a, _, _ = read_matrix(os.path.join(out_a, "pearson.stat.csv"))
        b, _, _ = read_matrix(os.path.join(out_b, "pearson.stat.csv"))
        assert roundtrip_equal(a, b)

    def test_tsv_format(self, tmp_path) -> None:
        """The tsv flavor writes tab-separated .tsv files."""
        data = simulate_file(tmp_path, "a.csv", features=3, samples=10, seed=8)
        out = str(tmp_path / "out")
        assert main(
            [
                "run", "--test", "pearson", "--input", data,
                "--outputs", "stat", "--format", "tsv", "--out-dir", out,
            ]
        ) == 0
        path = os.path.join(out, "pearson.stat.tsv")
        with open(path) as handle:
            assert "\t" in handle.readline()

    def test_nan_serialized_literally(self, tmp_path) -> None:
        """Diagonal NaNs of adjusted output appear as the literal nan."""
        data = simulate_file(tmp_path, "a.csv", features=3, samples=10, seed=9)
        out = str(tmp_path / "out")
        assert main(
            [
                "run", "--test", "pearson", "--input", data,
                "--outputs", "p_bonferroni", "--out-dir", out,
            ]
        ) == 0
        with open(os.path.join(out, "pearson.p_bonferroni.csv")) as handle:
            body = handle.read()
        assert "nan" in body

    def test_missing_file_exits_2(self, tmp_path) -> None:
        """A nonexistent input maps to the input-error code."""
        code = main(
            ["run", "--test", "pearson", "--input", str(tmp_path / "no.csv")]
        )
        assert code == 2

    def test_malformed_cell_exits_2(self, tmp_path, capsys) -> None:
        """A bad numeric cell reports its position and exits 2."""
        path = str(tmp_path / "bad.csv")
        with open(path, "w") as handle:
            handle.write(",s0,s1\nf0,1.0,wat\n")
        code = main(["run", "--test", "pearson", "--input", path])
        assert code == 2
        assert "row 2, column 2" in capsys.readouterr().err

    def test_extra_input2_exits_2(self, tmp_path) -> None:
        """Homogeneous tests reject a second matrix."""
        data = simulate_file(tmp_path, "a.csv", features=3, samples=10, seed=10)
        code = main(
            ["run", "--test", "pearson", "--input", data, "--input2", data]
        )
        assert code == 2

    def test_missing_input2_exits_2(self, tmp_path) -> None:
        """Mixed tests require a second matrix."""
        data = simulate_file(tmp_path, "a.csv", features=3, samples=10, seed=11)
        code = main(["run", "--test", "ttest", "--input", data])
        assert code == 2

    def test_unsupported_output_exits_3(self, tmp_path) -> None:
        """Requesting another test's effect size is a contract error."""
        data = simulate_file(tmp_path, "a.csv", features=3, samples=10, seed=12)
        code = main(
            ["run", "--test", "pearson", "--input", data, "--outputs", "stat,rho"]
        )
        assert code == 3

    def test_exact_mode_with_ties_exits_3(self, tmp_path, capsys) -> None:
        """Forced exact rank mode surfaces tie rejection as exit 3."""
        labels = np.array([[0.0, 0.0, 1.0, 1.0, 0.0, 1.0]])
        cont = np.array([[1.0, 2.0, 2.0, 3.0, 4.0, 5.0]])
        lab_path = str(tmp_path / "lab.csv")
        cont_path = str(tmp_path / "cont.csv")
        write_matrix(lab_path, labels)
        write_matrix(cont_path, cont)
        code = main(
            [
                "run", "--test", "mwu", "--input", lab_path,
                "--input2", cont_path, "--u-mode", "exact",
            ]
        )
        assert code == 3
        assert "tie" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self) -> None:
        """Argparse usage errors keep the input-error code."""
        assert main(["run", "--test", "pearson", "--bogus", "x"]) == 2

    def test_unknown_test_exits_2(self) -> None:
        """An unknown test name is a usage error."""
        assert main(["run", "--test", "levene", "--input", "x.csv"]) == 2

    def test_no_subcommand_exits_2(self) -> None:
        """Calling without a subcommand is a usage error."""
        assert main([]) == 2

    def test_help_exits_0(self, capsys) -> None:
        """Help exits cleanly."""
        assert main(["--help"]) == 0
        capsys.readouterr()


# ---------------------------------------------------------------- #
# simulate subcommand
# ---------------------------------------------------------------- #


class TestSimulateCommand:
    def test_file_matches_library_call(self, tmp_path) -> None:
        """The file round-trips the library matrix bit for bit."""
        path = simulate_file(
            tmp_path, "a.csv", features=8, samples=21, na_ratio=0.3, seed=13
        )
        back, row_ids, col_ids = read_matrix(path)
        direct = simulate_matrix(8, 21, na_ratio=0.3, seed=13)
        assert roundtrip_equal(back, direct)
        assert row_ids == [f"f{i}" for i in range(8)]
        assert col_ids == [f"s{i}" for i in range(21)]

    def test_same_seed_same_bytes(self, tmp_path) -> None:
        """Two runs with one seed produce identical files."""
        a = simulate_file(tmp_path, "a.csv", features=5, samples=12, seed=14)
        b = simulate_file(tmp_path, "b.csv", features=5, samples=12, seed=14)
        with open(a, "rb") as ha, open(b, "rb") as hb:
            assert ha.read() == hb.read()

    def test_exact_missing_counts(self, tmp_path) -> None:
        """Every feature of the written file has floor(r*S) holes."""
        path = simulate_file(
            tmp_path, "a.csv", features=10, samples=40, na_ratio=0.25, seed=15
        )
        values, _, _ = read_matrix(path)
        np.testing.assert_array_equal(
            np.isnan(values).sum(axis=1), np.full(10, 10)
        )

    def test_infeasible_exits_2(self, tmp_path, capsys) -> None:
        """Too many categories for the observed slots is an input error."""
        code = main(
            [
                "simulate", "--features", "3", "--samples", "10",
                "--kind", "categorical", "--categories", "8",
                "--na-ratio", "0.5", "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 2
        capsys.readouterr()

    def test_bad_kind_exits_2(self, tmp_path) -> None:
        """Unknown kinds are usage errors."""
        code = main(
            [
                "simulate", "--features", "3", "--samples", "10",
                "--kind", "ordinal", "--out", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 2


# ---------------------------------------------------------------- #
# bench subcommand
# ---------------------------------------------------------------- #


class TestBenchCommand:
    def test_fast_sweep_rows(self, capsys) -> None:
        """A two-thread sweep emits a header and one row per setting."""
        code = main(
            [
                "bench", "--tests", "pearson", "--features", "10",
                "--samples", "16", "--threads", "1,4", "--seed", "16",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == ",".join(BENCH_COLUMNS)
        assert len(lines) == 3
        for line, threads in zip(lines[1:], ("1", "4")):
            cells = line.split(",")
            assert cells[0] == "pearson"
            assert cells[4] == threads
            assert cells[5] == "fast"
            assert float(cells[6]) > 0.0

    def test_oracle_rows_single_threaded(self, capsys) -> None:
        """Reference rows always report one thread and no speedup."""
        code = main(
            [
                "bench", "--tests", "ttest", "--features", "4",
                "--samples", "12", "--threads", "2", "--engine", "oracle",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        cells = lines[1].split(",")
        assert cells[4] == "1"
        assert cells[5] == "oracle"
        assert cells[8] == "nan"

    def test_speedup_on_fast_rows(self, capsys) -> None:
        """With both engines the fast rows carry a positive speedup."""
        code = main(
            [
                "bench", "--tests", "kruskal", "--features", "4",
                "--samples", "14", "--engine", "oracle,fast",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        by_engine = {line.split(",")[5]: line.split(",") for line in lines[1:]}
        assert float(by_engine["oracle"][6]) > 0.0
        speedup = float(by_engine["fast"][8])
        expected = float(by_engine["oracle"][6]) / float(by_engine["fast"][6])
        assert speedup == pytest.approx(expected)

    def test_report_file(self, tmp_path, capsys) -> None:
        """--out writes the same report to a file."""
        out = str(tmp_path / "rows.csv")
        code = main(
            [
                "bench", "--tests", "pearson", "--features", "6",
                "--samples", "10", "--out", out,
            ]
        )
        assert code == 0
        capsys.readouterr()
        with open(out) as handle:
            assert handle.readline().strip() == ",".join(BENCH_COLUMNS)

    def test_unknown_engine_exits_2(self, capsys) -> None:
        """Bad engine names are input errors."""
        code = main(
            [
                "bench", "--tests", "pearson", "--features", "4",
                "--samples", "8", "--engine", "turbo",
            ]
        )
        assert code == 2
        capsys.readouterr()

    def test_unknown_test_exits_2(self, capsys) -> None:
        """Bad test names are input errors."""
        code = main(["bench", "--tests", "levene"])
        assert code == 2
        capsys.readouterr()


# ---------------------------------------------------------------- #
# bench library
# ---------------------------------------------------------------- #


class TestBenchLibrary:
    def test_row_order_oracle_first(self) -> None:
        """Per data configuration the reference row precedes fast rows."""
        rows = run_bench(
            tests=("pearson",),
            features=(5,),
            samples=(10,),
            na_ratios=(0.0, 0.2),
            threads=(1, 2),
            engines=("fast", "oracle"),
            seed=17,
            reps=1,
        )
        assert [r.engine for r in rows] == ["oracle", "fast", "fast"] * 2
        assert all(r.threads == 1 for r in rows if r.engine == "oracle")

    def test_render_round_trips(self) -> None:
        """Rendered rows parse back to the same cell values."""
        rows = run_bench(
            tests=("mwu",),
            features=(3,),
            samples=(9,),
            na_ratios=(0.0,),
            threads=(1,),
            engines=("fast",),
            seed=18,
            reps=1,
        )
        text = render_rows(rows)
        lines = text.strip().splitlines()
        assert lines[0] == ",".join(BENCH_COLUMNS)
        cells = lines[1].split(",")
        assert cells[0] == "mwu"
        assert float(cells[6]) == rows[0].mean_seconds

    def test_console_script_installed(self) -> None:
        """The packaged entry point responds to --help."""
        proc = subprocess.run(
            [sys.executable, "-m", "pairstat.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "run" in proc.stdout
