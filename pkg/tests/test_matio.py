"""Tests for delimited matrix reading and writing."""

from __future__ import annotations

import numpy as np
import pytest

from pairstat.matio import (
    default_ids,
    delimiter_for,
    format_value,
    read_matrix,
    roundtrip_equal,
    write_matrix,
)


# ---------------------------------------------------------------- #
# helpers
# ---------------------------------------------------------------- #


class TestHelpers:
    def test_delimiter_by_extension(self) -> None:
        """Tab extensions switch to tab, everything else is comma."""
        assert delimiter_for("x.tsv") == "\t"
        assert delimiter_for("x.tab") == "\t"
        assert delimiter_for("x.TSV") == "\t"
        assert delimiter_for("x.csv") == ","
        assert delimiter_for("x.txt") == ","

    def test_default_ids(self) -> None:
        """Generated ids are prefix plus index."""
        assert default_ids("f", 3) == ["f0", "f1", "f2"]
        assert default_ids("s", 0) == []

    def test_format_roundtrips_floats(self) -> None:
        """17 significant digits reproduce the exact bits."""
        rng = np.random.default_rng(0)
        for v in rng.standard_normal(200):
            assert float(format_value(v)) == v

    def test_format_special_values(self) -> None:
        """NaN and infinities use their literal spellings."""
        assert format_value(float("nan")) == "nan"
        assert format_value(float("inf")) == "inf"
        assert format_value(float("-inf")) == "-inf"


# ---------------------------------------------------------------- #
# round trips
# ---------------------------------------------------------------- #


class TestRoundTrip:
    def test_csv_roundtrip_bit_exact(self, tmp_path) -> None:
        """Write then read reproduces values, ids, and NaN bits."""
        rng = np.random.default_rng(1)
        values = rng.standard_normal((7, 5))
        values[rng.random((7, 5)) < 0.2] = np.nan
        path = str(tmp_path / "m.csv")
        write_matrix(path, values, ["a", "b", "c", "d", "e", "f", "g"])
        back, row_ids, col_ids = read_matrix(path)
        assert roundtrip_equal(values, back)
        assert row_ids == ["a", "b", "c", "d", "e", "f", "g"]
        assert col_ids == ["s0", "s1", "s2", "s3", "s4"]

    def test_tsv_roundtrip(self, tmp_path) -> None:
        """The tab flavor round-trips the same way."""
        values = np.array([[1.5, np.nan], [-0.25, 3e-300]])
        path = str(tmp_path / "m.tsv")
        write_matrix(path, values, ["r0", "r1"], ["c0", "c1"])
        back, row_ids, col_ids = read_matrix(path)
        assert roundtrip_equal(values, back)
        assert row_ids == ["r0", "r1"]
        assert col_ids == ["c0", "c1"]

    def test_header_corner_is_empty(self, tmp_path) -> None:
        """The header row starts with an empty corner cell."""
        path = str(tmp_path / "m.csv")
        write_matrix(path, np.zeros((1, 2)))
        with open(path) as handle:
            header = handle.readline().rstrip("\n")
        assert header == ",s0,s1"

    def test_unix_newlines(self, tmp_path) -> None:
        """Files use plain line feeds."""
        path = str(tmp_path / "m.csv")
        write_matrix(path, np.zeros((2, 2)))
        with open(path, "rb") as handle:
            raw = handle.read()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_infinities_roundtrip(self, tmp_path) -> None:
        """Signed infinities survive a round trip."""
        values = np.array([[np.inf, -np.inf, 0.0]])
        path = str(tmp_path / "m.csv")
        write_matrix(path, values)
        back, _, _ = read_matrix(path)
        assert roundtrip_equal(values, back)


# ---------------------------------------------------------------- #
# reading errors
# ---------------------------------------------------------------- #


class TestReadErrors:
    def test_malformed_cell_reports_position(self, tmp_path) -> None:
        """A non-numeric cell names its row, column, and file."""
        path = str(tmp_path / "bad.csv")
        with open(path, "w") as handle:
            handle.write(",s0,s1\nf0,1.0,oops\n")
        with pytest.raises(ValueError, match="row 2, column 2"):
            read_matrix(path)

    def test_ragged_row_rejected(self, tmp_path) -> None:
        """A short row is reported with its counts."""
        path = str(tmp_path / "ragged.csv")
        with open(path, "w") as handle:
            handle.write(",s0,s1,s2\nf0,1,2,3\nf1,4,5\n")
        with pytest.raises(ValueError, match="row 3 has 2 values"):
            read_matrix(path)

    def test_empty_file_rejected(self, tmp_path) -> None:
        """A zero-byte file is rejected."""
        path = str(tmp_path / "empty.csv")
        open(path, "w").close()
        with pytest.raises(ValueError, match="empty"):
            read_matrix(path)

    def test_missing_file_raises_oserror(self, tmp_path) -> None:
        """A nonexistent path surfaces the OS error."""
        with pytest.raises(OSError):
            read_matrix(str(tmp_path / "nope.csv"))

    def test_nan_literal_parses(self, tmp_path) -> None:
        """The literal nan spelling reads back as NaN."""
        path = str(tmp_path / "m.csv")
        with open(path, "w") as handle:
            handle.write(",s0\nf0,nan\n")
        back, _, _ = read_matrix(path)
        assert np.isnan(back[0, 0])
