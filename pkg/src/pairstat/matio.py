"""Delimited matrix files with feature and sample identifiers.

The on-disk layout is a plain delimited table: the header row holds
column identifiers (sample ids for inputs, feature ids for outputs)
behind an empty corner cell, and each data row starts with its row
identifier.  Values are serialized with 17 significant digits, which
round-trips every finite float64 bit-exactly; NaN is the literal
``nan`` and infinities are ``inf``/``-inf``.

The delimiter follows the file extension: ``.tsv`` and ``.tab`` mean
tab, anything else means comma.
"""

from __future__ import annotations

import os

import numpy as np

#: File extensions that switch the delimiter to tab.
_TAB_EXTENSIONS = (".tsv", ".tab")


def delimiter_for(path: str) -> str:
    """Delimiter implied by a file name's extension."""
    ext = os.path.splitext(path)[1].lower()
    return "\t" if ext in _TAB_EXTENSIONS else ","


def format_value(value: float) -> str:
    """Serialize one float at full round-trip precision."""
    return f"{value:.17g}"


def default_ids(prefix: str, count: int) -> list[str]:
    """Generated identifiers f0..fN or s0..sN."""
    return [f"{prefix}{i}" for i in range(count)]


def write_matrix(
    path: str,
    values: np.ndarray,
    row_ids: list[str] | None = None,
    col_ids: list[str] | None = None,
    delimiter: str | None = None,
) -> None:
    """Write one matrix with identifiers to a delimited text file.

    Args:
        path: Output file path; its extension picks the delimiter
            unless one is given explicitly.
        values: 2-D float array.
        row_ids: Row identifiers; defaults to f0..fN.
        col_ids: Column identifiers; defaults to s0..sN.
        delimiter: Field separator override.
    """
    values = np.asarray(values, dtype=np.float64)
    n_rows, n_cols = values.shape
    if row_ids is None:
        row_ids = default_ids("f", n_rows)
    if col_ids is None:
        col_ids = default_ids("s", n_cols)
    sep = delimiter_for(path) if delimiter is None else delimiter
    lines = [sep.join([""] + list(col_ids))]
    for i in range(n_rows):
        cells = [row_ids[i]]
        cells.extend(format_value(v) for v in values[i])
        lines.append(sep.join(cells))
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines))
        handle.write("\n")


def read_matrix(
    path: str, delimiter: str | None = None
) -> tuple[np.ndarray, list[str], list[str]]:
    """Read one matrix with identifiers from a delimited text file.

    Args:
        path: Input file path; its extension picks the delimiter
            unless one is given explicitly.
        delimiter: Field separator override.

    Returns:
        Tuple of (float64 matrix, row identifiers, column identifiers).

    Raises:
        ValueError: For an empty file, ragged rows, or a cell that does
            not parse as a float (reported with its row and column).
        OSError: If the file cannot be read.
    """
    sep = delimiter_for(path) if delimiter is None else delimiter
    with open(path, "r", newline="") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty matrix file")
    header = lines[0].split(sep)
    col_ids = header[1:]
    n_cols = len(col_ids)
    row_ids: list[str] = []
    rows: list[list[float]] = []
    for i, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split(sep)
        if len(cells) != n_cols + 1:
            raise ValueError(
                f"{path}: row {i} has {len(cells) - 1} values, expected"
                f" {n_cols}"
            )
        row_ids.append(cells[0])
        parsed = []
        for j, cell in enumerate(cells[1:], start=1):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ValueError(
                    f"{path}: malformed numeric cell at row {i},"
                    f" column {j}: {cell!r}"
                ) from None
        rows.append(parsed)
    values = np.array(rows, dtype=np.float64)
    if values.size == 0:
        values = values.reshape(0, n_cols)
    return values, row_ids, col_ids


def roundtrip_equal(a: np.ndarray, b: np.ndarray) -> bool:
    """True when two float matrices match bit for bit (NaNs included)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        return False
    return bool((a.view(np.int64) == b.view(np.int64)).all())


__all__ = [
    "default_ids",
    "delimiter_for",
    "format_value",
    "read_matrix",
    "roundtrip_equal",
    "write_matrix",
]
