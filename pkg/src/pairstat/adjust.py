"""Matrix-level p-value adjustment: Bonferroni, BH, and BY.

The family of tests being corrected depends on the matrix shape.  For
a homogeneous (square, symmetric) result each unordered feature pair
was tested once, so the family is the strict upper triangle; adjusted
values are mirrored back and the diagonal becomes NaN, since a feature
against itself is not an actually performed test.  For mixed-type
results every cell is its own test and the family is the whole matrix.

NaN p-values mark tests that were undefined on their data; they do not
count toward the family size and stay NaN after adjustment.
"""

from __future__ import annotations

import numpy as np

from .errors import NonSquareSymmetric, UnknownMethod

METHODS = ("bonferroni", "bh", "by")


def _adjust_family(p: np.ndarray, method: str) -> np.ndarray:
    """Adjust one flat family of p-values, passing NaN entries through."""
    out = np.full(p.shape, np.nan)
    defined = np.flatnonzero(~np.isnan(p))
    m = defined.size
    if m == 0:
        return out
    values = p[defined]
    if method == "bonferroni":
        out[defined] = np.minimum(1.0, m * values)
        return out
    scale = float(m)
    if method == "by":
        # Harmonic-sum inflation c(m) = sum_{i<=m} 1/i.
        scale *= (1.0 / np.arange(1, m + 1)).sum()
    order = np.argsort(values, kind="stable")
    ranked = values[order] * (scale / np.arange(1, m + 1))
    # Step-up: each entry takes the smallest value at or above its rank.
    stepped = np.minimum.accumulate(ranked[::-1])[::-1]
    out[defined[order]] = np.minimum(1.0, stepped)
    return out


def adjust(p_matrix: np.ndarray, method: str, symmetric: bool) -> np.ndarray:
    """Adjust a matrix of p-values for multiple testing.

    Args:
        p_matrix: 2-D array of raw p-values, NaN for undefined tests.
        method: ``bonferroni``, ``bh`` (Benjamini-Hochberg step-up), or
            ``by`` (Benjamini-Yekutieli).
        symmetric: True when the matrix holds one test per unordered
            feature pair, mirrored across the diagonal.

    Returns:
        A new matrix of adjusted p-values.  In the symmetric case the
        diagonal is NaN and the two triangles mirror each other.

    Raises:
        UnknownMethod: If ``method`` is not one of the three supported.
        NonSquareSymmetric: If ``symmetric`` is set but the matrix is
            not square.
    """
    if method not in METHODS:
        raise UnknownMethod(
            f"unknown adjustment method {method!r};"
            f" expected one of {METHODS}"
        )
    p_matrix = np.asarray(p_matrix, dtype=np.float64)
    if p_matrix.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {p_matrix.shape}")
    if not symmetric:
        flat = _adjust_family(p_matrix.ravel(), method)
        return flat.reshape(p_matrix.shape)
    n_rows, n_cols = p_matrix.shape
    if n_rows != n_cols:
        raise NonSquareSymmetric(
            f"symmetric adjustment needs a square matrix, got"
            f" {n_rows}x{n_cols}"
        )
    upper = np.triu_indices(n_rows, k=1)
    adjusted = _adjust_family(p_matrix[upper], method)
    out = np.full_like(p_matrix, np.nan)
    out[upper] = adjusted
    out[upper[1], upper[0]] = adjusted
    return out
