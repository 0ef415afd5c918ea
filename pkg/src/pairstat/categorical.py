"""Chi-squared independence test between categorical feature pairs.

A contingency table over the declared category ranges is filled in one
pass over the jointly present samples.  Declared means taken from the
full column at ingestion: when pairwise removal empties any such
category in either feature the test is undefined and every output is
NaN, because the table no longer reflects the feature's category
space.

No continuity correction is applied.  Effect sizes are phi, the root
mean chi-squared per sample, and Cramer's V, phi rescaled by the
smaller table dimension.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .datamodel import PairView
from .errors import LabelOutOfRange
from .specfun import chi2_sf

# ------------------------------------------------------------------ #
# Kernels
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _chi2_finish(table, c_g, c_h, n, row_sums, col_sums):
    """Turn a filled contingency table into (chi2, p, phi, V).

    ``table`` is a flat c_g x c_h count array; ``row_sums`` and
    ``col_sums`` are scratch buffers of length at least c_g and c_h.
    """
    if n == 0:
        return math.nan, math.nan, math.nan, math.nan
    for i in range(c_g):
        row_sums[i] = 0
    for j in range(c_h):
        col_sums[j] = 0
    for i in range(c_g):
        base = i * c_h
        for j in range(c_h):
            count = table[base + j]
            row_sums[i] += count
            col_sums[j] += count
    # A declared category that vanished under pairwise removal makes
    # the table unrepresentative of the feature: everything is NaN.
    for i in range(c_g):
        if row_sums[i] == 0:
            return math.nan, math.nan, math.nan, math.nan
    for j in range(c_h):
        if col_sums[j] == 0:
            return math.nan, math.nan, math.nan, math.nan
    chi2 = 0.0
    for i in range(c_g):
        base = i * c_h
        for j in range(c_h):
            expected = row_sums[i] * col_sums[j] / n
            if expected > 0.0:
                diff = table[base + j] - expected
                chi2 += diff * diff / expected
    phi = math.sqrt(chi2 / n)
    c_min = c_g if c_g < c_h else c_h
    if c_min < 2:
        # One-category features leave zero degrees of freedom.
        return chi2, math.nan, phi, math.nan
    dof = (c_g - 1.0) * (c_h - 1.0)
    p = chi2_sf(chi2, dof)
    v = math.sqrt(chi2 / (n * (c_min - 1.0)))
    return chi2, p, phi, v


@njit(cache=True, nogil=True)
def _chi2_rows(g, pg, h, ph, c_g, c_h, table, row_sums, col_sums):
    """Chi-squared over the jointly present samples of two label rows."""
    size = c_g * c_h
    for i in range(size):
        table[i] = 0
    n = 0
    for s in range(g.size):
        if pg[s] and ph[s]:
            a = int(g[s])
            b = int(h[s])
            if a < 0 or a >= c_g or b < 0 or b >= c_h:
                raise LabelOutOfRange(
                    "observed label is outside the declared category range"
                )
            table[a * c_h + b] += 1
            n += 1
    return _chi2_finish(table, c_g, c_h, n, row_sums, col_sums)


# ------------------------------------------------------------------ #
# Public API
# ------------------------------------------------------------------ #


def chi2_pair(
    view: PairView, c_g: int, c_h: int
) -> tuple[float, float, float, float]:
    """Chi-squared independence test of one jointly present pair view.

    Args:
        view: Pairs of integer labels, ``xs`` in [0, c_g) and ``ys``
            in [0, c_h).
        c_g: Category count of the first feature's full column.
        c_h: Category count of the second feature's full column.

    Returns:
        Tuple (chi2, p, phi, Cramer's V).  All NaN when the subset is
        empty or a declared category of either feature is absent from
        it; p and V alone are NaN for one-category features.

    Raises:
        LabelOutOfRange: If an observed label falls outside the
            declared range.
    """
    xs = np.ascontiguousarray(view.xs, dtype=np.float64)
    ys = np.ascontiguousarray(view.ys, dtype=np.float64)
    present = np.ones(xs.size, dtype=np.bool_)
    table = np.zeros(c_g * c_h, dtype=np.int64)
    row_sums = np.zeros(c_g, dtype=np.int64)
    col_sums = np.zeros(c_h, dtype=np.int64)
    chi2, p, phi, v = _chi2_rows(
        xs, present, ys, present, c_g, c_h, table, row_sums, col_sums
    )
    return float(chi2), float(p), float(phi), float(v)
