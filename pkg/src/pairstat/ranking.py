"""Per-feature presorting and tie-averaged ranking over joint subsets.

Nonparametric tests need ranks of a continuous feature restricted to
the samples that are also present in a partner feature.  Sorting inside
every pair would cost O(S log S) per pair; instead each feature is
sorted once (``presort_feature``) and the per-pair work reduces to one
linear walk over that order (``joint_ranks``), skipping samples the
partner is missing and averaging ranks over tied runs.

The walk also accumulates the tie term sum(t^3 - t) over tied groups,
which the asymptotic Mann-Whitney variance and the Kruskal-Wallis
statistic both need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .datamodel import present_mask

# ------------------------------------------------------------------ #
# Compiled kernels
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _presort(row, present):
    """Sort the present entries of one feature row, stably, ascending."""
    n_samples = row.size
    n = 0
    for i in range(n_samples):
        if present[i]:
            n += 1
    idx = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.float64)
    j = 0
    for i in range(n_samples):
        if present[i]:
            idx[j] = i
            vals[j] = row[i]
            j += 1
    # Stable sort so tied values keep their original sample order.
    perm = np.argsort(vals, kind="mergesort")
    order = np.empty(n, dtype=np.int64)
    sorted_values = np.empty(n, dtype=np.float64)
    for i in range(n):
        order[i] = idx[perm[i]]
        sorted_values[i] = vals[perm[i]]
    return order, sorted_values


@njit(cache=True, nogil=True)
def _rank_walk(order, sorted_values, mask):
    """Rank the subset of a presorted feature that ``mask`` retains.

    Walks the sort order once, drops samples absent in ``mask``, and
    assigns 1-based ranks with tied runs averaged.  Returns the kept
    sample indices (in value order), their ranks, the tie term
    sum(t^3 - t), and the subset size.
    """
    n_all = order.size
    kept = np.empty(n_all, dtype=np.int64)
    vals = np.empty(n_all, dtype=np.float64)
    n = 0
    for i in range(n_all):
        s = order[i]
        if mask[s]:
            kept[n] = s
            vals[n] = sorted_values[i]
            n += 1
    ranks = np.empty(n, dtype=np.float64)
    tie_term = 0.0
    i = 0
    while i < n:
        j = i + 1
        while j < n and vals[j] == vals[i]:
            j += 1
        avg = 0.5 * (i + 1 + j)
        for t in range(i, j):
            ranks[t] = avg
        run = j - i
        if run > 1:
            tie_term += float(run) * run * run - run
        i = j
    return kept[:n], ranks, tie_term, n


# ------------------------------------------------------------------ #
# Public API
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class RankedFeature:
    """Presorted view of one feature's non-missing entries.

    Attributes:
        order: Sample indices sorting the present values ascending,
            stable over ties.
        sorted_values: The values in that order (non-decreasing).
        n_present: Number of present entries.
    """

    order: np.ndarray
    sorted_values: np.ndarray
    n_present: int


def presort_feature(g: np.ndarray, sentinel: float = math.nan) -> RankedFeature:
    """Sort one feature row once for reuse across all its pairings.

    Args:
        g: Feature vector of length S.
        sentinel: Missing-value marker for ``g``.

    Returns:
        A ``RankedFeature`` over the non-missing entries.
    """
    g = np.ascontiguousarray(g, dtype=np.float64)
    order, sorted_values = _presort(g, present_mask(g, sentinel))
    return RankedFeature(
        order=order, sorted_values=sorted_values, n_present=int(order.size)
    )


def joint_ranks(
    a: RankedFeature, mask: np.ndarray
) -> tuple[np.ndarray, float, int]:
    """Rank a presorted feature over the samples ``mask`` retains.

    Args:
        a: Presorted feature.
        mask: Boolean per-sample presence of the partner feature,
            length S.

    Returns:
        Tuple of (ranks in ascending value order, tie term
        sum(t^3 - t) over tied groups, subset size n).
    """
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    _, ranks, tie_term, n = _rank_walk(a.order, a.sorted_values, mask)
    return ranks, float(tie_term), int(n)
