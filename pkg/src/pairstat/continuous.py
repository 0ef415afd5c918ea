"""Pearson and Spearman correlation kernels with pairwise deletion.

Both tests reduce to a product-moment correlation: Pearson over the raw
values, Spearman over tie-averaged joint ranks obtained from presorted
features.  The kernels accumulate centered sums in two passes over the
jointly present samples, so no pair ever allocates or copies data.

P-values follow the classical distributional forms: the symmetric beta
tail for Pearson and the t transform for Spearman.  Undefined cases
(too few samples, zero variance) return NaN instead of raising.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .datamodel import PairView, present_mask
from .ranking import RankedFeature
from .specfun import beta_sym_sf, t_sf

# ------------------------------------------------------------------ #
# Pearson
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _pearson_finish(n, sxx, syy, sxy):
    """Turn centered sums into (r, p) with the degenerate rules applied."""
    if n <= 1:
        return math.nan, math.nan
    if sxx <= 0.0 or syy <= 0.0:
        # A constant vector has no defined correlation.
        return math.nan, math.nan
    r = sxy / math.sqrt(sxx * syy)
    # Clamp against rounding overshoot before the tail evaluation.
    if r > 1.0:
        r = 1.0
    elif r < -1.0:
        r = -1.0
    if n == 2:
        # r is forced to +-1 but the beta shape n/2 - 1 vanishes.
        return r, math.nan
    p = 2.0 * beta_sym_sf(abs(r), 0.5 * n - 1.0)
    if p > 1.0:
        p = 1.0
    return r, p


@njit(cache=True, nogil=True)
def _pearson_xy(xs, ys):
    """Pearson r and p over fully paired arrays."""
    n = xs.size
    if n <= 1:
        return math.nan, math.nan
    sum_x = 0.0
    sum_y = 0.0
    for i in range(n):
        sum_x += xs[i]
        sum_y += ys[i]
    mean_x = sum_x / n
    mean_y = sum_y / n
    sxx = 0.0
    syy = 0.0
    sxy = 0.0
    for i in range(n):
        dx = xs[i] - mean_x
        dy = ys[i] - mean_y
        sxx += dx * dx
        syy += dy * dy
        sxy += dx * dy
    return _pearson_finish(n, sxx, syy, sxy)


@njit(cache=True, nogil=True)
def _pearson_rows(xg, pg, xh, ph):
    """Pearson r and p over the jointly present samples of two rows."""
    size = xg.size
    n = 0
    sum_x = 0.0
    sum_y = 0.0
    for i in range(size):
        if pg[i] and ph[i]:
            n += 1
            sum_x += xg[i]
            sum_y += xh[i]
    if n <= 1:
        return math.nan, math.nan
    mean_x = sum_x / n
    mean_y = sum_y / n
    sxx = 0.0
    syy = 0.0
    sxy = 0.0
    for i in range(size):
        if pg[i] and ph[i]:
            dx = xg[i] - mean_x
            dy = xh[i] - mean_y
            sxx += dx * dx
            syy += dy * dy
            sxy += dx * dy
    return _pearson_finish(n, sxx, syy, sxy)


def pearson_pair(view: PairView) -> tuple[float, float]:
    """Pearson correlation of one jointly present pair view.

    Args:
        view: Retained (x, y) pairs of two continuous features.

    Returns:
        Tuple (r, p).  r is NaN for n <= 1 or zero variance; p is NaN
        whenever r is, and additionally for n == 2 where the beta
        shape parameter n/2 - 1 leaves the distribution's domain.
    """
    xs = np.ascontiguousarray(view.xs, dtype=np.float64)
    ys = np.ascontiguousarray(view.ys, dtype=np.float64)
    r, p = _pearson_xy(xs, ys)
    return float(r), float(p)


# ------------------------------------------------------------------ #
# Spearman
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _scatter_ranks(order, sorted_values, partner_mask, out_ranks, out_kept, out_vals):
    """Write tie-averaged joint ranks into per-sample buffers.

    Walks a presorted feature and compacts the samples the partner also
    observes into ``out_kept`` (sample indices) and ``out_vals``
    (values), then assigns each kept sample's rank at its sample
    position in ``out_ranks``.  The compaction writes unconditionally
    and advances by the mask value, so the hot loop carries no
    data-dependent branch.  Returns (n, tie term).
    """
    n_all = order.size
    n = 0
    for i in range(n_all):
        s = order[i]
        out_kept[n] = s
        out_vals[n] = sorted_values[i]
        n += 1 if partner_mask[s] else 0
    tie_term = 0.0
    i = 0
    while i < n:
        v = out_vals[i]
        j = i + 1
        while j < n and out_vals[j] == v:
            j += 1
        run = j - i
        avg = 0.5 * (i + j + 1)
        for k in range(i, j):
            out_ranks[out_kept[k]] = avg
        if run > 1:
            tie_term += float(run) * run * run - run
        i = j
    return n, tie_term


@njit(cache=True, nogil=True)
def _spearman_rows(
    order_g, svals_g, pg, order_h, svals_h, ph, rank_g, rank_h, kept, vals
):
    """Spearman rho and p from two presorted rows and their masks.

    ``rank_g``, ``rank_h``, ``kept`` and ``vals`` are caller-owned
    scratch buffers of the full sample length.
    """
    n, _ = _scatter_ranks(order_g, svals_g, ph, rank_g, kept, vals)
    _scatter_ranks(order_h, svals_h, pg, rank_h, kept, vals)
    if n <= 1:
        return math.nan, math.nan
    # Tie averaging preserves the rank total, so the mean is exact.
    mean = 0.5 * (n + 1)
    sxx = 0.0
    syy = 0.0
    sxy = 0.0
    for i in range(n):
        s = kept[i]
        dx = rank_g[s] - mean
        dy = rank_h[s] - mean
        sxx += dx * dx
        syy += dy * dy
        sxy += dx * dy
    if sxx <= 0.0 or syy <= 0.0:
        return math.nan, math.nan
    rho = sxy / math.sqrt(sxx * syy)
    if rho > 1.0:
        rho = 1.0
    elif rho < -1.0:
        rho = -1.0
    if n == 2:
        return rho, math.nan
    if rho == 1.0 or rho == -1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2.0) / (1.0 - rho * rho))
    p = 2.0 * t_sf(abs(t), n - 2.0)
    if p > 1.0:
        p = 1.0
    return rho, p


def spearman_pair(
    g: RankedFeature,
    h: RankedFeature,
    present_g: np.ndarray,
    present_h: np.ndarray,
) -> tuple[float, float]:
    """Spearman rank correlation of two presorted features.

    Args:
        g: Presorted first feature.
        h: Presorted second feature.
        present_g: Boolean per-sample presence of the first feature.
        present_h: Boolean per-sample presence of the second feature.

    Returns:
        Tuple (rho, p) with the same NaN protocol as ``pearson_pair``.
    """
    present_g = np.ascontiguousarray(present_g, dtype=np.bool_)
    present_h = np.ascontiguousarray(present_h, dtype=np.bool_)
    size = present_g.size
    rank_g = np.empty(size, dtype=np.float64)
    rank_h = np.empty(size, dtype=np.float64)
    kept = np.empty(size, dtype=np.int64)
    vals = np.empty(size, dtype=np.float64)
    rho, p = _spearman_rows(
        g.order,
        g.sorted_values,
        present_g,
        h.order,
        h.sorted_values,
        present_h,
        rank_g,
        rank_h,
        kept,
        vals,
    )
    return float(rho), float(p)


def spearman_from_values(
    g: np.ndarray,
    h: np.ndarray,
    sentinel_g: float = math.nan,
    sentinel_h: float = math.nan,
) -> tuple[float, float]:
    """Convenience wrapper: presort two raw vectors and correlate them."""
    from .ranking import presort_feature

    return spearman_pair(
        presort_feature(g, sentinel_g),
        presort_feature(h, sentinel_h),
        present_mask(np.asarray(g, dtype=np.float64), sentinel_g),
        present_mask(np.asarray(h, dtype=np.float64), sentinel_h),
    )
