"""Group-versus-continuous tests: t, Mann-Whitney U, ANOVA, Kruskal-Wallis.

Each test consumes one labeled feature (dichotomous or categorical) and
one continuous feature.  The parametric tests accumulate per-group
counts, sums, and sums of squares in a single pass over the jointly
present samples; the rank tests walk a presorted continuous feature
once, averaging ranks over tied runs, so no pair ever sorts.

The exact Mann-Whitney U distribution is built by dynamic programming
over arrangement counts, which stays within 64-bit integers for group
totals up to 64 samples.  Undefined situations (empty groups, zero
variance, too few samples) return NaN rather than raising; genuinely
unusable configurations (exact mode with ties, an oversized exact
table) raise typed errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .datamodel import PairView, present_mask
from .errors import ExactModeWithTies, LabelOutOfRange, TableTooLarge
from .ranking import RankedFeature
from .specfun import chi2_sf, f_sf, normal_sf, t_sf

#: Largest n0 + n1 for which the exact U table is built.
EXACT_U_CAP = 64

#: Group-size threshold below which auto mode prefers the exact U test.
EXACT_U_AUTO_LIMIT = 8

_U_EXACT = 0
_U_ASYMPTOTIC = 1
_U_AUTO = 2

_U_MODE_CODES = {"exact": _U_EXACT, "asymptotic": _U_ASYMPTOTIC, "auto": _U_AUTO}

#: Relative tolerance for declaring group means equal when SSW is zero.
_MEAN_EQ_RTOL = 1e-12


# ------------------------------------------------------------------ #
# Group accumulation
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class GroupStats:
    """Single-pass per-group accumulators over one pair view.

    Attributes:
        counts: Per-group sample counts n_j, length k.
        sums: Per-group value sums, length k.
        sum_squares: Per-group sums of squared values, length k.
        k: Number of groups declared by the labeled feature's full
            column (not by the pairwise subset).
    """

    counts: np.ndarray
    sums: np.ndarray
    sum_squares: np.ndarray
    k: int

    @property
    def n(self) -> int:
        return int(self.counts.sum())


@njit(cache=True, nogil=True)
def _accumulate_groups(labels, values, k, counts, sums, sum_squares):
    """Accumulate n_j, sum_j, and sumsq_j for paired (label, value) data."""
    for j in range(k):
        counts[j] = 0
        sums[j] = 0.0
        sum_squares[j] = 0.0
    for i in range(labels.size):
        j = int(labels[i])
        if j < 0 or j >= k:
            raise LabelOutOfRange(
                "observed label is outside the declared category range"
            )
        counts[j] += 1
        v = values[i]
        sums[j] += v
        sum_squares[j] += v * v


def group_stats(labels: np.ndarray, values: np.ndarray, k: int) -> GroupStats:
    """Accumulate per-group statistics in one pass.

    Args:
        labels: Integer-valued group labels, paired with ``values``.
        values: Continuous values.
        k: Declared group count; labels must lie in [0, k).

    Returns:
        A ``GroupStats`` with per-group counts, sums, and sums of
        squares.

    Raises:
        LabelOutOfRange: If a label falls outside [0, k).
    """
    labels = np.ascontiguousarray(labels, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    counts = np.empty(k, dtype=np.int64)
    sums = np.empty(k, dtype=np.float64)
    sum_squares = np.empty(k, dtype=np.float64)
    _accumulate_groups(labels, values, k, counts, sums, sum_squares)
    return GroupStats(counts=counts, sums=sums, sum_squares=sum_squares, k=k)


# ------------------------------------------------------------------ #
# t-test
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _ttest_finish(n0, n1, sum0, sum1, ss0, ss1, student):
    """Turn group sums into (t, p, Cohen's D) with degenerate rules."""
    if n0 < 2 or n1 < 2 or n0 + n1 < 3:
        return math.nan, math.nan, math.nan
    mean0 = sum0 / n0
    mean1 = sum1 / n1
    var0 = (ss0 - sum0 * mean0) / (n0 - 1)
    var1 = (ss1 - sum1 * mean1) / (n1 - 1)
    # Guard against tiny negative values from cancellation.
    if var0 < 0.0:
        var0 = 0.0
    if var1 < 0.0:
        var1 = 0.0
    diff = mean0 - mean1
    if student:
        pooled = ((n0 - 1) * var0 + (n1 - 1) * var1) / (n0 + n1 - 2)
        if pooled == 0.0:
            return math.nan, math.nan, math.nan
        sp = math.sqrt(pooled)
        t = diff / (sp * math.sqrt(1.0 / n0 + 1.0 / n1))
        dof = float(n0 + n1 - 2)
        d = diff / sp
    else:
        if var0 + var1 == 0.0:
            return math.nan, math.nan, math.nan
        v0 = var0 / n0
        v1 = var1 / n1
        t = diff / math.sqrt(v0 + v1)
        dof = (v0 + v1) * (v0 + v1) / (
            v0 * v0 / (n0 - 1) + v1 * v1 / (n1 - 1)
        )
        d = diff / math.sqrt(0.5 * (var0 + var1))
    p = 2.0 * t_sf(abs(t), dof)
    if p > 1.0:
        p = 1.0
    return t, p, d


@njit(cache=True, nogil=True)
def _ttest_xy(labels, values, student):
    """t-test over paired (label, value) arrays."""
    n0 = 0
    n1 = 0
    sum0 = 0.0
    sum1 = 0.0
    ss0 = 0.0
    ss1 = 0.0
    for i in range(labels.size):
        v = values[i]
        if labels[i] == 0.0:
            n0 += 1
            sum0 += v
            ss0 += v * v
        else:
            n1 += 1
            sum1 += v
            ss1 += v * v
    return _ttest_finish(n0, n1, sum0, sum1, ss0, ss1, student)


@njit(cache=True, nogil=True)
def _ttest_rows(lab, lab_present, val, val_present, student):
    """t-test over the jointly present samples of two matrix rows."""
    n0 = 0
    n1 = 0
    sum0 = 0.0
    sum1 = 0.0
    ss0 = 0.0
    ss1 = 0.0
    for i in range(lab.size):
        if lab_present[i] and val_present[i]:
            v = val[i]
            if lab[i] == 0.0:
                n0 += 1
                sum0 += v
                ss0 += v * v
            else:
                n1 += 1
                sum1 += v
                ss1 += v * v
    return _ttest_finish(n0, n1, sum0, sum1, ss0, ss1, student)


def ttest_pair(view: PairView, variant: str = "student") -> tuple[float, float, float]:
    """Two-sample t-test of one jointly present pair view.

    Args:
        view: Pairs with ``xs`` holding 0/1 group labels and ``ys``
            the continuous values.
        variant: ``student`` (pooled variance) or ``welch``.

    Returns:
        Tuple (t, p, Cohen's D).  All three are NaN when either group
        has fewer than two samples, when the pooled standard deviation
        vanishes (Student), or when both variances vanish (Welch).
    """
    if variant not in ("student", "welch"):
        raise ValueError(f"unknown t-test variant {variant!r}")
    labels = np.ascontiguousarray(view.xs, dtype=np.float64)
    values = np.ascontiguousarray(view.ys, dtype=np.float64)
    t, p, d = _ttest_xy(labels, values, variant == "student")
    return float(t), float(p), float(d)


# ------------------------------------------------------------------ #
# Exact Mann-Whitney U distribution
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _exact_u_counts(n1, n2):
    """Arrangement counts f(n1, n2, u) for u = 0 .. n1*n2.

    Dynamic programming over the second group's size b:
    f(a, b, u) = f(a-1, b, u-b) + f(a, b-1, u), updated in place so
    row a-1 already holds the level-b values when row a is revised.
    """
    u_max = n1 * n2
    table = np.zeros((n1 + 1, u_max + 1), dtype=np.int64)
    for a in range(n1 + 1):
        table[a, 0] = 1
    for b in range(1, n2 + 1):
        for a in range(1, n1 + 1):
            for u in range(b, u_max + 1):
                table[a, u] += table[a - 1, u - b]
    return table[n1]


@dataclass(frozen=True)
class ExactUDistribution:
    """Exact null distribution of the Mann-Whitney U statistic.

    Attributes:
        counts: Arrangement counts over u = 0 .. n1*n2.
        n1: First group size.
        n2: Second group size.
    """

    counts: np.ndarray
    n1: int
    n2: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def p_two_sided(self, u: float) -> float:
        """Two-sided p: both tails folded onto the lower one."""
        u_max = self.n1 * self.n2
        u_low = int(round(min(u, u_max - u)))
        cum = int(self.counts[: u_low + 1].sum())
        return min(1.0, 2.0 * cum / self.total)


def exact_u_distribution(n1: int, n2: int) -> ExactUDistribution:
    """Build the exact U distribution for two tie-free groups.

    Args:
        n1: First group size, at least 1.
        n2: Second group size, at least 1.

    Returns:
        The ``ExactUDistribution`` of arrangement counts.

    Raises:
        TableTooLarge: If n1 + n2 exceeds the 64-sample cap, beyond
            which counts overflow 64-bit integers.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("group sizes must be at least 1")
    if n1 + n2 > EXACT_U_CAP:
        raise TableTooLarge(
            f"exact U table for groups {n1} and {n2} exceeds the"
            f" {EXACT_U_CAP}-sample cap"
        )
    return ExactUDistribution(counts=_exact_u_counts(n1, n2), n1=n1, n2=n2)


# ------------------------------------------------------------------ #
# Mann-Whitney U test
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _mwu_finish(n0, n1, r0, tie_term, mode):
    """Combine rank-walk accumulators into (U, p, effect r)."""
    if n0 == 0 or n1 == 0:
        return math.nan, math.nan, math.nan
    n = n0 + n1
    u = r0 - 0.5 * n0 * (n0 + 1)
    mu = 0.5 * n0 * n1
    diff = u - mu

    use_exact = False
    if mode == _U_EXACT:
        if tie_term != 0.0:
            raise ExactModeWithTies(
                "exact Mann-Whitney U mode requires tie-free data"
            )
        if n > EXACT_U_CAP:
            raise TableTooLarge(
                "exact Mann-Whitney U table exceeds the 64-sample cap"
            )
        use_exact = True
    elif mode == _U_AUTO:
        use_exact = (
            tie_term == 0.0
            and min(n0, n1) < EXACT_U_AUTO_LIMIT
            and n <= EXACT_U_CAP
        )

    # The standardized statistic also yields the effect size, so it is
    # computed in both modes.
    sigma_sq = (n0 * n1 / 12.0) * ((n + 1.0) - tie_term / (n * (n - 1.0)))
    if sigma_sq <= 0.0:
        return u, math.nan, math.nan
    z = (abs(diff) - 0.5) / math.sqrt(sigma_sq)
    if z < 0.0:
        z = 0.0
    if z == 0.0 or diff == 0.0:
        r = 0.0
    elif diff > 0.0:
        r = z / math.sqrt(n)
    else:
        r = -z / math.sqrt(n)

    if use_exact:
        counts = _exact_u_counts(n0, n1)
        u_max = n0 * n1
        u_low = int(round(min(u, u_max - u)))
        cum = 0
        total = 0
        for i in range(u_max + 1):
            total += counts[i]
            if i <= u_low:
                cum += counts[i]
        p = 2.0 * cum / total
    else:
        p = 2.0 * normal_sf(z)
    if p > 1.0:
        p = 1.0
    return u, p, r


@njit(cache=True, nogil=True)
def _mwu_rows(order, sorted_values, lab, lab_present, mode, cvals, clabs):
    """Mann-Whitney U over a presorted continuous row and a label row.

    Compacts the samples with an observed label into the caller-owned
    ``cvals`` and ``clabs`` scratch buffers (branch-free advance by the
    mask value), then accumulates the tie-averaged rank sum of group 0
    over the compacted run structure.
    """
    n_all = order.size
    m = 0
    for i in range(n_all):
        s = order[i]
        cvals[m] = sorted_values[i]
        clabs[m] = lab[s]
        m += 1 if lab_present[s] else 0
    n0 = 0
    n1 = 0
    r0 = 0.0
    tie_term = 0.0
    i = 0
    while i < m:
        v = cvals[i]
        j = i + 1
        while j < m and cvals[j] == v:
            j += 1
        run = j - i
        c0 = 0
        for t in range(i, j):
            c0 += 1 if clabs[t] == 0.0 else 0
        avg = 0.5 * (i + j + 1)
        r0 += avg * c0
        n0 += c0
        n1 += run - c0
        if run > 1:
            tie_term += float(run) * run * run - run
        i = j
    return _mwu_finish(n0, n1, r0, tie_term, mode)


def mwu_pair(
    cont: RankedFeature,
    labels: np.ndarray,
    mode: str = "auto",
    label_sentinel: float = math.nan,
) -> tuple[float, float, float]:
    """Mann-Whitney U test of a presorted continuous feature by labels.

    Args:
        cont: Presorted continuous feature.
        labels: Full-length 0/1 label vector with its own missingness.
        mode: ``exact``, ``asymptotic``, or ``auto``.  Auto picks the
            exact distribution for tie-free data when the smaller
            group has fewer than eight samples and the table fits.
        label_sentinel: Missing-value marker of the label vector.

    Returns:
        Tuple (U, p, effect r).  U is the rank-sum statistic of group
        0; r is the standardized statistic scaled by 1/sqrt(n), signed
        by U - n0*n1/2.

    Raises:
        ExactModeWithTies: If exact mode is forced on tied data.
        TableTooLarge: If exact mode is forced beyond the table cap.
    """
    if mode not in _U_MODE_CODES:
        raise ValueError(f"unknown U-test mode {mode!r}")
    labels = np.ascontiguousarray(labels, dtype=np.float64)
    lab_present = present_mask(labels, label_sentinel)
    size = labels.size
    u, p, r = _mwu_rows(
        cont.order,
        cont.sorted_values,
        labels,
        lab_present,
        _U_MODE_CODES[mode],
        np.empty(size, dtype=np.float64),
        np.empty(size, dtype=np.float64),
    )
    return float(u), float(p), float(r)


# ------------------------------------------------------------------ #
# One-way ANOVA
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _anova_finish(counts, sums, sum_squares, k):
    """Turn per-group sums into (F, p, partial eta squared)."""
    if k < 2:
        return math.nan, math.nan, math.nan
    n = 0
    total = 0.0
    for j in range(k):
        if counts[j] == 0:
            # A category present in the full column is empty here.
            return math.nan, math.nan, math.nan
        n += counts[j]
        total += sums[j]
    if n <= k:
        return math.nan, math.nan, math.nan
    grand_mean = total / n
    ssb = 0.0
    ssw = 0.0
    mean_lo = math.inf
    mean_hi = -math.inf
    mean_scale = 0.0
    for j in range(k):
        mean_j = sums[j] / counts[j]
        dev = mean_j - grand_mean
        ssb += counts[j] * dev * dev
        group_ssw = sum_squares[j] - sums[j] * mean_j
        if group_ssw > 0.0:
            ssw += group_ssw
        if mean_j < mean_lo:
            mean_lo = mean_j
        if mean_j > mean_hi:
            mean_hi = mean_j
        if abs(mean_j) > mean_scale:
            mean_scale = abs(mean_j)
    if ssw == 0.0:
        means_equal = (mean_hi - mean_lo) <= _MEAN_EQ_RTOL * mean_scale
        if means_equal:
            return math.nan, math.nan, math.nan
        return math.inf, 0.0, 1.0
    f = (ssb / (k - 1.0)) / (ssw / (n - k))
    p = f_sf(f, k - 1.0, float(n - k))
    eta = ssb / (ssb + ssw)
    return f, p, eta


@njit(cache=True, nogil=True)
def _anova_rows(lab, lab_present, val, val_present, k, counts, sums, ssqs):
    """ANOVA over the jointly present samples of two matrix rows.

    ``counts``, ``sums``, and ``ssqs`` are caller-owned scratch buffers
    of length at least k.
    """
    for j in range(k):
        counts[j] = 0
        sums[j] = 0.0
        ssqs[j] = 0.0
    for i in range(lab.size):
        if lab_present[i] and val_present[i]:
            j = int(lab[i])
            if j < 0 or j >= k:
                raise LabelOutOfRange(
                    "observed label is outside the declared category range"
                )
            v = val[i]
            counts[j] += 1
            sums[j] += v
            ssqs[j] += v * v
    return _anova_finish(counts, sums, ssqs, k)


def anova_pair(view: PairView, k: int) -> tuple[float, float, float]:
    """One-way ANOVA of one jointly present pair view.

    Args:
        view: Pairs with ``xs`` holding integer labels in [0, k) and
            ``ys`` the continuous values.
        k: Category count declared by the labeled feature's full
            column.

    Returns:
        Tuple (F, p, partial eta squared).  All NaN when any declared
        category is empty in the subset, when n <= k, or when both the
        within and between variation vanish; F is +inf with p = 0 when
        only the within variation vanishes.
    """
    stats = group_stats(view.xs, view.ys, k)
    f, p, eta = _anova_finish(
        stats.counts, stats.sums, stats.sum_squares, k
    )
    return float(f), float(p), float(eta)


# ------------------------------------------------------------------ #
# Kruskal-Wallis
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _kruskal_finish(rank_sums, counts, k, tie_term):
    """Turn per-group rank sums into (H, p, eta squared)."""
    n = 0
    for j in range(k):
        if counts[j] == 0:
            return math.nan, math.nan, math.nan
        n += counts[j]
    if n < 2:
        return math.nan, math.nan, math.nan
    tie_denominator = 1.0 - tie_term / (float(n) * n * n - n)
    if tie_denominator <= 0.0:
        # Every retained value is identical.
        return math.nan, math.nan, math.nan
    h = 0.0
    for j in range(k):
        h += rank_sums[j] * rank_sums[j] / counts[j]
    h = (12.0 / (n * (n + 1.0))) * h - 3.0 * (n + 1.0)
    h /= tie_denominator
    if h < 0.0:
        # Rounding can push the theoretical minimum of 0 slightly under.
        h = 0.0
    if k < 2:
        return h, math.nan, math.nan
    p = chi2_sf(h, k - 1.0)
    if n <= k:
        return h, p, math.nan
    eta = (h - k + 1.0) / (n - k)
    return h, p, eta


@njit(cache=True, nogil=True)
def _kruskal_rows(
    order, sorted_values, lab, lab_present, k, rank_sums, counts, cvals, clabs
):
    """Kruskal-Wallis over a presorted continuous row and a label row.

    ``rank_sums`` and ``counts`` are caller-owned scratch buffers of
    length at least k; ``cvals`` and ``clabs`` are full-sample-length
    scratch buffers that receive the compacted (observed-label) values
    and labels before the rank walk.
    """
    for j in range(k):
        rank_sums[j] = 0.0
        counts[j] = 0
    n_all = order.size
    m = 0
    for i in range(n_all):
        s = order[i]
        cvals[m] = sorted_values[i]
        clabs[m] = lab[s]
        m += 1 if lab_present[s] else 0
    tie_term = 0.0
    i = 0
    while i < m:
        v = cvals[i]
        j = i + 1
        while j < m and cvals[j] == v:
            j += 1
        run = j - i
        avg = 0.5 * (i + j + 1)
        for t in range(i, j):
            g = int(clabs[t])
            if g < 0 or g >= k:
                raise LabelOutOfRange(
                    "observed label is outside the declared category"
                    " range"
                )
            rank_sums[g] += avg
            counts[g] += 1
        if run > 1:
            tie_term += float(run) * run * run - run
        i = j
    return _kruskal_finish(rank_sums, counts, k, tie_term)


def kruskal_pair(
    cont: RankedFeature,
    labels: np.ndarray,
    k: int,
    label_sentinel: float = math.nan,
) -> tuple[float, float, float]:
    """Kruskal-Wallis test of a presorted continuous feature by labels.

    Args:
        cont: Presorted continuous feature.
        labels: Full-length label vector in [0, k) with its own
            missingness.
        k: Category count declared by the labeled feature's full
            column.
        label_sentinel: Missing-value marker of the label vector.

    Returns:
        Tuple (H, p, eta squared).  All NaN when a declared category is
        empty in the subset or all values are tied; eta squared alone
        is NaN when n <= k; p and eta squared are NaN when k == 1.
    """
    labels = np.ascontiguousarray(labels, dtype=np.float64)
    lab_present = present_mask(labels, label_sentinel)
    rank_sums = np.zeros(k, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    size = labels.size
    h, p, eta = _kruskal_rows(
        cont.order,
        cont.sorted_values,
        labels,
        lab_present,
        k,
        rank_sums,
        counts,
        np.empty(size, dtype=np.float64),
        np.empty(size, dtype=np.float64),
    )
    return float(h), float(p), float(eta)
