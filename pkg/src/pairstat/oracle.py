"""Naive per-pair reference implementations of every test.

These functions exist to be obviously correct, not fast.  Each one
filters its pair from scratch, sorts or ranks with scipy, and applies
the textbook formula directly, taking p-values from scipy's
distributions.  They share no arithmetic with the compiled kernels:
sums are numpy two-pass reductions, ranks come from
``scipy.stats.rankdata``, and the exact Mann-Whitney tail comes from
scipy's enumeration.  A differential test that compares the fast path
against these would be blind to any bug the two sides shared.

``oracle_run`` wraps the per-pair functions in a single-threaded loop
over a whole matrix so the benchmark command can time the naive
baseline against the engine.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy import stats

from .adjust import adjust
from .datamodel import (
    EFFECTS_BY_TEST,
    KINDS_BY_TEST,
    DataMatrix,
    ResultSet,
    TestRequest,
)
from .errors import (
    ExactModeWithTies,
    KindMismatch,
    SampleCountMismatch,
    TableTooLarge,
    TooLarge,
)

#: Auto mode switches to the exact U distribution below this group size.
_EXACT_GROUP_LIMIT = 8

#: Exact U enumeration is refused beyond this many total samples.
_EXACT_TOTAL_CAP = 64


# ------------------------------------------------------------------ #
# Pairwise filtering
# ------------------------------------------------------------------ #


def _missing(values: np.ndarray, sentinel: float) -> np.ndarray:
    """Per-entry missingness under the sentinel convention."""
    if math.isnan(sentinel):
        return np.isnan(values)
    # Numeric equality plus sign-bit agreement is bit-exactness for
    # every non-NaN value (the two differ only on signed zeros).
    return (values == sentinel) & (
        np.signbit(values) == np.signbit(sentinel)
    )


def _paired(
    x, y, sentinel_x: float, sentinel_y: float
) -> tuple[np.ndarray, np.ndarray]:
    """Keep the sample positions where both entries are present."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    keep = ~_missing(x, sentinel_x) & ~_missing(y, sentinel_y)
    return x[keep], y[keep]


def _declared_categories(values, sentinel: float) -> int:
    """Category count of a full label column: highest label plus one."""
    values = np.asarray(values, dtype=np.float64)
    present = values[~_missing(values, sentinel)]
    if present.size == 0:
        return 0
    return int(present.max()) + 1


# ------------------------------------------------------------------ #
# Continuous tests
# ------------------------------------------------------------------ #


def oracle_pearson(
    x, y, sentinel_x: float = math.nan, sentinel_y: float = math.nan
) -> tuple[float, float]:
    """Pearson correlation of one pair, straight from the definition."""
    xs, ys = _paired(x, y, sentinel_x, sentinel_y)
    n = xs.size
    if n < 2:
        return math.nan, math.nan
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx <= 0.0 or syy <= 0.0:
        return math.nan, math.nan
    r = float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))
    if n == 2:
        return r, math.nan
    shape = 0.5 * n - 1.0
    p = min(1.0, 2.0 * float(stats.beta.cdf(0.5 * (1.0 - abs(r)), shape, shape)))
    return r, p


def oracle_spearman(
    x, y, sentinel_x: float = math.nan, sentinel_y: float = math.nan
) -> tuple[float, float]:
    """Spearman correlation: Pearson formula over scipy's ranks."""
    xs, ys = _paired(x, y, sentinel_x, sentinel_y)
    n = xs.size
    if n < 2:
        return math.nan, math.nan
    rx = stats.rankdata(xs)
    ry = stats.rankdata(ys)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx <= 0.0 or syy <= 0.0:
        return math.nan, math.nan
    rho = float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))
    if n == 2:
        return rho, math.nan
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2.0) / (1.0 - rho * rho))
    p = min(1.0, 2.0 * float(stats.t.sf(abs(t), n - 2)))
    return rho, p


# ------------------------------------------------------------------ #
# Categorical test
# ------------------------------------------------------------------ #


def oracle_chi2(
    x,
    y,
    c_x: int | None = None,
    c_y: int | None = None,
    sentinel_x: float = math.nan,
    sentinel_y: float = math.nan,
) -> tuple[float, float, float, float]:
    """Chi-squared independence test of one labeled pair.

    Category counts default to those declared by the full columns.
    """
    if c_x is None:
        c_x = _declared_categories(x, sentinel_x)
    if c_y is None:
        c_y = _declared_categories(y, sentinel_y)
    xs, ys = _paired(x, y, sentinel_x, sentinel_y)
    n = xs.size
    if n == 0 or c_x == 0 or c_y == 0:
        return math.nan, math.nan, math.nan, math.nan
    table = np.zeros((c_x, c_y))
    np.add.at(table, (xs.astype(np.int64), ys.astype(np.int64)), 1.0)
    row_sums = table.sum(axis=1)
    col_sums = table.sum(axis=0)
    if (row_sums == 0).any() or (col_sums == 0).any():
        # A declared category is empty in this pairwise subset.
        return math.nan, math.nan, math.nan, math.nan
    expected = np.outer(row_sums, col_sums) / n
    with np.errstate(invalid="ignore", divide="ignore"):
        terms = np.where(
            expected > 0, (table - expected) ** 2 / expected, 0.0
        )
    chi2 = float(terms.sum())
    phi = math.sqrt(chi2 / n)
    c_min = min(c_x, c_y)
    if c_min < 2:
        return chi2, math.nan, phi, math.nan
    p = float(stats.chi2.sf(chi2, (c_x - 1) * (c_y - 1)))
    v = math.sqrt(chi2 / (n * (c_min - 1)))
    return chi2, p, phi, v


# ------------------------------------------------------------------ #
# Mixed tests
# ------------------------------------------------------------------ #


def oracle_ttest(
    labels,
    values,
    variant: str = "student",
    sentinel_labels: float = math.nan,
    sentinel_values: float = math.nan,
) -> tuple[float, float, float]:
    """Two-sample t-test of one labeled pair, textbook formulas."""
    labs, vals = _paired(labels, values, sentinel_labels, sentinel_values)
    group0 = vals[labs == 0.0]
    group1 = vals[labs != 0.0]
    n0, n1 = group0.size, group1.size
    if n0 < 2 or n1 < 2 or n0 + n1 < 3:
        return math.nan, math.nan, math.nan
    var0 = float(np.var(group0, ddof=1))
    var1 = float(np.var(group1, ddof=1))
    diff = float(group0.mean() - group1.mean())
    if variant == "student":
        pooled = ((n0 - 1) * var0 + (n1 - 1) * var1) / (n0 + n1 - 2)
        if pooled == 0.0:
            return math.nan, math.nan, math.nan
        sp = math.sqrt(pooled)
        t = diff / (sp * math.sqrt(1.0 / n0 + 1.0 / n1))
        dof = n0 + n1 - 2.0
        d = diff / sp
    else:
        if var0 + var1 == 0.0:
            return math.nan, math.nan, math.nan
        v0 = var0 / n0
        v1 = var1 / n1
        t = diff / math.sqrt(v0 + v1)
        dof = (v0 + v1) ** 2 / (v0**2 / (n0 - 1) + v1**2 / (n1 - 1))
        d = diff / math.sqrt(0.5 * (var0 + var1))
    p = min(1.0, 2.0 * float(stats.t.sf(abs(t), dof)))
    return t, p, d


def oracle_mwu(
    labels,
    values,
    mode: str = "auto",
    sentinel_labels: float = math.nan,
    sentinel_values: float = math.nan,
) -> tuple[float, float, float]:
    """Mann-Whitney U test of one labeled pair.

    The exact branch takes its p-value from scipy's enumeration; the
    asymptotic branch applies the tie-corrected normal approximation
    with continuity correction.
    """
    labs, vals = _paired(labels, values, sentinel_labels, sentinel_values)
    group0 = vals[labs == 0.0]
    group1 = vals[labs != 0.0]
    n0, n1 = group0.size, group1.size
    if n0 == 0 or n1 == 0:
        return math.nan, math.nan, math.nan
    n = n0 + n1
    ranks = stats.rankdata(vals)
    r0 = float(ranks[labs == 0.0].sum())
    u = r0 - 0.5 * n0 * (n0 + 1)
    mu = 0.5 * n0 * n1
    _, tie_counts = np.unique(vals, return_counts=True)
    tie_term = float((tie_counts.astype(np.float64) ** 3 - tie_counts).sum())

    if mode == "exact":
        if tie_term != 0.0:
            raise ExactModeWithTies(
                "exact Mann-Whitney U mode requires tie-free data"
            )
        if n > _EXACT_TOTAL_CAP:
            raise TableTooLarge(
                "exact Mann-Whitney U table exceeds the 64-sample cap"
            )
        use_exact = True
    elif mode == "auto":
        use_exact = (
            tie_term == 0.0
            and min(n0, n1) < _EXACT_GROUP_LIMIT
            and n <= _EXACT_TOTAL_CAP
        )
    else:
        use_exact = False

    sigma_sq = (n0 * n1 / 12.0) * ((n + 1.0) - tie_term / (n * (n - 1.0)))
    if sigma_sq <= 0.0:
        return u, math.nan, math.nan
    diff = u - mu
    z = max(0.0, (abs(diff) - 0.5) / math.sqrt(sigma_sq))
    if z == 0.0 or diff == 0.0:
        r = 0.0
    else:
        r = math.copysign(z / math.sqrt(n), diff)

    if use_exact:
        p = float(
            stats.mannwhitneyu(
                group0, group1, alternative="two-sided", method="exact"
            ).pvalue
        )
    else:
        p = min(1.0, 2.0 * float(stats.norm.sf(z)))
    return u, p, r


def oracle_anova(
    labels,
    values,
    k: int | None = None,
    sentinel_labels: float = math.nan,
    sentinel_values: float = math.nan,
) -> tuple[float, float, float]:
    """One-way ANOVA of one labeled pair, textbook sums of squares."""
    if k is None:
        k = _declared_categories(labels, sentinel_labels)
    labs, vals = _paired(labels, values, sentinel_labels, sentinel_values)
    if k < 2:
        return math.nan, math.nan, math.nan
    groups = [vals[labs == j] for j in range(k)]
    if any(g.size == 0 for g in groups):
        return math.nan, math.nan, math.nan
    n = vals.size
    if n <= k:
        return math.nan, math.nan, math.nan
    grand = vals.mean()
    means = [g.mean() for g in groups]
    ssb = float(sum(g.size * (m - grand) ** 2 for g, m in zip(groups, means)))
    ssw = float(sum(((g - m) ** 2).sum() for g, m in zip(groups, means)))
    if ssw == 0.0:
        spread = max(means) - min(means)
        scale = max(abs(m) for m in means)
        if spread <= 1e-12 * scale:
            return math.nan, math.nan, math.nan
        return math.inf, 0.0, 1.0
    f = (ssb / (k - 1.0)) / (ssw / (n - k))
    p = float(stats.f.sf(f, k - 1, n - k))
    eta = ssb / (ssb + ssw)
    return f, p, eta


def oracle_kruskal(
    labels,
    values,
    k: int | None = None,
    sentinel_labels: float = math.nan,
    sentinel_values: float = math.nan,
) -> tuple[float, float, float]:
    """Kruskal-Wallis test of one labeled pair over scipy's ranks."""
    if k is None:
        k = _declared_categories(labels, sentinel_labels)
    labs, vals = _paired(labels, values, sentinel_labels, sentinel_values)
    if k == 0:
        return math.nan, math.nan, math.nan
    group_masks = [labs == j for j in range(k)]
    if any(not m.any() for m in group_masks):
        return math.nan, math.nan, math.nan
    n = vals.size
    if n < 2:
        return math.nan, math.nan, math.nan
    _, tie_counts = np.unique(vals, return_counts=True)
    tie_term = float((tie_counts.astype(np.float64) ** 3 - tie_counts).sum())
    denominator = 1.0 - tie_term / (float(n) ** 3 - n)
    if denominator <= 0.0:
        return math.nan, math.nan, math.nan
    ranks = stats.rankdata(vals)
    h = 0.0
    for mask in group_masks:
        rank_sum = float(ranks[mask].sum())
        h += rank_sum * rank_sum / mask.sum()
    h = (12.0 / (n * (n + 1.0))) * h - 3.0 * (n + 1.0)
    h = max(0.0, h / denominator)
    if k < 2:
        return h, math.nan, math.nan
    p = float(stats.chi2.sf(h, k - 1))
    if n <= k:
        return h, p, math.nan
    eta = (h - k + 1.0) / (n - k)
    return h, p, eta


# ------------------------------------------------------------------ #
# Exhaustive Mann-Whitney enumeration
# ------------------------------------------------------------------ #


def permutation_mwu(x0, x1, max_n: int = 12) -> Fraction:
    """Exact two-sided Mann-Whitney p by enumerating every assignment.

    Args:
        x0: First group's values (tie-free together with ``x1``).
        x1: Second group's values.
        max_n: Refuse enumeration beyond this many total samples.

    Returns:
        The two-sided p-value as an exact rational: twice the count of
        group assignments whose U falls in the observed minimum tail,
        over the total number of assignments, clamped to 1.

    Raises:
        TooLarge: If the total sample count exceeds ``max_n``.
        ValueError: If the combined values contain ties.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    x1 = np.asarray(x1, dtype=np.float64)
    n0, n1 = x0.size, x1.size
    n = n0 + n1
    if n > max_n:
        raise TooLarge(
            f"{n} samples exceed the enumeration limit of {max_n}"
        )
    combined = np.concatenate([x0, x1])
    if np.unique(combined).size != n:
        raise ValueError("enumeration requires tie-free values")
    ranks = stats.rankdata(combined)
    offset = n0 * (n0 + 1) // 2
    u_observed = int(round(float(ranks[:n0].sum()))) - offset
    u_tail = min(u_observed, n0 * n1 - u_observed)
    in_tail = 0
    total = 0
    for subset in combinations(range(n), n0):
        u = int(round(float(ranks[list(subset)].sum()))) - offset
        total += 1
        if u <= u_tail:
            in_tail += 1
    return min(Fraction(1), Fraction(2 * in_tail, total))


# ------------------------------------------------------------------ #
# Whole-matrix baseline engine
# ------------------------------------------------------------------ #


def oracle_run(
    request: TestRequest,
    mat_a: DataMatrix,
    mat_b: DataMatrix | None = None,
) -> ResultSet:
    """Run one test over whole matrices the slow way: pair by pair.

    Mirrors the engine's contract (same inputs, same output matrices)
    with a plain single-threaded double loop over the per-pair oracle
    functions.  Used as the benchmark baseline and in differential
    tests; never on a production path.
    """
    test = request.test
    expected_a, expected_b = KINDS_BY_TEST[test]
    homogeneous = expected_b is None
    label_kinds = ("categorical", "dichotomous")
    if homogeneous:
        if mat_b is not None:
            raise ValueError(f"test {test!r} takes a single matrix")
        ok = (
            mat_a.kind in label_kinds
            if expected_a == "categorical"
            else mat_a.kind == expected_a
        )
        if not ok:
            raise KindMismatch(
                f"test {test!r} needs a {expected_a} matrix, got {mat_a.kind}"
            )
        shape = (mat_a.n_features, mat_a.n_features)
    else:
        if mat_b is None:
            raise ValueError(f"test {test!r} needs a second, continuous matrix")
        ok = (
            mat_a.kind in label_kinds
            if expected_a == "categorical"
            else mat_a.kind == expected_a
        )
        if not ok or mat_b.kind != "continuous":
            raise KindMismatch(
                f"test {test!r} needs a {expected_a} first matrix and a"
                f" continuous second matrix, got {mat_a.kind} and"
                f" {mat_b.kind}"
            )
        if mat_a.n_samples != mat_b.n_samples:
            raise SampleCountMismatch(
                f"sample counts differ: first matrix has"
                f" {mat_a.n_samples}, second has {mat_b.n_samples}"
            )
        shape = (mat_a.n_features, mat_b.n_features)

    sentinel_a = mat_a.na_sentinel
    if test == "pearson":
        pair = lambda g, h: oracle_pearson(
            mat_a.values[g], mat_a.values[h], sentinel_a, sentinel_a
        )
    elif test == "spearman":
        pair = lambda g, h: oracle_spearman(
            mat_a.values[g], mat_a.values[h], sentinel_a, sentinel_a
        )
    elif test == "chi2":
        pair = lambda g, h: oracle_chi2(
            mat_a.values[g],
            mat_a.values[h],
            int(mat_a.category_counts[g]),
            int(mat_a.category_counts[h]),
            sentinel_a,
            sentinel_a,
        )
    else:
        sentinel_b = mat_b.na_sentinel
        if test == "ttest":
            pair = lambda g, h: oracle_ttest(
                mat_a.values[g],
                mat_b.values[h],
                request.t_variant,
                sentinel_a,
                sentinel_b,
            )
        elif test == "mwu":
            pair = lambda g, h: oracle_mwu(
                mat_a.values[g],
                mat_b.values[h],
                request.u_mode,
                sentinel_a,
                sentinel_b,
            )
        elif test == "anova":
            pair = lambda g, h: oracle_anova(
                mat_a.values[g],
                mat_b.values[h],
                int(mat_a.category_counts[g]),
                sentinel_a,
                sentinel_b,
            )
        else:
            pair = lambda g, h: oracle_kruskal(
                mat_a.values[g],
                mat_b.values[h],
                int(mat_a.category_counts[g]),
                sentinel_a,
                sentinel_b,
            )

    canonical = ("stat", "p") + EFFECTS_BY_TEST[test]
    computed = {name: np.full(shape, np.nan) for name in canonical}
    if homogeneous:
        for g in range(shape[0]):
            for h in range(g, shape[0]):
                result = pair(g, h)
                if test == "pearson":
                    result = result + (result[0] * result[0],)
                elif test == "spearman":
                    result = result + (result[0],)
                for name, value in zip(canonical, result):
                    computed[name][g, h] = value
                    computed[name][h, g] = value
    else:
        for g in range(shape[0]):
            for h in range(shape[1]):
                result = pair(g, h)
                for name, value in zip(canonical, result):
                    computed[name][g, h] = value

    matrices: dict[str, np.ndarray] = {}
    for name in request.outputs:
        if name == "p_bonferroni":
            matrices[name] = adjust(computed["p"], "bonferroni", homogeneous)
        elif name == "p_bh":
            matrices[name] = adjust(computed["p"], "bh", homogeneous)
        elif name == "p_by":
            matrices[name] = adjust(computed["p"], "by", homogeneous)
        else:
            matrices[name] = computed[name]
    return ResultSet(matrices=matrices, shape=shape)
