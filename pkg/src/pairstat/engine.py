"""Thread-parallel execution of pairwise tests over whole matrices.

The engine turns one ``TestRequest`` plus one or two matrices into a
``ResultSet``.  Homogeneous tests (pearson, spearman, chi2) pair every
feature of a single matrix with every other, computing the upper
triangle plus the diagonal and mirroring; mixed tests (ttest, mwu,
anova, kruskal) cross a label matrix with a continuous matrix over the
full grid.

Work is split into static, contiguous index ranges before any thread
starts: triangle rows for homogeneous tests, flat cell ranges for
grid tests, and whole continuous features for the rank-based grid
tests so each feature's presort is reused across all its pairings.
Every output cell is written by exactly one worker and each cell's
arithmetic is independent of the partitioning, so results are bitwise
identical for any thread count.  Workers run compiled kernels that
release the interpreter lock; per-worker scratch is a few sample-length
buffers, so extra memory stays flat in the number of features.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

from .adjust import adjust
from .categorical import _chi2_rows
from .continuous import _pearson_rows, _spearman_rows
from .datamodel import (
    EFFECTS_BY_TEST,
    KINDS_BY_TEST,
    DataMatrix,
    ResultSet,
    TestRequest,
)
from .errors import KindMismatch, SampleCountMismatch
from .mixed import (
    _U_MODE_CODES,
    _anova_rows,
    _kruskal_rows,
    _mwu_rows,
    _ttest_rows,
)
from .ranking import _presort

#: Adjusted-output tokens and the correction method each one applies.
ADJUSTED_OUTPUTS = {"p_bonferroni": "bonferroni", "p_bh": "bh", "p_by": "by"}

#: Kinds each declared input kind accepts.  A dichotomous feature is a
#: two-category feature, so category-labeled tests take it as well.
_ACCEPTED_KINDS = {
    "continuous": ("continuous",),
    "dichotomous": ("dichotomous",),
    "categorical": ("categorical", "dichotomous"),
}

#: Shared zero-size stand-in for output matrices nobody asked for.
#: Kernels only ever write an output behind its want flag, so this
#: array is never touched.
_UNUSED = np.empty((0, 0), dtype=np.float64)


# ------------------------------------------------------------------ #
# Work partitioning
# ------------------------------------------------------------------ #


def partition_range(count: int, parts: int) -> list[tuple[int, int]]:
    """Split range(count) into contiguous chunks of near-equal size.

    Args:
        count: Number of work units.
        parts: Number of chunks to produce (some may be empty).

    Returns:
        List of ``parts`` half-open (lo, hi) ranges covering
        [0, count) disjointly, in order.
    """
    if parts < 1:
        raise ValueError(f"parts must be >= 1, got {parts}")
    base, extra = divmod(count, parts)
    ranges = []
    lo = 0
    for w in range(parts):
        hi = lo + base + (1 if w < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def partition_triangle_rows(
    n_features: int, parts: int
) -> list[tuple[int, int]]:
    """Split triangle rows into chunks with near-equal pair counts.

    Row g of the upper triangle (diagonal included) owns
    ``n_features - g`` pairs, so equal row counts would leave the first
    worker with far more pairs.  Boundaries are placed so cumulative
    pair counts track ``total * w / parts``, using integer arithmetic
    only.

    Args:
        n_features: Number of features (triangle side length).
        parts: Number of chunks to produce (some may be empty).

    Returns:
        List of ``parts`` half-open row ranges covering
        [0, n_features) disjointly, in order.
    """
    if parts < 1:
        raise ValueError(f"parts must be >= 1, got {parts}")
    total = n_features * (n_features + 1) // 2
    ranges = []
    cum = 0
    row = 0
    for w in range(1, parts):
        lo = row
        while row < n_features and (cum + n_features - row) * parts <= total * w:
            cum += n_features - row
            row += 1
        ranges.append((lo, row))
    ranges.append((row, n_features))
    return ranges


# ------------------------------------------------------------------ #
# Compiled per-chunk kernels
# ------------------------------------------------------------------ #


@njit(cache=True, nogil=True)
def _presort_block(values, present, lo, hi, orders, svals, lengths):
    """Presort features [lo, hi) into padded feature-major tables."""
    for f in range(lo, hi):
        order, sorted_values = _presort(values[f], present[f])
        n = order.size
        lengths[f] = n
        for i in range(n):
            orders[f, i] = order[i]
            svals[f, i] = sorted_values[i]


@njit(cache=True, nogil=True)
def _pearson_block(
    values, present, lo, hi,
    want_stat, want_p, want_r2, out_stat, out_p, out_r2,
):
    """Pearson over triangle rows [lo, hi), mirrored into both halves."""
    n_features = values.shape[0]
    for g in range(lo, hi):
        xg = values[g]
        pg = present[g]
        for h in range(g, n_features):
            r, p = _pearson_rows(xg, pg, values[h], present[h])
            if want_stat:
                out_stat[g, h] = r
                out_stat[h, g] = r
            if want_p:
                out_p[g, h] = p
                out_p[h, g] = p
            if want_r2:
                r2 = r * r
                out_r2[g, h] = r2
                out_r2[h, g] = r2


@njit(cache=True, nogil=True)
def _spearman_block(
    orders, svals, lengths, present, lo, hi,
    want_stat, want_p, want_rho, out_stat, out_p, out_rho,
):
    """Spearman over triangle rows [lo, hi) using presorted features."""
    n_features, n_samples = present.shape
    rank_g = np.empty(n_samples, dtype=np.float64)
    rank_h = np.empty(n_samples, dtype=np.float64)
    kept = np.empty(n_samples, dtype=np.int64)
    vals = np.empty(n_samples, dtype=np.float64)
    for g in range(lo, hi):
        order_g = orders[g, : lengths[g]]
        svals_g = svals[g, : lengths[g]]
        pg = present[g]
        for h in range(g, n_features):
            rho, p = _spearman_rows(
                order_g,
                svals_g,
                pg,
                orders[h, : lengths[h]],
                svals[h, : lengths[h]],
                present[h],
                rank_g,
                rank_h,
                kept,
                vals,
            )
            if want_stat:
                out_stat[g, h] = rho
                out_stat[h, g] = rho
            if want_p:
                out_p[g, h] = p
                out_p[h, g] = p
            if want_rho:
                out_rho[g, h] = rho
                out_rho[h, g] = rho


@njit(cache=True, nogil=True)
def _chi2_block(
    values, present, cat_counts, lo, hi,
    want_stat, want_p, want_phi, want_v, out_stat, out_p, out_phi, out_v,
):
    """Chi-squared over triangle rows [lo, hi) with shared scratch."""
    n_features = values.shape[0]
    c_max = 0
    for f in range(n_features):
        if cat_counts[f] > c_max:
            c_max = cat_counts[f]
    table = np.zeros(c_max * c_max, dtype=np.int64)
    row_sums = np.zeros(c_max, dtype=np.int64)
    col_sums = np.zeros(c_max, dtype=np.int64)
    for g in range(lo, hi):
        xg = values[g]
        pg = present[g]
        c_g = cat_counts[g]
        for h in range(g, n_features):
            chi2, p, phi, v = _chi2_rows(
                xg, pg, values[h], present[h], c_g, cat_counts[h],
                table, row_sums, col_sums,
            )
            if want_stat:
                out_stat[g, h] = chi2
                out_stat[h, g] = chi2
            if want_p:
                out_p[g, h] = p
                out_p[h, g] = p
            if want_phi:
                out_phi[g, h] = phi
                out_phi[h, g] = phi
            if want_v:
                out_v[g, h] = v
                out_v[h, g] = v


@njit(cache=True, nogil=True)
def _ttest_block(
    labels, lab_present, values, val_present, lo, hi, student,
    want_stat, want_p, want_d, out_stat, out_p, out_d,
):
    """t-test over flat grid cells [lo, hi) of the label-by-value grid."""
    n_cont = values.shape[0]
    for idx in range(lo, hi):
        g = idx // n_cont
        h = idx - g * n_cont
        t, p, d = _ttest_rows(
            labels[g], lab_present[g], values[h], val_present[h], student
        )
        if want_stat:
            out_stat[g, h] = t
        if want_p:
            out_p[g, h] = p
        if want_d:
            out_d[g, h] = d


@njit(cache=True, nogil=True)
def _anova_block(
    labels, lab_present, cat_counts, values, val_present, lo, hi,
    want_stat, want_p, want_eta, out_stat, out_p, out_eta,
):
    """ANOVA over flat grid cells [lo, hi) with shared group scratch."""
    n_cat = labels.shape[0]
    n_cont = values.shape[0]
    k_max = 0
    for f in range(n_cat):
        if cat_counts[f] > k_max:
            k_max = cat_counts[f]
    counts = np.zeros(k_max, dtype=np.int64)
    sums = np.zeros(k_max, dtype=np.float64)
    ssqs = np.zeros(k_max, dtype=np.float64)
    for idx in range(lo, hi):
        g = idx // n_cont
        h = idx - g * n_cont
        f_stat, p, eta = _anova_rows(
            labels[g], lab_present[g], values[h], val_present[h],
            cat_counts[g], counts, sums, ssqs,
        )
        if want_stat:
            out_stat[g, h] = f_stat
        if want_p:
            out_p[g, h] = p
        if want_eta:
            out_eta[g, h] = eta


@njit(cache=True, nogil=True)
def _mwu_block(
    orders, svals, lengths, labels, lab_present, lo, hi, mode,
    want_stat, want_p, want_r, out_stat, out_p, out_r,
):
    """Mann-Whitney over continuous features [lo, hi), reusing presorts."""
    n_cat = labels.shape[0]
    n_samples = labels.shape[1]
    cvals = np.empty(n_samples, dtype=np.float64)
    clabs = np.empty(n_samples, dtype=np.float64)
    for h in range(lo, hi):
        order = orders[h, : lengths[h]]
        sorted_values = svals[h, : lengths[h]]
        for g in range(n_cat):
            u, p, r = _mwu_rows(
                order, sorted_values, labels[g], lab_present[g], mode,
                cvals, clabs,
            )
            if want_stat:
                out_stat[g, h] = u
            if want_p:
                out_p[g, h] = p
            if want_r:
                out_r[g, h] = r


@njit(cache=True, nogil=True)
def _kruskal_block(
    orders, svals, lengths, labels, lab_present, cat_counts, lo, hi,
    want_stat, want_p, want_eta, out_stat, out_p, out_eta,
):
    """Kruskal-Wallis over continuous features [lo, hi) with presorts."""
    n_cat = labels.shape[0]
    k_max = 0
    for f in range(n_cat):
        if cat_counts[f] > k_max:
            k_max = cat_counts[f]
    rank_sums = np.zeros(k_max, dtype=np.float64)
    counts = np.zeros(k_max, dtype=np.int64)
    n_samples = labels.shape[1]
    cvals = np.empty(n_samples, dtype=np.float64)
    clabs = np.empty(n_samples, dtype=np.float64)
    for h in range(lo, hi):
        order = orders[h, : lengths[h]]
        sorted_values = svals[h, : lengths[h]]
        for g in range(n_cat):
            stat, p, eta = _kruskal_rows(
                order, sorted_values, labels[g], lab_present[g],
                cat_counts[g], rank_sums, counts,
                cvals, clabs,
            )
            if want_stat:
                out_stat[g, h] = stat
            if want_p:
                out_p[g, h] = p
            if want_eta:
                out_eta[g, h] = eta


# ------------------------------------------------------------------ #
# Scheduling
# ------------------------------------------------------------------ #


def _execute(kernel, pre, post, ranges, threads) -> None:
    """Run ``kernel(*pre, lo, hi, *post)`` over all non-empty ranges.

    Sequential for one thread or one busy range; otherwise each range
    becomes one task in a thread pool.  The kernels release the
    interpreter lock, so tasks overlap on the compiled code.  Any
    worker exception is re-raised here after all tasks settle.
    """
    jobs = [(lo, hi) for lo, hi in ranges if hi > lo]
    if threads == 1 or len(jobs) <= 1:
        for lo, hi in jobs:
            kernel(*pre, lo, hi, *post)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(kernel, *pre, lo, hi, *post) for lo, hi in jobs]
        for future in futures:
            future.result()


def _presort_matrix(
    matrix: DataMatrix, threads: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Presort every feature of ``matrix``, in parallel across features.

    Returns:
        Padded tables (orders, sorted values, per-feature present
        counts); row f holds feature f's non-missing entries sorted
        ascending in its first ``lengths[f]`` slots.
    """
    n_features, n_samples = matrix.values.shape
    orders = np.zeros((n_features, n_samples), dtype=np.int64)
    svals = np.zeros((n_features, n_samples), dtype=np.float64)
    lengths = np.zeros(n_features, dtype=np.int64)
    _execute(
        _presort_block,
        (matrix.values, matrix.present),
        (orders, svals, lengths),
        partition_range(n_features, threads),
        threads,
    )
    return orders, svals, lengths


# ------------------------------------------------------------------ #
# Entry point
# ------------------------------------------------------------------ #


def _check_kind(test: str, role: str, got: str, expected: str) -> None:
    if got not in _ACCEPTED_KINDS[expected]:
        raise KindMismatch(
            f"test {test!r} needs a {expected} {role}, got {got}"
        )


def run(
    request: TestRequest,
    mat_a: DataMatrix,
    mat_b: DataMatrix | None = None,
) -> ResultSet:
    """Run one pairwise test over a matrix or a pair of matrices.

    Args:
        request: Test name, outputs, variants, and thread count.
        mat_a: The single matrix of a homogeneous test, or the label
            (dichotomous/categorical) matrix of a mixed test.
        mat_b: The continuous matrix of a mixed test; must be omitted
            for homogeneous tests.

    Returns:
        A ``ResultSet`` holding exactly the requested output matrices:
        square and symmetric for homogeneous tests, label-features by
        continuous-features for mixed tests.  Adjusted p-value matrices
        have NaN diagonals in the homogeneous case; raw matrices keep
        their computed diagonal.

    Raises:
        KindMismatch: If a matrix kind does not fit the test.
        SampleCountMismatch: If the two matrices disagree on S.
        ValueError: If the second matrix is missing or superfluous.
    """
    test = request.test
    expected_a, expected_b = KINDS_BY_TEST[test]
    homogeneous = expected_b is None
    if homogeneous:
        if mat_b is not None:
            raise ValueError(f"test {test!r} takes a single matrix")
        _check_kind(test, "matrix", mat_a.kind, expected_a)
        shape = (mat_a.n_features, mat_a.n_features)
    else:
        if mat_b is None:
            raise ValueError(
                f"test {test!r} needs a second, continuous matrix"
            )
        _check_kind(test, "first matrix", mat_a.kind, expected_a)
        _check_kind(test, "second matrix", mat_b.kind, expected_b)
        if mat_a.n_samples != mat_b.n_samples:
            raise SampleCountMismatch(
                f"sample counts differ: first matrix has"
                f" {mat_a.n_samples}, second has {mat_b.n_samples}"
            )
        shape = (mat_a.n_features, mat_b.n_features)

    threads = request.threads
    canonical = ("stat", "p") + EFFECTS_BY_TEST[test]
    adjusted_names = [n for n in request.outputs if n in ADJUSTED_OUTPUTS]
    needed = {n for n in request.outputs if n not in ADJUSTED_OUTPUTS}
    if adjusted_names:
        needed.add("p")
    computed = {
        name: np.full(shape, np.nan) if name in needed else _UNUSED
        for name in canonical
    }
    wants = tuple(name in needed for name in canonical)
    outs = tuple(computed[name] for name in canonical)

    if test == "pearson":
        _execute(
            _pearson_block,
            (mat_a.values, mat_a.present),
            wants + outs,
            partition_triangle_rows(shape[0], threads),
            threads,
        )
    elif test == "spearman":
        orders, svals, lengths = _presort_matrix(mat_a, threads)
        _execute(
            _spearman_block,
            (orders, svals, lengths, mat_a.present),
            wants + outs,
            partition_triangle_rows(shape[0], threads),
            threads,
        )
    elif test == "chi2":
        _execute(
            _chi2_block,
            (mat_a.values, mat_a.present, mat_a.category_counts),
            wants + outs,
            partition_triangle_rows(shape[0], threads),
            threads,
        )
    elif test == "ttest":
        _execute(
            _ttest_block,
            (mat_a.values, mat_a.present, mat_b.values, mat_b.present),
            (request.t_variant == "student",) + wants + outs,
            partition_range(shape[0] * shape[1], threads),
            threads,
        )
    elif test == "anova":
        _execute(
            _anova_block,
            (
                mat_a.values,
                mat_a.present,
                mat_a.category_counts,
                mat_b.values,
                mat_b.present,
            ),
            wants + outs,
            partition_range(shape[0] * shape[1], threads),
            threads,
        )
    elif test == "mwu":
        orders, svals, lengths = _presort_matrix(mat_b, threads)
        _execute(
            _mwu_block,
            (orders, svals, lengths, mat_a.values, mat_a.present),
            (_U_MODE_CODES[request.u_mode],) + wants + outs,
            partition_range(shape[1], threads),
            threads,
        )
    else:
        orders, svals, lengths = _presort_matrix(mat_b, threads)
        _execute(
            _kruskal_block,
            (
                orders,
                svals,
                lengths,
                mat_a.values,
                mat_a.present,
                mat_a.category_counts,
            ),
            wants + outs,
            partition_range(shape[1], threads),
            threads,
        )

    matrices: dict[str, np.ndarray] = {}
    for name in request.outputs:
        if name in ADJUSTED_OUTPUTS:
            matrices[name] = adjust(
                computed["p"], ADJUSTED_OUTPUTS[name], symmetric=homogeneous
            )
        else:
            matrices[name] = computed[name]
    return ResultSet(matrices=matrices, shape=shape)
