"""Core data types: matrices, missingness semantics, and pairwise removal.

A ``DataMatrix`` wraps a dense feature-by-sample float64 array together
with a missing-value sentinel and a kind tag (continuous, dichotomous,
or categorical).  Missingness is decided by a single rule: if the
sentinel is NaN an entry is missing iff it is NaN, otherwise an entry
is missing iff it is bit-exactly equal to the sentinel.  The bit-exact
comparison (rather than float ``==``) matters only for signed zeros,
but it makes the rule total and unambiguous.

``pair_view`` applies pairwise deletion: given two feature vectors it
retains exactly the sample positions where both entries are present,
preserving sample order.  Every statistical kernel in this package
operates on such jointly present subsets, so a sample is dropped for
one pair of features without affecting any other pair.

``TestRequest`` and ``ResultSet`` carry the run configuration and the
named output matrices between the engine and its callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyMatrix,
    LabelOutOfRange,
    NegativeLabel,
    NonIntegerCategoryLabel,
    UnsupportedOutputForTest,
)

# ------------------------------------------------------------------ #
# Vocabulary
# ------------------------------------------------------------------ #

#: Valid feature kinds.
KINDS = ("continuous", "dichotomous", "categorical")

#: Outputs every test supports, in canonical emission order.
BASE_OUTPUTS = ("stat", "p", "p_bonferroni", "p_bh", "p_by")

#: Effect-size outputs by test, in canonical emission order.
EFFECTS_BY_TEST = {
    "pearson": ("r2",),
    "spearman": ("rho",),
    "chi2": ("phi", "cramers_v"),
    "ttest": ("cohens_d",),
    "mwu": ("r",),
    "anova": ("partial_eta2",),
    "kruskal": ("eta2",),
}

#: All test names.
TESTS = tuple(EFFECTS_BY_TEST)

#: Matrix kinds each test consumes, as (first input, second input).
#: Homogeneous tests take a single matrix, so the second entry is None.
KINDS_BY_TEST = {
    "pearson": ("continuous", None),
    "spearman": ("continuous", None),
    "chi2": ("categorical", None),
    "ttest": ("dichotomous", "continuous"),
    "mwu": ("dichotomous", "continuous"),
    "anova": ("categorical", "continuous"),
    "kruskal": ("categorical", "continuous"),
}

T_VARIANTS = ("student", "welch")
U_MODES = ("exact", "asymptotic", "auto")


def outputs_for(test: str) -> tuple[str, ...]:
    """Return every valid output token for ``test`` in canonical order."""
    return BASE_OUTPUTS + EFFECTS_BY_TEST[test]


# ------------------------------------------------------------------ #
# Missingness
# ------------------------------------------------------------------ #


def present_mask(values: np.ndarray, na_sentinel: float) -> np.ndarray:
    """Return a boolean mask of the non-missing entries of ``values``.

    Args:
        values: Float64 array of any shape.
        na_sentinel: The missing-value marker.  NaN marks every NaN
            entry as missing; any other value marks entries that are
            bit-exactly equal to it.

    Returns:
        Boolean array of the same shape, True where the entry is data.
    """
    if math.isnan(na_sentinel):
        return ~np.isnan(values)
    # Bit-exact comparison: float equality would conflate +0.0 and -0.0
    # and can never match a non-NaN entry against a NaN sentinel.
    values = np.ascontiguousarray(values, dtype=np.float64)
    sentinel_bits = np.float64(na_sentinel).view(np.int64)
    return values.view(np.int64) != sentinel_bits


# ------------------------------------------------------------------ #
# DataMatrix
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class DataMatrix:
    """A feature-by-sample matrix with missing-value semantics.

    Attributes:
        values: Float64 array of shape (features, samples), C-contiguous.
        na_sentinel: Missing-value marker (see :func:`present_mask`).
        kind: One of ``KINDS``.
        category_counts: For dichotomous/categorical kinds, an int64
            array with the per-feature category count, computed from
            the full column before any pairwise work.  None for
            continuous matrices.
        present: Boolean mask of shape (features, samples), True where
            the entry is data.  Derived from ``values`` and
            ``na_sentinel`` at construction.
    """

    values: np.ndarray
    na_sentinel: float
    kind: str
    category_counts: np.ndarray | None = None
    present: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    @property
    def n_features(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]


def make_matrix(
    raw: np.ndarray,
    kind: str,
    na_sentinel: float = math.nan,
    features_on_rows: bool = True,
) -> DataMatrix:
    """Build a validated ``DataMatrix`` from a raw 2-D array.

    Args:
        raw: Rectangular 2-D array-like of floats.
        kind: One of ``KINDS``.
        na_sentinel: Missing-value marker.
        features_on_rows: If True, ``raw`` is features x samples; if
            False it is samples x features and is transposed into the
            canonical orientation.

    Returns:
        A ``DataMatrix`` in feature-by-sample orientation with the
        present mask and (for label kinds) category counts filled in.

    Raises:
        EmptyMatrix: If ``raw`` is not a non-empty 2-D array.
        NonIntegerCategoryLabel: If a label-kind entry is present but
            not an integer value.
        NegativeLabel: If a label-kind entry is negative.
        LabelOutOfRange: If a dichotomous entry is neither 0 nor 1.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise EmptyMatrix(
            f"expected a non-empty 2-D matrix, got shape {arr.shape}"
        )
    if not features_on_rows:
        arr = arr.T
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    present = present_mask(arr, na_sentinel)
    present.setflags(write=False)

    category_counts = None
    if kind != "continuous":
        category_counts = _validated_category_counts(arr, present, kind)
        category_counts.setflags(write=False)

    return DataMatrix(
        values=arr,
        na_sentinel=na_sentinel,
        kind=kind,
        category_counts=category_counts,
        present=present,
    )


def _validated_category_counts(
    values: np.ndarray, present: np.ndarray, kind: str
) -> np.ndarray:
    """Validate label entries and count categories per feature.

    Labels must be integer-valued and non-negative; dichotomous labels
    must be 0 or 1.  The category count of a feature is one plus its
    largest observed label (so labels always lie in ``[0, c_f)``), and
    a dichotomous feature always declares two categories even when one
    of them never occurs in the data.
    """
    n_features = values.shape[0]
    counts = np.zeros(n_features, dtype=np.int64)
    for f in range(n_features):
        row = values[f, present[f]]
        if row.size == 0:
            counts[f] = 2 if kind == "dichotomous" else 0
            continue
        if not np.all(np.isfinite(row) & (np.floor(row) == row)):
            bad = row[~(np.isfinite(row) & (np.floor(row) == row))][0]
            raise NonIntegerCategoryLabel(
                f"feature {f} has non-integer label {float(bad)!r}"
            )
        low = row.min()
        if low < 0:
            raise NegativeLabel(f"feature {f} has negative label {float(low)!r}")
        high = row.max()
        if kind == "dichotomous":
            if high > 1:
                raise LabelOutOfRange(
                    f"feature {f} has label {float(high)!r}; dichotomous labels"
                    " must be 0 or 1"
                )
            counts[f] = 2
        else:
            counts[f] = int(high) + 1
    return counts


# ------------------------------------------------------------------ #
# PairView
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class PairView:
    """The jointly present sample pairs of two features.

    Attributes:
        xs: Values of the first feature at the retained positions.
        ys: Values of the second feature at the same positions.
        n: Number of retained positions (may be zero).
    """

    xs: np.ndarray
    ys: np.ndarray
    n: int


def pair_view(
    g: np.ndarray,
    h: np.ndarray,
    sentinel_g: float = math.nan,
    sentinel_h: float = math.nan,
) -> PairView:
    """Apply pairwise deletion to two equal-length feature vectors.

    Args:
        g: First feature vector of length S.
        h: Second feature vector of length S.
        sentinel_g: Missing-value marker for ``g``.
        sentinel_h: Missing-value marker for ``h``.

    Returns:
        A ``PairView`` with the entries at jointly present positions,
        in original sample order.
    """
    g = np.asarray(g, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    if g.shape != h.shape:
        raise ValueError(
            f"feature vectors differ in length: {g.shape} vs {h.shape}"
        )
    keep = present_mask(g, sentinel_g) & present_mask(h, sentinel_h)
    xs = g[keep]
    ys = h[keep]
    return PairView(xs=xs, ys=ys, n=int(xs.size))


# ------------------------------------------------------------------ #
# TestRequest
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class TestRequest:
    """Configuration for one pairwise-testing run.

    Attributes:
        test: One of ``TESTS``.
        outputs: Output tokens to emit; must be valid for ``test``.
        t_variant: ``student`` or ``welch`` (t-test only).
        u_mode: ``exact``, ``asymptotic``, or ``auto`` (MWU only).
        threads: Worker-thread count, at least 1.
        features_on_rows: Orientation applied to each raw input matrix.
    """

    test: str
    outputs: tuple[str, ...]
    t_variant: str = "student"
    u_mode: str = "auto"
    threads: int = 1
    features_on_rows: bool = True

    def __post_init__(self) -> None:
        if self.test not in TESTS:
            raise ValueError(
                f"unknown test {self.test!r}; expected one of {TESTS}"
            )
        if self.t_variant not in T_VARIANTS:
            raise ValueError(
                f"unknown t-test variant {self.t_variant!r};"
                f" expected one of {T_VARIANTS}"
            )
        if self.u_mode not in U_MODES:
            raise ValueError(
                f"unknown U-test mode {self.u_mode!r};"
                f" expected one of {U_MODES}"
            )
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        valid = outputs_for(self.test)
        for token in self.outputs:
            if token not in valid:
                raise UnsupportedOutputForTest(
                    f"output {token!r} is not available for test"
                    f" {self.test!r}; valid outputs: {', '.join(valid)}"
                )
        if not self.outputs:
            raise ValueError("outputs must not be empty")


# ------------------------------------------------------------------ #
# ResultSet
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class ResultSet:
    """Named output matrices of one run, all sharing one shape.

    Attributes:
        matrices: Map from output token to a float64 matrix.  Square
            feature-by-feature for homogeneous tests, first-input
            features by second-input features for mixed tests.
        shape: The common (rows, columns) shape.
    """

    matrices: dict[str, np.ndarray]
    shape: tuple[int, int]

    def __post_init__(self) -> None:
        for name, mat in self.matrices.items():
            if mat.shape != self.shape:
                raise ValueError(
                    f"matrix {name!r} has shape {mat.shape}, expected"
                    f" {self.shape}"
                )

    def __getitem__(self, name: str) -> np.ndarray:
        return self.matrices[name]
