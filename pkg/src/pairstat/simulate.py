"""Reproducible simulation of benchmark matrices.

Continuous features draw from Uniform[0, 1].  Labeled features draw
integer labels 0..c-1 with the guarantee that every label occurs at
least once among the feature's non-missing entries.  Missingness is
exact-count: each feature gets floor(ratio * samples) missing entries
at uniformly random positions, not an independent coin flip per cell,
so two features never differ in how much data they lose.

All draws come from one seeded generator consumed in a fixed order,
so a (seed, shape, kind, ratio) tuple always produces the same matrix.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .datamodel import KINDS
from .errors import InfeasibleSimulation


def missing_count(na_ratio: float, n_samples: int) -> int:
    """Exact per-feature missing count: floor(ratio * samples).

    The product is taken over the ratio's decimal literal, so e.g.
    ratio 0.3 with 10 samples gives 3 even though the nearest binary
    float of 0.3 times 10 falls a hair below 3.
    """
    return int(Fraction(str(na_ratio)) * n_samples)


def simulate_matrix(
    n_features: int,
    n_samples: int,
    kind: str = "continuous",
    categories: int = 4,
    na_ratio: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Draw one reproducible feature-by-sample matrix.

    Args:
        n_features: Number of feature rows.
        n_samples: Number of sample columns.
        kind: ``continuous``, ``dichotomous``, or ``categorical``.
        categories: Label count c for categorical features; dichotomous
            features always use 2.
        na_ratio: Fraction of each feature's entries to blank, in
            [0, 1]; the count is exactly floor(na_ratio * n_samples).
        seed: Generator seed; equal seeds give equal matrices.

    Returns:
        Float64 array of shape (n_features, n_samples) with missing
        entries as NaN.  Labeled features contain every label in
        0..c-1 at least once among their non-missing entries.

    Raises:
        InfeasibleSimulation: If the non-missing entries of a feature
            cannot hold every label at least once.
        ValueError: For an unknown kind or a ratio outside [0, 1].
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if not 0.0 <= na_ratio <= 1.0:
        raise ValueError(f"na_ratio must be in [0, 1], got {na_ratio}")
    if n_features < 1 or n_samples < 1:
        raise ValueError(
            f"n_features and n_samples must be positive, got"
            f" {n_features} and {n_samples}"
        )
    if kind == "dichotomous":
        categories = 2
    n_missing = missing_count(na_ratio, n_samples)
    n_present = n_samples - n_missing
    if kind != "continuous":
        if categories < 1:
            raise ValueError(f"categories must be >= 1, got {categories}")
        if categories > n_present:
            raise InfeasibleSimulation(
                f"{categories} categories cannot all appear among"
                f" {n_present} non-missing entries per feature"
            )
    rng = np.random.default_rng(seed)
    values = np.empty((n_features, n_samples), dtype=np.float64)
    for f in range(n_features):
        if kind == "continuous":
            row = rng.uniform(size=n_samples)
        else:
            row = rng.integers(0, categories, size=n_samples).astype(
                np.float64
            )
        missing = rng.permutation(n_samples)[:n_missing]
        if kind != "continuous":
            # Pin one occurrence of every label onto random non-missing
            # positions so no category vanishes from the feature.
            present = np.setdiff1d(
                np.arange(n_samples), missing, assume_unique=True
            )
            anchors = present[rng.permutation(n_present)[:categories]]
            row[anchors] = rng.permutation(categories)
        row[missing] = math.nan
        values[f] = row
    return values
