"""Tests for the chi-squared independence kernel."""

import math

import numpy as np
import pytest
from scipy import stats

from pairstat.categorical import chi2_pair
from pairstat.datamodel import pair_view
from pairstat.errors import LabelOutOfRange


def from_table(table):
    """Expand a contingency table into a label pair view."""
    xs = []
    ys = []
    for i, row in enumerate(table):
        for j, count in enumerate(row):
            xs.extend([float(i)] * count)
            ys.extend([float(j)] * count)
    return pair_view(xs, ys), len(table), len(table[0])


class TestChi2Examples:
    def test_exact_independence(self):
        """A uniform 2x2 table has no association at all."""
        view, c_g, c_h = from_table([[10, 10], [10, 10]])
        chi2, p, phi, v = chi2_pair(view, c_g, c_h)
        assert chi2 == 0.0
        assert p == 1.0
        assert phi == 0.0
        assert v == 0.0

    def test_perfect_association(self):
        """Five samples per diagonal cell: chi2 = n = 10, phi = V = 1."""
        view, c_g, c_h = from_table([[5, 0], [0, 5]])
        chi2, p, phi, v = chi2_pair(view, c_g, c_h)
        assert chi2 == pytest.approx(10.0, rel=1e-14)
        # chi2_sf(10, 1) reduces to erfc(sqrt(5)).
        assert p == pytest.approx(math.erfc(math.sqrt(5.0)), rel=1e-12)
        assert phi == pytest.approx(1.0, rel=1e-14)
        assert v == pytest.approx(1.0, rel=1e-14)

    def test_empty_declared_category(self):
        """A full-column category absent from the subset voids the test."""
        view = pair_view([0.0, 0.0, 1.0, 1.0], [0.0, 1.0, 0.0, 1.0])
        chi2, p, phi, v = chi2_pair(view, 3, 2)
        assert all(math.isnan(x) for x in (chi2, p, phi, v))


class TestChi2Degenerate:
    def test_empty_view(self):
        view = pair_view(np.empty(0), np.empty(0))
        chi2, p, phi, v = chi2_pair(view, 2, 2)
        assert all(math.isnan(x) for x in (chi2, p, phi, v))

    def test_single_category_feature(self):
        """c = 1 zeroes chi2 and phi but leaves p and V undefined."""
        view = pair_view([0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 1.0])
        chi2, p, phi, v = chi2_pair(view, 1, 2)
        assert chi2 == 0.0
        assert phi == 0.0
        assert math.isnan(p)
        assert math.isnan(v)

    def test_both_single_category(self):
        view = pair_view([0.0, 0.0], [0.0, 0.0])
        chi2, p, phi, v = chi2_pair(view, 1, 1)
        assert chi2 == 0.0
        assert phi == 0.0
        assert math.isnan(p)
        assert math.isnan(v)

    def test_label_out_of_range(self):
        view = pair_view([0.0, 2.0], [0.0, 1.0])
        with pytest.raises(LabelOutOfRange, match="category range"):
            chi2_pair(view, 2, 2)


class TestChi2Properties:
    def test_symmetry(self):
        """Swapping the features transposes the table, nothing else."""
        rng = np.random.default_rng(5)
        for _ in range(20):
            xs = rng.integers(0, 3, size=60).astype(float)
            ys = rng.integers(0, 4, size=60).astype(float)
            fwd = chi2_pair(pair_view(xs, ys), 3, 4)
            rev = chi2_pair(pair_view(ys, xs), 4, 3)
            # Summation order over the transposed table may differ by
            # an ulp, so compare at tolerance rather than bitwise.
            np.testing.assert_allclose(fwd, rev, rtol=1e-12)

    def test_phi_equals_v_for_square_binary_tables(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            xs = rng.integers(0, 2, size=40).astype(float)
            ys = rng.integers(0, 2, size=40).astype(float)
            chi2, p, phi, v = chi2_pair(pair_view(xs, ys), 2, 2)
            if math.isnan(chi2):
                continue
            assert v == phi
            assert 0.0 <= v <= 1.0

    def test_cramers_v_bounded(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            c_g = int(rng.integers(2, 5))
            c_h = int(rng.integers(2, 5))
            xs = rng.integers(0, c_g, size=80).astype(float)
            ys = rng.integers(0, c_h, size=80).astype(float)
            chi2, p, phi, v = chi2_pair(pair_view(xs, ys), c_g, c_h)
            if math.isnan(chi2):
                continue
            assert 0.0 <= v <= 1.0 + 1e-12
            assert phi >= 0.0

    def test_matches_scipy_with_missingness(self):
        """chi2 and p agree with scipy on randomized label pairs."""
        rng = np.random.default_rng(23)
        checked = 0
        for _ in range(60):
            c_g = int(rng.integers(2, 5))
            c_h = int(rng.integers(2, 5))
            xs = rng.integers(0, c_g, size=100).astype(float)
            ys = rng.integers(0, c_h, size=100).astype(float)
            xs[rng.random(100) < 0.2] = math.nan
            ys[rng.random(100) < 0.2] = math.nan
            view = pair_view(xs, ys)
            table = np.zeros((c_g, c_h), dtype=int)
            for a, b in zip(view.xs, view.ys):
                table[int(a), int(b)] += 1
            if (table.sum(axis=1) == 0).any() or (table.sum(axis=0) == 0).any():
                nan_out = chi2_pair(view, c_g, c_h)
                assert all(math.isnan(x) for x in nan_out)
                continue
            chi2, p, phi, v = chi2_pair(view, c_g, c_h)
            expected = stats.chi2_contingency(table, correction=False)
            assert chi2 == pytest.approx(expected.statistic, rel=1e-12)
            assert p == pytest.approx(expected.pvalue, rel=1e-10, abs=1e-13)
            n = table.sum()
            assert phi == pytest.approx(
                math.sqrt(expected.statistic / n), rel=1e-12
            )
            assert v == pytest.approx(
                math.sqrt(
                    expected.statistic / (n * (min(c_g, c_h) - 1))
                ),
                rel=1e-12,
            )
            checked += 1
        assert checked >= 20
