"""Tests for the naive reference implementations."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from pairstat.categorical import chi2_pair
from pairstat.continuous import pearson_pair, spearman_from_values
from pairstat.datamodel import (
    TESTS,
    TestRequest,
    make_matrix,
    outputs_for,
    pair_view,
)
from pairstat.engine import run
from pairstat.errors import KindMismatch, TooLarge
from pairstat.mixed import anova_pair, kruskal_pair, mwu_pair, ttest_pair
from pairstat.oracle import (
    oracle_anova,
    oracle_chi2,
    oracle_kruskal,
    oracle_mwu,
    oracle_pearson,
    oracle_run,
    oracle_spearman,
    oracle_ttest,
    permutation_mwu,
)
from pairstat.ranking import presort_feature

TestRequest.__test__ = False  # dataclass, not a test case


def assert_matches(actual, expected, tol=1e-10):
    """Same NaN pattern and values within an absolute tolerance."""
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    np.testing.assert_array_equal(np.isnan(actual), np.isnan(expected))
    both = ~np.isnan(actual)
    np.testing.assert_allclose(
        actual[both], expected[both], rtol=0, atol=tol
    )


# ---------------------------------------------------------------- #
# Worked examples
# ---------------------------------------------------------------- #


class TestWorkedExamples:
    def test_perfect_correlation(self):
        """A feature against itself gives r = 1 with p = 0."""
        r, p = oracle_pearson([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert r == 1.0
        assert p == 0.0

    def test_enumeration_of_two_against_two(self):
        """{1,2} vs {3,4}: one of six assignments is as extreme."""
        assert permutation_mwu([1.0, 2.0], [3.0, 4.0]) == Fraction(1, 3)

    def test_enumeration_of_singletons(self):
        """{1} vs {2}: both assignments tie, doubled and clamped to 1."""
        assert permutation_mwu([1.0], [2.0]) == Fraction(1)

    def test_enumeration_is_symmetric(self):
        """Swapping the groups never changes the two-sided p."""
        rng = np.random.default_rng(0)
        for _ in range(10):
            n0 = int(rng.integers(1, 5))
            n1 = int(rng.integers(1, 5))
            values = rng.permutation(20)[: n0 + n1].astype(np.float64)
            x0, x1 = values[:n0], values[n0:]
            assert permutation_mwu(x0, x1) == permutation_mwu(x1, x0)

    def test_enumeration_size_cap(self):
        with pytest.raises(TooLarge, match="13"):
            permutation_mwu(np.arange(7.0), np.arange(7.0, 13.0))

    def test_enumeration_rejects_ties(self):
        with pytest.raises(ValueError, match="tie-free"):
            permutation_mwu([1.0, 2.0], [2.0, 3.0])


# ---------------------------------------------------------------- #
# Agreement with scipy on clean data
# ---------------------------------------------------------------- #


class TestAgainstScipy:
    def test_pearson(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            x = rng.uniform(size=30)
            y = rng.uniform(size=30) + 0.3 * x
            r, p = oracle_pearson(x, y)
            expected = stats.pearsonr(x, y)
            np.testing.assert_allclose(r, expected.statistic, rtol=1e-12)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-10)

    def test_spearman(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            x = np.round(rng.uniform(size=40), 1)
            y = np.round(rng.uniform(size=40), 1)
            rho, p = oracle_spearman(x, y)
            expected = stats.spearmanr(x, y)
            np.testing.assert_allclose(rho, expected.statistic, rtol=1e-12)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-9)

    def test_ttest(self):
        rng = np.random.default_rng(3)
        for equal_var, variant in ((True, "student"), (False, "welch")):
            labels = (rng.random(40) < 0.4).astype(np.float64)
            values = rng.normal(size=40) + labels
            t, p, _ = oracle_ttest(labels, values, variant)
            expected = stats.ttest_ind(
                values[labels == 0], values[labels == 1], equal_var=equal_var
            )
            np.testing.assert_allclose(t, expected.statistic, rtol=1e-12)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-12)

    def test_mwu_asymptotic(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            labels = (rng.random(50) < 0.5).astype(np.float64)
            values = np.round(rng.uniform(size=50), 1)
            if not labels.any() or labels.all():
                continue
            u, p, _ = oracle_mwu(labels, values, mode="asymptotic")
            expected = stats.mannwhitneyu(
                values[labels == 0],
                values[labels == 1],
                alternative="two-sided",
                method="asymptotic",
            )
            np.testing.assert_allclose(u, expected.statistic, rtol=1e-12)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-12)

    def test_anova(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            labels = rng.integers(0, 4, size=60).astype(np.float64)
            labels[:4] = [0, 1, 2, 3]
            values = rng.normal(size=60)
            f, p, _ = oracle_anova(labels, values, 4)
            groups = [values[labels == j] for j in range(4)]
            expected = stats.f_oneway(*groups)
            np.testing.assert_allclose(f, expected.statistic, rtol=1e-10)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-10)

    def test_kruskal(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            labels = rng.integers(0, 3, size=50).astype(np.float64)
            labels[:3] = [0, 1, 2]
            values = np.round(rng.uniform(size=50), 1)
            h, p, _ = oracle_kruskal(labels, values, 3)
            groups = [values[labels == j] for j in range(3)]
            expected = stats.kruskal(*groups)
            np.testing.assert_allclose(h, expected.statistic, rtol=1e-10)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-10)

    def test_chi2(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            x = rng.integers(0, 3, size=80).astype(np.float64)
            y = rng.integers(0, 4, size=80).astype(np.float64)
            x[:3] = [0, 1, 2]
            y[:4] = [0, 1, 2, 3]
            chi2, p, _, v = oracle_chi2(x, y, 3, 4)
            table = np.zeros((3, 4))
            np.add.at(table, (x.astype(int), y.astype(int)), 1)
            expected = stats.chi2_contingency(table, correction=False)
            np.testing.assert_allclose(chi2, expected.statistic, rtol=1e-12)
            np.testing.assert_allclose(p, expected.pvalue, rtol=1e-12)


# ---------------------------------------------------------------- #
# Differential: fast path against the oracle
# ---------------------------------------------------------------- #


def continuous_vector(rng, size, na_ratio):
    v = rng.uniform(size=size)
    v[rng.random(size) < na_ratio] = np.nan
    return v


def label_vector(rng, size, na_ratio, c):
    v = rng.integers(0, c, size=size).astype(np.float64)
    v[rng.permutation(size)[:c]] = np.arange(c)
    v[rng.random(size) < na_ratio] = np.nan
    return v


class TestDifferential:
    def test_pearson(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            x = continuous_vector(rng, 60, 0.3)
            y = continuous_vector(rng, 60, 0.3)
            fast = pearson_pair(pair_view(x, y))
            assert_matches(fast, oracle_pearson(x, y))

    def test_spearman(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            x = np.round(continuous_vector(rng, 60, 0.3), 1)
            y = np.round(continuous_vector(rng, 60, 0.3), 1)
            fast = spearman_from_values(x, y)
            assert_matches(fast, oracle_spearman(x, y))

    def test_chi2(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            x = label_vector(rng, 60, 0.3, 3)
            y = label_vector(rng, 60, 0.3, 4)
            fast = chi2_pair(pair_view(x, y), 3, 4)
            assert_matches(fast, oracle_chi2(x, y, 3, 4))

    def test_ttest(self):
        rng = np.random.default_rng(13)
        for variant in ("student", "welch"):
            for _ in range(25):
                labels = label_vector(rng, 60, 0.3, 2)
                values = continuous_vector(rng, 60, 0.3)
                fast = ttest_pair(pair_view(labels, values), variant)
                assert_matches(fast, oracle_ttest(labels, values, variant))

    def test_mwu(self):
        rng = np.random.default_rng(14)
        for mode in ("asymptotic", "auto"):
            for _ in range(25):
                labels = label_vector(rng, 60, 0.3, 2)
                values = np.round(continuous_vector(rng, 60, 0.3), 1)
                fast = mwu_pair(presort_feature(values), labels, mode=mode)
                assert_matches(fast, oracle_mwu(labels, values, mode))

    def test_mwu_exact_branch(self):
        """Small tie-free groups exercise the exact path on both sides."""
        rng = np.random.default_rng(15)
        for _ in range(25):
            size = int(rng.integers(8, 30))
            values = rng.permutation(1000)[:size].astype(np.float64)
            labels = np.zeros(size)
            labels[: int(rng.integers(1, 7))] = 1.0
            rng.shuffle(labels)
            fast = mwu_pair(presort_feature(values), labels, mode="auto")
            assert_matches(fast, oracle_mwu(labels, values, "auto"))

    def test_anova(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            labels = label_vector(rng, 60, 0.3, 4)
            values = continuous_vector(rng, 60, 0.3)
            fast = anova_pair(pair_view(labels, values), 4)
            assert_matches(fast, oracle_anova(labels, values, 4))

    def test_kruskal(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            labels = label_vector(rng, 60, 0.3, 4)
            values = np.round(continuous_vector(rng, 60, 0.3), 1)
            fast = kruskal_pair(presort_feature(values), labels, 4)
            assert_matches(fast, oracle_kruskal(labels, values, 4))

    def test_exact_p_matches_enumeration(self):
        """DP exact p equals the full enumeration on tiny groups."""
        rng = np.random.default_rng(18)
        for n0 in range(1, 5):
            for n1 in range(1, 5):
                values = rng.permutation(100)[: n0 + n1].astype(np.float64)
                labels = np.concatenate(
                    [np.zeros(n0), np.ones(n1)]
                )
                fast = mwu_pair(
                    presort_feature(values), labels, mode="exact"
                )
                expected = permutation_mwu(values[:n0], values[n0:])
                assert abs(fast[1] - float(expected)) <= 1e-15


# ---------------------------------------------------------------- #
# Whole-matrix baseline
# ---------------------------------------------------------------- #


class TestOracleRun:
    def matrices_for(self, test, rng):
        n_samples = 40
        if test in ("pearson", "spearman"):
            raw = rng.uniform(size=(5, n_samples))
            raw[rng.random(raw.shape) < 0.25] = np.nan
            return (make_matrix(raw, "continuous"),)
        if test == "chi2":
            raw = np.vstack(
                [label_vector(rng, n_samples, 0.25, 4) for _ in range(4)]
            )
            return (make_matrix(raw, "categorical"),)
        c = 2 if test in ("ttest", "mwu") else 4
        kind = "dichotomous" if c == 2 else "categorical"
        labs = np.vstack(
            [label_vector(rng, n_samples, 0.25, c) for _ in range(3)]
        )
        cont = rng.uniform(size=(4, n_samples))
        cont[rng.random(cont.shape) < 0.25] = np.nan
        return (make_matrix(labs, kind), make_matrix(cont, "continuous"))

    def test_matches_engine_on_every_test(self):
        """The baseline and the engine agree cell by cell."""
        rng = np.random.default_rng(19)
        for test in TESTS:
            mats = self.matrices_for(test, rng)
            request = TestRequest(test=test, outputs=outputs_for(test))
            slow = oracle_run(request, *mats)
            fast = run(request, *mats)
            assert slow.shape == fast.shape
            assert set(slow.matrices) == set(fast.matrices)
            for name in slow.matrices:
                tol = 1e-9 if name.startswith("p_") else 1e-10
                assert_matches(fast[name], slow[name], tol=tol)

    def test_rejects_kind_mismatch(self):
        rng = np.random.default_rng(20)
        (cont,) = self.matrices_for("pearson", rng)
        with pytest.raises(KindMismatch):
            oracle_run(TestRequest(test="chi2", outputs=("stat",)), cont)

    def test_rejects_superfluous_matrix(self):
        rng = np.random.default_rng(21)
        (cont,) = self.matrices_for("pearson", rng)
        with pytest.raises(ValueError, match="single"):
            oracle_run(
                TestRequest(test="pearson", outputs=("stat",)), cont, cont
            )
