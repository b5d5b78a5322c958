"""Tests for sample statistics, intervals and Monte Carlo experiments."""
import math

import numpy as np
import pytest

from core.exceptions import (
    DomainError,
    FormulaWindowError,
    InsufficientDataError,
    LevelError,
    NonPositiveScaleError,
)
from services.estimators import (
    bias_experiment,
    confidence_interval,
    coverage_experiment,
    interval_quantile,
    lln_check,
    sample_kurtosis,
    summarize,
    variance_factor,
)
from services.qgaussian import make_params, sample


class TestSummarize:
    def test_statistics(self):
        stats = summarize([1.0, 2.0, 3.0, 4.0], 1.2)
        assert stats.n == 4
        assert stats.mean == pytest.approx(2.5)
        assert stats.s2 == pytest.approx(1.25)
        assert stats.sigma2_hat == pytest.approx(4.0 / 3.0 * (1.4 / 1.8) * 1.25, rel=1e-14)

    def test_classical_correction_is_bessel(self):
        stats = summarize([1.0, 2.0, 3.0, 4.0], 1.0)
        assert stats.sigma2_hat == pytest.approx(5.0 / 3.0, rel=1e-14)

    def test_needs_two_observations(self):
        with pytest.raises(InsufficientDataError, match="at least 2"):
            summarize([1.0], 1.0)

    def test_variance_window(self):
        with pytest.raises(FormulaWindowError, match="5/3"):
            summarize([1.0, 2.0], 1.7)

    def test_variance_factor(self):
        assert variance_factor(1.0) == 1.0
        assert variance_factor(1.5) == pytest.approx(3.0)


def test_sample_kurtosis():
    rng = np.random.default_rng(3)
    assert sample_kurtosis(rng.standard_normal(200_000)) == pytest.approx(3.0, abs=0.05)
    with pytest.raises(DomainError):
        sample_kurtosis([2.0, 2.0, 2.0])


class TestConfidenceInterval:
    def test_classical_half_width(self):
        stats = summarize(np.linspace(-1.0, 1.0, 100), 1.0)
        interval = confidence_interval(stats, 1.0, 0.95)
        assert 0.5 * (interval.hi - interval.lo) == pytest.approx(
            1.959963984540054 * 0.1, rel=1e-9
        )
        assert interval.method == "clt"

    def test_q_quantile_is_wider_for_heavy_tails(self):
        stats = summarize([0.1, -0.3, 0.7, 0.2], 1.5)
        clt = confidence_interval(stats, 1.0, 0.95, "clt")
        heavy = confidence_interval(stats, 1.0, 0.95, "q-quantile")
        assert heavy.z > clt.z
        assert heavy.standard_error == clt.standard_error

    def test_standard_error_includes_variance_factor(self):
        stats = summarize([0.0, 1.0], 1.5)
        interval = confidence_interval(stats, 2.0)
        assert interval.standard_error == pytest.approx(math.sqrt(3.0 * 2.0 / 2.0))

    def test_rejects_bad_inputs(self):
        stats = summarize([0.0, 1.0], 1.0)
        with pytest.raises(NonPositiveScaleError):
            confidence_interval(stats, 0.0)
        with pytest.raises(LevelError):
            confidence_interval(stats, 1.0, 1.0)
        with pytest.raises(LevelError):
            interval_quantile(1.0, 0.0)


class TestExperiments:
    def test_bias_is_reproducible(self):
        p = make_params(1.3)
        first = bias_experiment(p, 10, 2_000, seed=11, workers=2)
        second = bias_experiment(p, 10, 2_000, seed=11, workers=2)
        assert first == second
        assert first.workers == 2
        assert type(first.passed) is bool

    def test_bias_rejects_small_inputs(self):
        with pytest.raises(InsufficientDataError):
            bias_experiment(make_params(1.0), 1, 100)
        with pytest.raises(FormulaWindowError):
            bias_experiment(make_params(1.7), 10, 100)

    @pytest.mark.slow
    @pytest.mark.parametrize("q,n", [(1.0, 10), (1.3, 10), (1.5, 20)])
    def test_bias_gate(self, q, n):
        report = bias_experiment(make_params(q), n, 100_000, seed=2024, workers=4)
        assert report.passed
        assert abs(report.z_sigma2_hat) <= report.gate

    def test_lln(self):
        report = lln_check(make_params(1.3, 0.5, 1.0), (100, 10_000, 100_000), seed=5)
        assert report.passed is True
        assert [row.n for row in report.rows] == [100, 10_000, 100_000]

    def test_lln_rejects_empty_schedule(self):
        with pytest.raises(DomainError):
            lln_check(make_params(1.0), ())

    @pytest.mark.slow
    def test_coverage(self):
        report = coverage_experiment(make_params(1.2, 0.5, 2.0), 400, 2_000, 0.95, seed=9)
        assert report.passed
        assert report.coverage == pytest.approx(0.95, abs=0.02)

    @pytest.mark.filterwarnings("error::DeprecationWarning")
    def test_coverage_is_reproducible(self):
        p = make_params(1.2)
        first = coverage_experiment(p, 20, 200, seed=4)
        second = coverage_experiment(p, 20, 200, seed=4)
        assert first.coverage == second.coverage
        assert type(first.passed) is bool


def test_sampled_variance_matches_closed_form():
    p = make_params(1.3, 0.0, 2.0)
    draws = sample(p, np.random.default_rng(8), 400_000)
    assert draws.var() == pytest.approx(variance_factor(1.3) * 2.0, rel=0.05)
