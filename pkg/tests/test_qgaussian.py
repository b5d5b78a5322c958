"""Tests for the q-Gaussian family."""
import math

import numpy as np
import pytest
from scipy import stats

from core.exceptions import (
    DegenerateTransformError,
    DomainError,
    EscortDomainError,
    LevelError,
    NonPositiveScaleError,
    QOutOfRangeError,
)
from services.qgaussian import (
    affine,
    cdf,
    cdf_table,
    degrees_of_freedom,
    duality_residual,
    escort_map,
    escort_residual,
    integrate_over_support,
    make_params,
    nu_p,
    nu_p_oracle,
    pdf,
    quantile,
    sample,
    student_t_residual,
)


class TestParams:
    def test_derived_constants(self):
        p = make_params(1.0, 0.5, 4.0)
        assert p.beta == 0.5
        assert p.sigma == 2.0
        assert p.prefactor == pytest.approx(1.0 / (2.0 * math.sqrt(2.0 * math.pi)))
        assert p.support == (-math.inf, math.inf)

    def test_compact_support(self):
        p = make_params(0.0)
        assert p.half_width == pytest.approx(math.sqrt(3.0))
        assert p.support == pytest.approx((-math.sqrt(3.0), math.sqrt(3.0)))

    def test_rejects_q_at_three(self):
        with pytest.raises(QOutOfRangeError, match="q must be < 3"):
            make_params(3.0)

    @pytest.mark.parametrize("sigma2", [0.0, -1.0, math.inf])
    def test_rejects_bad_scale(self, sigma2):
        with pytest.raises(NonPositiveScaleError):
            make_params(1.0, 0.0, sigma2)

    def test_rejects_infinite_location(self):
        with pytest.raises(DomainError):
            make_params(1.0, math.inf)


def test_standard_normal_density(standard):
    assert pdf(standard, 0.0) == pytest.approx(0.398942280401433, rel=1e-14)


def test_cauchy_density(cauchy):
    x = np.array([-2.0, 0.0, 0.5, 3.0])
    np.testing.assert_allclose(pdf(cauchy, x), 1.0 / (math.pi * (1.0 + x * x)), rtol=1e-13)


def test_density_vanishes_outside_compact_support(compact):
    lo, hi = compact.support
    assert pdf(compact, hi + 0.1) == 0.0
    assert pdf(compact, lo - 0.1) == 0.0
    assert pdf(compact, compact.m) == pytest.approx(compact.prefactor)


@pytest.mark.parametrize("q", [-1.0, 0.5, 1.0, 1.5, 2.5])
def test_density_is_normalized(q):
    p = make_params(q, 0.5, 2.0)
    mass = integrate_over_support(p, lambda x: pdf(p, x))
    assert mass.converged
    assert mass.value == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("q", [1.2, 1.5, 2.0, 2.5])
def test_student_t_identification(q):
    y = np.linspace(-10.0, 10.0, 41)
    assert student_t_residual(q, y) < 1e-10
    standard = make_params(q)
    np.testing.assert_allclose(
        pdf(standard, y), stats.t.pdf(y, degrees_of_freedom(q)), rtol=1e-10
    )


def test_degrees_of_freedom():
    assert degrees_of_freedom(1.5) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        degrees_of_freedom(0.5)


def test_cdf_reference_values(standard, cauchy):
    assert cdf(standard, 1.0) == pytest.approx(0.8413447460685429, abs=1e-9)
    assert cdf(cauchy, 1.0) == pytest.approx(0.75, abs=1e-9)
    assert cdf(standard, 0.0) == 0.5


def test_cdf_matches_student_t():
    p = make_params(1.5, 1.0, 2.0)
    x = np.array([-5.0, -1.0, 0.5, 1.0, 4.0, 30.0])
    expected = stats.t.cdf((x - 1.0) / math.sqrt(2.0), 3.0)
    np.testing.assert_allclose(cdf(p, x), expected, atol=1e-9)


@pytest.mark.parametrize("q", [1.95, 2.0, 2.1, 2.5])
def test_heavy_tail_cdf_and_quantile_match_student_t(q):
    standard = make_params(q)
    nu = degrees_of_freedom(q)
    y = np.array([0.25, 1.0, 3.0, 40.0])
    np.testing.assert_allclose(cdf(standard, y), stats.t.cdf(y, nu), rtol=0.0, atol=1e-10)
    for u in (0.6, 0.75, 0.99):
        assert quantile(standard, u) == pytest.approx(stats.t.ppf(u, nu), rel=1e-8)


@pytest.mark.parametrize("q", [-1.0, 0.5, 1.0, 2.0, 2.5])
def test_cdf_table_holds_half_the_mass(q):
    assert cdf_table(q).tail_mass[0] == pytest.approx(0.5, abs=1e-12)


def test_survival_past_the_table_end():
    y = np.array([2.0e8])
    assert cdf_table(2.0).survival(y)[0] == pytest.approx(
        math.atan(1.0 / 2.0e8) / math.pi, rel=1e-8
    )


def test_cdf_at_compact_support_edges(compact):
    lo, hi = compact.support
    assert cdf(compact, hi) == pytest.approx(1.0, abs=1e-12)
    assert cdf(compact, hi + 1.0) == pytest.approx(1.0, abs=1e-12)
    assert cdf(compact, lo - 1.0) == pytest.approx(0.0, abs=1e-12)


def test_quantile_reference_values(standard, cauchy):
    assert quantile(standard, 0.975) == pytest.approx(1.959963984540054, abs=1e-9)
    assert quantile(cauchy, 0.75) == pytest.approx(1.0, abs=1e-9)
    assert quantile(cauchy, 0.5) == 0.0


@pytest.mark.parametrize("q", [0.0, 0.5, 1.0, 1.5, 2.5])
def test_quantile_inverts_cdf(q):
    p = make_params(q, -0.2, 0.8)
    for u in (0.01, 0.3, 0.6, 0.99):
        assert cdf(p, quantile(p, u)) == pytest.approx(u, abs=1e-9)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.5])
def test_quantile_rejects_levels(standard, u):
    with pytest.raises(LevelError):
        quantile(standard, u)


class TestSampler:
    def test_same_seed_same_draws(self, heavy):
        first = sample(heavy, np.random.default_rng(7), 50)
        second = sample(heavy, np.random.default_rng(7), 50)
        np.testing.assert_array_equal(first, second)

    def test_empty_and_negative(self, heavy, rng):
        assert sample(heavy, rng, 0).size == 0
        with pytest.raises(DomainError):
            sample(heavy, rng, -1)

    def test_compact_draws_stay_in_support(self, compact, rng):
        draws = sample(compact, rng, 10_000)
        lo, hi = compact.support
        assert draws.min() >= lo
        assert draws.max() <= hi

    @pytest.mark.parametrize("q", [0.5, 1.0, 1.5])
    def test_draws_follow_cdf(self, q, rng):
        p = make_params(q, 0.3, 1.5)
        draws = sample(p, rng, 20_000)
        result = stats.kstest(draws, lambda x: cdf(p, x))
        assert result.pvalue > 1e-4


def test_affine():
    p = make_params(1.5, 1.0, 2.0)
    image = affine(p, 3.0, -2.0)
    assert image.q == 1.5
    assert image.m == pytest.approx(1.0)
    assert image.sigma2 == pytest.approx(8.0)
    with pytest.raises(DegenerateTransformError):
        affine(p, 1.0, 0.0)


def test_duality():
    y = np.linspace(0.0, 3.0, 31)
    for q in (0.5, 1.5, 2.5):
        assert np.max(duality_residual(q, y)) < 1e-12
    with pytest.raises(DomainError):
        duality_residual(0.0, y)


class TestEscort:
    def test_power_one_is_identity(self, heavy):
        image = escort_map(heavy, 1.0)
        assert image.q_prime == pytest.approx(heavy.q)
        assert image.sigma2_prime == pytest.approx(heavy.sigma2)

    def test_escort_image_q(self):
        p = make_params(1.5)
        # q' = 1 - (1-q)/power
        assert escort_map(p, 1.5).q_prime == pytest.approx(4.0 / 3.0)

    @pytest.mark.parametrize("q,power", [(1.5, 1.5), (1.5, 2.0), (1.2, 1.4), (0.5, 2.0)])
    def test_escort_density(self, q, power):
        p = make_params(q, 0.4, 1.5)
        points = np.linspace(p.m - 4.0 * p.sigma, p.m + 4.0 * p.sigma, 41)
        assert escort_residual(p, power, points) < 1e-8

    @pytest.mark.parametrize("q,power", [(1.0, 2.0), (1.5, 1.5), (0.5, 2.0), (1.2, 0.8)])
    def test_nu_p_matches_quadrature(self, q, power):
        p = make_params(q, -0.3, 0.8)
        oracle = nu_p_oracle(p, power)
        assert oracle.converged
        assert nu_p(p, power) == pytest.approx(oracle.value, rel=1e-9)

    def test_rejects_non_positive_power(self, heavy):
        with pytest.raises(DomainError):
            escort_map(heavy, 0.0)

    def test_rejects_image_outside_family(self):
        # q' = 1 - (1 - 2.5)/0.5 = 4
        with pytest.raises(EscortDomainError):
            escort_map(make_params(2.5), 0.5)
