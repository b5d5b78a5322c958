"""Tests for the q-Laplace transform."""
import math

import pytest

from core.exceptions import DomainError, FormulaWindowError, MismatchedQError
from services.qlaplace import (
    certify_laplace_sign,
    derivative_ladder_check,
    ladder_coefficient,
    laplace_closed,
    laplace_oracle,
    nonlinearity_gap,
    ordinary_sum_discrepancy,
    q_independence_residual,
    sum_params,
    theta_limits,
)
from services.qgaussian import make_params


def test_classical_transform_is_the_mgf(standard):
    result = laplace_closed(standard, 1.0)
    assert result.value == pytest.approx(1.64872127070013, rel=1e-13)
    assert result.method == "closed_form"


def test_sign_is_certified_plus():
    verdict = certify_laplace_sign()
    assert verdict.certified == "plus"
    assert verdict.max_rel_err_plus < 1e-7
    assert verdict.max_rel_err_minus > 1e-4
    assert verdict.cases > 0


@pytest.mark.parametrize("q", [1.0, 1.1, 1.3, 1.5])
@pytest.mark.parametrize("theta", [-0.1, 0.05])
def test_closed_form_matches_oracle(q, theta):
    p = make_params(q, 0.3, 1.2)
    oracle = laplace_oracle(p, theta)
    assert oracle.converged
    assert laplace_closed(p, theta).value == pytest.approx(oracle.value, rel=1e-7)


def test_minus_variant_disagrees_with_oracle():
    p = make_params(1.3, 0.3, 1.2)
    oracle = laplace_oracle(p, 0.1)
    minus = laplace_closed(p, 0.1, "minus")
    assert minus.variant == "minus"
    assert abs(minus.value - oracle.value) / oracle.value > 1e-4


def test_theta_limits():
    assert theta_limits(make_params(1.0)) == (-math.inf, math.inf)
    lower, upper = theta_limits(make_params(1.5, 0.3, 1.2))
    assert lower < 0 < upper
    assert math.isfinite(lower) and math.isfinite(upper)


def test_oracle_outside_theta_limits():
    p = make_params(1.5, 0.3, 1.2)
    _, upper = theta_limits(p)
    result = laplace_oracle(p, 2.0 * upper)
    assert not result.converged
    assert result.value == math.inf


def test_transform_window(compact):
    with pytest.raises(FormulaWindowError, match="1 <= q < 3"):
        laplace_closed(compact, 0.1)
    with pytest.raises(FormulaWindowError):
        laplace_oracle(compact, 0.1)


def test_ladder_coefficient():
    assert ladder_coefficient(1.0, 4) == 1.0
    assert ladder_coefficient(1.5, 3) == pytest.approx(3.0)


@pytest.mark.parametrize("q", [1.0, 1.2])
@pytest.mark.parametrize("n", [1, 2])
def test_derivative_ladder(q, n):
    report = derivative_ladder_check(make_params(q, 0.3, 1.2), n)
    assert report.rel_err is not None
    assert report.rel_err < 1e-4


def test_derivative_ladder_order():
    with pytest.raises(DomainError):
        derivative_ladder_check(make_params(1.2), 5)


def test_sum_params():
    combined = sum_params(make_params(1.3, 1.0, 2.0), make_params(1.3, -1.0, 3.0))
    assert combined.m == 0.0
    assert combined.sigma2 == 5.0
    with pytest.raises(MismatchedQError):
        sum_params(make_params(1.3), make_params(1.5))


def test_q_independence_holds_only_classically():
    classical = q_independence_residual(make_params(1.0), make_params(1.0, 1.0, 2.0), 0.1)
    assert classical < 1e-12
    deformed = q_independence_residual(make_params(1.5), make_params(1.5), 0.1)
    assert deformed > 1e-6


def test_nonlinearity():
    linear = nonlinearity_gap(make_params(1.0), make_params(1.0, 2.0, 0.5), 0.1)
    assert linear < 1e-9
    nonlinear = nonlinearity_gap(make_params(1.5), make_params(1.5, 2.0, 0.5), 0.1)
    assert nonlinear > 1e-6


def test_ordinary_sums_break_the_q_sum_law():
    report = ordinary_sum_discrepancy(make_params(1.5), 100_000, seed=7)
    assert report.discrepancy_detected
    assert report.predicted == pytest.approx(1.5594, abs=1e-3)
    assert report.empirical > report.predicted


def test_ordinary_sums_are_gaussian_at_q_one():
    report = ordinary_sum_discrepancy(make_params(1.0), 100_000, seed=7)
    assert not report.discrepancy_detected
    assert report.predicted == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-8)


def test_ordinary_sum_window():
    with pytest.raises(FormulaWindowError):
        ordinary_sum_discrepancy(make_params(1.7), 1_000)
