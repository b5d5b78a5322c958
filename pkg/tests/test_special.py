"""Tests for special functions."""
import math

import pytest
from scipy import integrate, stats

from core.exceptions import NonPositiveArgumentError, QOutOfRangeError
from services.qalgebra import q_exp
from services.special import SQRT_PI, beta_fn, c_q, log_gamma, student_t_pdf


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 17.3])
def test_log_gamma(x):
    assert log_gamma(x) == pytest.approx(math.lgamma(x), abs=1e-12)


def test_log_gamma_rejects_non_positive():
    with pytest.raises(NonPositiveArgumentError):
        log_gamma(0.0)


def test_beta_fn():
    assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)
    assert beta_fn(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-13)


def test_c_q_known_values():
    assert c_q(1.0) == SQRT_PI
    # Cauchy: integral of 1/(1+x^2).
    assert c_q(2.0) == pytest.approx(math.pi, rel=1e-13)
    # Integral of (1-x^2) over [-1, 1].
    assert c_q(0.0) == pytest.approx(4.0 / 3.0, rel=1e-13)


@pytest.mark.parametrize("q", [-0.5, 0.5, 0.9, 1.1, 1.5, 2.0])
def test_c_q_matches_quadrature(q):
    if q < 1:
        edge = 1.0 / math.sqrt(1.0 - q)
        expected, _ = integrate.quad(lambda x: q_exp(q, -x * x), -edge, edge)
    else:
        expected, _ = integrate.quad(lambda x: q_exp(q, -x * x), -math.inf, math.inf)
    assert c_q(q) == pytest.approx(expected, rel=1e-7)


def test_c_q_is_continuous_at_one():
    assert c_q(1.0 + 1e-8) == SQRT_PI
    assert abs(c_q(1.0 + 1e-5) - SQRT_PI) < 1e-4


def test_c_q_rejects_q_at_three():
    with pytest.raises(QOutOfRangeError, match="q must be < 3"):
        c_q(3.0)


@pytest.mark.parametrize("nu,y", [(1.0, 0.0), (3.0, 1.5), (7.5, -2.0)])
def test_student_t_pdf(nu, y):
    assert student_t_pdf(nu, y) == pytest.approx(stats.t.pdf(y, nu), rel=1e-12)
