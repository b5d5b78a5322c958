"""Tests for the quadrature, differentiation and root-finding oracle."""
import math

import numpy as np
import pytest

from core.exceptions import BracketError, DivergenceError, DomainError
from models.domain import QuadratureResult
from services.numerics import (
    differentiate_n,
    find_root,
    integrate,
    measured_tail_exponent,
    require_converged,
)


def test_integrate_finite_interval():
    result = integrate(np.sin, 0.0, math.pi)
    assert result.converged
    assert result.value == pytest.approx(2.0, rel=1e-12)


def test_integrate_whole_line():
    result = integrate(lambda x: np.exp(-x * x), -math.inf, math.inf)
    assert result.converged
    assert result.value == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_integrate_power_tail():
    result = integrate(lambda x: 1.0 / (1.0 + x * x), -math.inf, math.inf, tail_exponent=2.0)
    assert result.converged
    assert result.value == pytest.approx(math.pi, rel=1e-10)


def test_integrate_flags_divergent_tail():
    result = integrate(lambda x: 1.0 / (1.0 + np.abs(x)), -math.inf, math.inf, tail_exponent=1.0)
    assert not result.converged
    assert result.value == math.inf
    assert result.evaluations == 0


def test_integrate_reversed_limits():
    forward = integrate(np.cos, 0.0, 1.0)
    backward = integrate(np.cos, 1.0, 0.0)
    assert backward.value == pytest.approx(-forward.value, rel=1e-15)


def test_integrate_empty_interval():
    result = integrate(np.cos, 1.0, 1.0)
    assert result.value == 0.0
    assert result.converged


def test_integrate_rejects_bad_tolerance():
    with pytest.raises(DomainError):
        integrate(np.cos, 0.0, 1.0, tol=0.0)


def test_require_converged():
    ok = QuadratureResult(value=1.5, error_estimate=0.0, evaluations=15, converged=True)
    assert require_converged(ok, "ok") == 1.5
    bad = ok.model_copy(update={"converged": False, "error_estimate": 1.0})
    with pytest.raises(DivergenceError, match="did not converge"):
        require_converged(bad, "bad")


@pytest.mark.parametrize("n,expected", [(1, 1.0), (2, -0.0), (3, -1.0), (4, 0.0)])
def test_differentiate_sin_at_zero(n, expected):
    assert differentiate_n(math.sin, 0.0, n) == pytest.approx(expected, abs=1e-6)


def test_differentiate_exp():
    assert differentiate_n(math.exp, 1.0, 2) == pytest.approx(math.e, rel=1e-8)


def test_differentiate_rejects_order():
    with pytest.raises(DomainError):
        differentiate_n(math.sin, 0.0, 5)


def test_find_root():
    assert find_root(math.cos, 0.0, 3.0) == pytest.approx(math.pi / 2.0, abs=1e-11)


def test_find_root_needs_a_bracket():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_integrate_heavy_tail_without_a_hint():
    # (1 + x^2)^(-2/3) decays like |x|^(-4/3): most of the mass the rational map cannot reach.
    expected = math.sqrt(math.pi) * math.gamma(1.0 / 6.0) / math.gamma(2.0 / 3.0)
    result = integrate(lambda x: (1.0 + x * x) ** (-2.0 / 3.0), -math.inf, math.inf)
    assert result.converged
    assert result.value == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("hint", [None, 2.0])
def test_integrate_tail_from_a_far_edge(hint):
    edge = 1.187e8
    result = integrate(
        lambda x: 1.0 / (math.pi * (1.0 + x * x)), edge, math.inf, tail_exponent=hint
    )
    assert result.converged
    assert result.value == pytest.approx(math.atan(1.0 / edge) / math.pi, rel=1e-8)


def test_integrate_detects_divergent_tail_without_a_hint():
    result = integrate(lambda x: 1.0 / (1.0 + np.abs(x)), 0.0, math.inf)
    assert not result.converged
    assert result.value == math.inf


def test_measured_tail_exponent():
    assert measured_tail_exponent(lambda x: x**-3.0, 1.0, 1.0, 1.0) == pytest.approx(3.0)
    assert measured_tail_exponent(lambda x: np.exp(-x * x), 1.0, 1.0, 1.0) is None
