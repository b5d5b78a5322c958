"""The q-deformed algebra: q-exponential, q-logarithm, q-sum, q-product.

Every operation accepts a scalar or an array for its real arguments and
returns a ``float`` for scalar input. At q = 1 (within ``settings.q_one_band``)
each operation takes a dedicated classical branch (exp, log, +, x) instead
of evaluating the deformed formula, since 1/(1-q) is unbounded there.

The cutoff ``[u]_+`` of the q-exponential maps a non-positive bracket to 0
for q < 1 and to +inf (the pole) for q > 1. The same convention applies to
the q-product and the q-inverse.
"""
from typing import Union

import numpy as np

from core.config import settings
from core.exceptions import DomainError, NonPositiveArgumentError, PoleError

ArrayLike = Union[float, np.ndarray]


def is_classical(q: float) -> bool:
    """True when q is close enough to 1 to use ordinary arithmetic."""
    return abs(q - 1.0) < settings.q_one_band


def _finish(value: np.ndarray) -> ArrayLike:
    if np.ndim(value) == 0:
        return float(value)
    return value


def _cutoff_power(q: float, base: np.ndarray, exponent: float) -> np.ndarray:
    """Evaluate [base]_+^exponent with the 0 / +inf cutoff convention."""
    positive = base > 0
    safe = np.where(positive, base, 1.0)
    with np.errstate(over="ignore", divide="ignore"):
        powered = np.power(safe, exponent)
    beyond = 0.0 if q < 1 else np.inf
    return np.where(positive, powered, beyond)


def _require_positive(name: str, x: np.ndarray) -> None:
    if np.any(~(x > 0)):
        bad = x[~(x > 0)] if x.ndim else x
        raise NonPositiveArgumentError(name, float(np.ravel(bad)[0]))


def q_exp(q: float, x: ArrayLike) -> ArrayLike:
    """e_q(x) = [1 + (1-q) x]_+^{1/(1-q)}; exp(x) at q = 1."""
    x = np.asarray(x, dtype=float)
    if is_classical(q):
        with np.errstate(over="ignore"):
            return _finish(np.exp(x))
    return _finish(_cutoff_power(q, 1.0 + (1.0 - q) * x, 1.0 / (1.0 - q)))


def q_log(q: float, x: ArrayLike) -> ArrayLike:
    """ln_q(x) = (x^{1-q} - 1) / (1-q) for x > 0; log(x) at q = 1."""
    x = np.asarray(x, dtype=float)
    _require_positive("q_log", x)
    if is_classical(q):
        return _finish(np.log(x))
    with np.errstate(over="ignore"):
        return _finish((np.power(x, 1.0 - q) - 1.0) / (1.0 - q))


def q_sum(q: float, x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """x (+)_q y = x + y + (1-q) x y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if is_classical(q):
        return _finish(x + y)
    return _finish(x + y + (1.0 - q) * x * y)


def q_prod(q: float, x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """x (x)_q y = [x^{1-q} + y^{1-q} - 1]_+^{1/(1-q)} for x, y > 0.

    The outer exponent is 1/(1-q); with it e_q(a) (x)_q e_q(b) = e_q(a + b).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _require_positive("q_prod", x)
    _require_positive("q_prod", y)
    if is_classical(q):
        return _finish(x * y)
    with np.errstate(over="ignore"):
        base = np.power(x, 1.0 - q) + np.power(y, 1.0 - q) - 1.0
    return _finish(_cutoff_power(q, base, 1.0 / (1.0 - q)))


def q_neg(q: float, x: ArrayLike) -> ArrayLike:
    """Additive inverse: -x / (1 + (1-q) x), so that x (+)_q q_neg(x) = 0."""
    x = np.asarray(x, dtype=float)
    if is_classical(q):
        return _finish(-x)
    denominator = 1.0 + (1.0 - q) * x
    if np.any(denominator == 0):
        pole = np.ravel(x[denominator == 0] if x.ndim else x)[0]
        raise PoleError("q_neg", q, float(pole))
    return _finish(-x / denominator)


def q_inv(q: float, x: ArrayLike) -> ArrayLike:
    """Multiplicative inverse: [2 - x^{1-q}]_+^{1/(1-q)} for x > 0."""
    x = np.asarray(x, dtype=float)
    _require_positive("q_inv", x)
    if is_classical(q):
        return _finish(1.0 / x)
    with np.errstate(over="ignore"):
        base = 2.0 - np.power(x, 1.0 - q)
    return _finish(_cutoff_power(q, base, 1.0 / (1.0 - q)))


def q_sum_fold(q: float, t: ArrayLike, n: int) -> ArrayLike:
    """t (+)_q t (+)_q ... (+)_q t with n terms: ([1 + (1-q) t]^n - 1) / (1-q)."""
    if n < 1:
        raise DomainError(f"fold count must be >= 1 (got {n})")
    t = np.asarray(t, dtype=float)
    if n == 1:
        return _finish(t)
    if is_classical(q):
        return _finish(n * t)
    with np.errstate(over="ignore"):
        return _finish((np.power(1.0 + (1.0 - q) * t, n) - 1.0) / (1.0 - q))


def q_prod_fold(q: float, t: ArrayLike, n: int) -> ArrayLike:
    """t (x)_q t (x)_q ... (x)_q t with n factors: [n t^{1-q} - (n-1)]_+^{1/(1-q)}."""
    if n < 1:
        raise DomainError(f"fold count must be >= 1 (got {n})")
    t = np.asarray(t, dtype=float)
    _require_positive("q_prod_fold", t)
    if n == 1:
        return _finish(t)
    if is_classical(q):
        return _finish(np.power(t, n))
    with np.errstate(over="ignore"):
        base = n * np.power(t, 1.0 - q) - (n - 1)
    return _finish(_cutoff_power(q, base, 1.0 / (1.0 - q)))
