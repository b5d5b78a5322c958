"""Ordinary, unnormalized and escort-normalized moments of q-Gaussians.

Closed forms come with validity windows; oracle values are quadratures of
the density (or of a power of it) and report non-convergence instead of
raising when the moment does not exist.
"""
import logging
import math
from typing import Literal, Optional

import numpy as np

from core.exceptions import DomainError, FormulaWindowError
from models.domain import MomentReport, QGaussianParams, QuadratureResult
from services.qalgebra import is_classical
from services.qgaussian import escort_map, integrate_over_support, pdf, tail_exponent

logger = logging.getLogger(__name__)

MEAN_WINDOW_TOP = 2.0
VARIANCE_WINDOW_TOP = 5.0 / 3.0
KURTOSIS_WINDOW_TOP = 7.0 / 5.0
NORMALIZED_KURTOSIS_WINDOW = (3.0 / 4.0, 3.0)

KurtosisShape = Literal["leptokurtic", "platykurtic", "mesokurtic"]


def _require_order(n: int) -> None:
    if n < 0:
        raise DomainError(f"moment order must be >= 0 (got {n})")


def _require_below(formula: str, q: float, top: float, label: str) -> None:
    if not q < top:
        raise FormulaWindowError(formula, q, f"q < {label}")


def _require_power(p: QGaussianParams, power: float) -> None:
    # pdf^0 is uniform on a compact support and not integrable on the real line.
    if power > 0 or (power == 0 and p.q < 1):
        return
    raise DomainError(f"density power must be > 0 (got {power:g} at q={p.q:g})")


def raw_moment_oracle(p: QGaussianParams, n: int) -> QuadratureResult:
    """Quadrature of x^n pdf(x). Unconverged when the moment is infinite (q >= (n+3)/(n+1))."""
    _require_order(n)
    return integrate_over_support(
        p, lambda x: np.power(x, n) * pdf(p, x), tail=tail_exponent(p.q, 1.0, n)
    )


def central_moment_oracle(p: QGaussianParams, n: int) -> QuadratureResult:
    """Quadrature of (x-m)^n pdf(x)."""
    _require_order(n)
    return integrate_over_support(
        p, lambda x: np.power(x - p.m, n) * pdf(p, x), tail=tail_exponent(p.q, 1.0, n)
    )


def unnormalized_q_moment(p: QGaussianParams, n: int, power: float) -> QuadratureResult:
    """Quadrature of x^n pdf(x)^power."""
    _require_order(n)
    _require_power(p, power)
    return integrate_over_support(
        p,
        lambda x: np.power(x, n) * np.power(pdf(p, x), power),
        tail=tail_exponent(p.q, power, n),
    )


def escort_moment_oracle(
    p: QGaussianParams, n: int, power: float, *, central: bool = True
) -> QuadratureResult:
    """Escort expectation of (x-m)^n (or x^n) under pdf^power / nu_power."""
    _require_order(n)
    _require_power(p, power)
    shift = p.m if central else 0.0
    numerator = integrate_over_support(
        p,
        lambda x: np.power(x - shift, n) * np.power(pdf(p, x), power),
        tail=tail_exponent(p.q, power, n),
    )
    normalizer = integrate_over_support(
        p, lambda x: np.power(pdf(p, x), power), tail=tail_exponent(p.q, power)
    )
    converged = numerator.converged and normalizer.converged and normalizer.value > 0
    if not converged:
        return QuadratureResult(
            value=math.inf,
            error_estimate=math.inf,
            evaluations=numerator.evaluations + normalizer.evaluations,
            converged=False,
        )
    value = numerator.value / normalizer.value
    error = (
        numerator.error_estimate + abs(value) * normalizer.error_estimate
    ) / normalizer.value
    return QuadratureResult(
        value=value,
        error_estimate=error,
        evaluations=numerator.evaluations + normalizer.evaluations,
        converged=True,
    )


def mean_closed(p: QGaussianParams) -> float:
    """E(X) = m, for q < 2."""
    _require_below("mean_closed", p.q, MEAN_WINDOW_TOP, "2")
    return p.m


def variance_closed(p: QGaussianParams) -> float:
    """V(X) = (3-q)/(5-3q) sigma2, for q < 5/3."""
    _require_below("variance_closed", p.q, VARIANCE_WINDOW_TOP, "5/3")
    return (3.0 - p.q) / (5.0 - 3.0 * p.q) * p.sigma2


def kurtosis_closed(q: float) -> float:
    """E(Y^4) / E(Y^2)^2 = 3(5-3q)/(7-5q), for q < 7/5."""
    _require_below("kurtosis_closed", q, KURTOSIS_WINDOW_TOP, "7/5")
    return 3.0 * (5.0 - 3.0 * q) / (7.0 - 5.0 * q)


def fourth_moment_closed(p: QGaussianParams) -> float:
    """E((X-m)^4) = 3(3-q)^2 / ((5-3q)(7-5q)) sigma2^2, for q < 7/5."""
    q = p.q
    _require_below("fourth_moment_closed", q, KURTOSIS_WINDOW_TOP, "7/5")
    return 3.0 * (3.0 - q) ** 2 / ((5.0 - 3.0 * q) * (7.0 - 5.0 * q)) * p.sigma2**2


def _require_laplace_window(formula: str, q: float) -> None:
    if q < 1 and not is_classical(q):
        raise FormulaWindowError(formula, q, "1 <= q < 3")


def eq_x_closed(p: QGaussianParams) -> float:
    """E_q(X) = m (3-q)^((3-q)/2) / (2 (sigma C_q)^(q-1)), for 1 <= q < 3."""
    q = p.q
    _require_laplace_window("eq_x_closed", q)
    log_factor = 0.5 * (3.0 - q) * math.log(3.0 - q) - (q - 1.0) * math.log(p.sigma * p.c_q)
    return p.m * math.exp(log_factor) / 2.0


def e2qm1_x2_closed(p: QGaussianParams) -> float:
    """E_{2q-1}(X^2) = [(3-q) sigma2 + (q+1) m^2] / (4q (3-q)^(q-2) (sigma C_q)^(2q-2))."""
    q = p.q
    _require_laplace_window("e2qm1_x2_closed", q)
    log_denominator = (
        math.log(4.0 * q)
        + (q - 2.0) * math.log(3.0 - q)
        + (2.0 * q - 2.0) * math.log(p.sigma * p.c_q)
    )
    numerator = (3.0 - q) * p.sigma2 + (q + 1.0) * p.m**2
    return numerator * math.exp(-log_denominator)


def normalized_mean(p: QGaussianParams) -> float:
    """Escort mean with power q; equals m whenever the escort image is valid."""
    escort_map(p, p.q)
    return p.m


def normalized_q_variance(p: QGaussianParams) -> float:
    """Escort variance with power 2q-1: (3-q)/(q+1) sigma2, for q >= 1/2.

    At q = 1/2 the power is 0 and the escort is uniform on the support.
    """
    if not p.q >= 0.5:
        raise FormulaWindowError("normalized_q_variance", p.q, "1/2 <= q < 3")
    if p.q > 0.5:
        escort_map(p, 2.0 * p.q - 1.0)
    return (3.0 - p.q) / (p.q + 1.0) * p.sigma2


def normalized_fourth_moment_closed(p: QGaussianParams) -> float:
    """Escort fourth central moment with power 4q-3: 3(3-q)^2 / ((5q-3)(3q-1)) sigma2^2."""
    q = p.q
    low, high = NORMALIZED_KURTOSIS_WINDOW
    if not low < q < high:
        raise FormulaWindowError("normalized_fourth_moment_closed", q, "3/4 < q < 3")
    escort_map(p, 4.0 * q - 3.0)
    return 3.0 * (3.0 - q) ** 2 / ((5.0 * q - 3.0) * (3.0 * q - 1.0)) * p.sigma2**2


def normalized_kurtosis_printed(q: float) -> float:
    """3(q+1)^2 / ((5q-3)(3q-1)) with no window check; +-inf at its poles."""
    numerator = 3.0 * (q + 1.0) ** 2
    denominator = (5.0 * q - 3.0) * (3.0 * q - 1.0)
    if denominator == 0:
        return math.inf
    return numerator / denominator


def normalized_kurtosis(q: float) -> float:
    """Escort kurtosis: fourth moment under power 4q-3 over the squared variance under power 2q-1.

    Both escort images exist and have finite moments exactly for 3/4 < q < 3.
    """
    low, high = NORMALIZED_KURTOSIS_WINDOW
    if not low < q < high:
        raise FormulaWindowError("normalized_kurtosis", q, "3/4 < q < 3")
    return normalized_kurtosis_printed(q)


def kurtosis_excess(q: float, sample_kurtosis: float, *, normalized: bool = False) -> float:
    """Sample kurtosis minus the q-Gaussian reference value; > 0 means leptokurtic."""
    reference = normalized_kurtosis(q) if normalized else kurtosis_closed(q)
    return sample_kurtosis - reference


def kurtosis_shape(excess: float, tolerance: float = 0.0) -> KurtosisShape:
    if excess > tolerance:
        return "leptokurtic"
    if excess < -tolerance:
        return "platykurtic"
    return "mesokurtic"


def moment_report(
    name: str, closed: Optional[float], oracle: QuadratureResult, *, scale: float = 0.0
) -> MomentReport:
    """Side-by-side closed form and oracle.

    ``rel_err`` is abs_err / max(|closed|, scale), falling back to abs_err
    when both are 0. Pass the natural unit of the quantity as ``scale`` for
    values that vanish by symmetry. Errors stay undefined unless both values
    are finite and the oracle converged.
    """
    closed_ok = closed is not None and math.isfinite(closed)
    oracle_ok = oracle.converged and math.isfinite(oracle.value)
    abs_err: Optional[float] = None
    rel_err: Optional[float] = None
    if closed_ok and oracle_ok:
        abs_err = abs(closed - oracle.value)
        denominator = max(abs(closed), scale)
        rel_err = abs_err / denominator if denominator > 0 else abs_err
    return MomentReport(
        name=name,
        closed_form=closed if closed_ok else None,
        oracle=oracle.value if math.isfinite(oracle.value) else None,
        abs_err=abs_err,
        rel_err=rel_err,
        oracle_converged=oracle.converged,
        error_estimate=oracle.error_estimate if math.isfinite(oracle.error_estimate) else None,
    )


MomentKind = Literal["raw", "central", "unnormalized", "normalized"]


def default_power(q: float, n: int, kind: MomentKind) -> float:
    """Density power of the q-moment family each closed form is stated for."""
    if kind in ("raw", "central"):
        return 1.0
    if n == 2:
        return 2.0 * q - 1.0
    if n == 4 and kind == "normalized":
        return 4.0 * q - 3.0
    return q


def moment_oracle(
    p: QGaussianParams, n: int, kind: MomentKind, power: Optional[float] = None
) -> QuadratureResult:
    """Quadrature of the requested moment. Normalized moments are central except for n = 1."""
    if kind == "raw":
        return raw_moment_oracle(p, n)
    if kind == "central":
        return central_moment_oracle(p, n)
    power = default_power(p.q, n, kind) if power is None else power
    if kind == "unnormalized":
        return unnormalized_q_moment(p, n, power)
    return escort_moment_oracle(p, n, power, central=n != 1)


def moment_closed_form(
    p: QGaussianParams, n: int, kind: MomentKind, power: Optional[float] = None
) -> Optional[float]:
    """Closed form of the requested moment, or None when none is known.

    Raises:
        FormulaWindowError: a closed form exists for this moment but not at this q.
    """
    _require_order(n)
    q, m = p.q, p.m
    if n == 0 and kind in ("raw", "central"):
        return 1.0
    if kind == "raw":
        if n == 1:
            return mean_closed(p)
        if n == 2:
            return variance_closed(p) + m * m
        if n == 3:
            return 3.0 * m * variance_closed(p) + m**3 if q < 1.5 else _odd_window(q, 3)
        if n == 4:
            variance = variance_closed(p)
            return fourth_moment_closed(p) + 6.0 * m * m * variance + m**4
        return None
    if kind == "central":
        if n % 2 == 1:
            return 0.0 if q < (n + 3.0) / (n + 1.0) else _odd_window(q, n)
        if n == 2:
            return variance_closed(p)
        if n == 4:
            return fourth_moment_closed(p)
        return None
    power = default_power(q, n, kind) if power is None else power
    if kind == "unnormalized":
        if n == 1 and power == q:
            return eq_x_closed(p)
        if n == 2 and power == 2.0 * q - 1.0:
            return e2qm1_x2_closed(p)
        return None
    if n == 1 and power == q:
        return normalized_mean(p)
    if n == 2 and power == 2.0 * q - 1.0:
        return normalized_q_variance(p)
    if n == 4 and power == 4.0 * q - 3.0:
        return normalized_fourth_moment_closed(p)
    return None


def _odd_window(q: float, n: int) -> float:
    top = (n + 3.0) / (n + 1.0)
    raise FormulaWindowError(f"moment of order {n}", q, f"q < {top:g}")
