"""The q-Laplace transform, for 1 <= q < 3.

L_q(f)(theta) is evaluated through its standard-product form
integral of f(x) e_q(theta x f(x)^(q-1)) dx. For q > 1 the transform is
nonlinear in f, and it only exists for theta in a bounded interval around 0
where the q-exponential's bracket stays positive.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Literal, Optional

import numpy as np

from core.config import settings
from core.exceptions import (
    DivergenceError,
    DomainError,
    FormulaWindowError,
    InsufficientDataError,
    MismatchedQError,
    PoleError,
    QOutOfRangeError,
)
from models.domain import (
    LaplaceEval,
    MomentReport,
    QGaussianParams,
    QuadratureResult,
    SignAdjudication,
    SumDiscrepancyReport,
)
from services.moments import moment_report, unnormalized_q_moment
from services.numerics import differentiate_n, integrate, require_converged
from services.qalgebra import is_classical, q_exp, q_prod
from services.qgaussian import (
    WINDOW_SIGMAS,
    integrate_over_support,
    make_params,
    pdf,
    sample,
    tail_exponent,
)

logger = logging.getLogger(__name__)

Variant = Literal["plus", "minus"]

SIGN_Q_GRID = (1.0, 1.1, 1.3, 1.5)
SIGN_THETA_GRID = (-0.1, -0.05, -0.01, 0.01, 0.05, 0.1)
SIGN_PARAMS = (0.3, 1.2)  # (m, sigma2) of the adjudication family

# Ladder finite-difference steps per order, in units of 1/sigma.
LADDER_STEPS = {1: 2.0e-3, 2: 5.0e-3, 3: 2.0e-2, 4: 4.0e-2}
LADDER_TOL = 1.0e-13
LADDER_REL_TOL = 1.0e-14

DISCREPANCY_GATE = 5.0


def _require_window(q: float) -> None:
    if not q < 3:
        raise QOutOfRangeError(q)
    if q < 1 and not is_classical(q):
        raise FormulaWindowError("the q-Laplace transform", q, "1 <= q < 3")


def laplace_transform(
    density: Callable[[np.ndarray], np.ndarray],
    theta: float,
    q: float,
    a: float = -math.inf,
    b: float = math.inf,
    *,
    tail: Optional[float] = None,
    window: Optional[tuple[float, float]] = None,
    tol: Optional[float] = None,
    rel_tol: Optional[float] = None,
) -> QuadratureResult:
    """q-Laplace transform of an arbitrary vectorized density on (a, b)."""
    _require_window(q)

    def integrand(x: np.ndarray) -> np.ndarray:
        f = np.asarray(density(x), dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            if is_classical(q):
                growth = np.exp(theta * x)
            else:
                growth = np.asarray(q_exp(q, theta * x * np.power(f, q - 1.0)))
            return np.where(f > 0, f * growth, 0.0)

    return integrate(
        integrand, a, b, tol, rel_tol=rel_tol, tail_exponent=tail, window=window
    )


def theta_limits(p: QGaussianParams) -> tuple[float, float]:
    """Open interval of theta where the transform of N_q(m, sigma2) is finite.

    x pdf(x)^(q-1) = a^(q-1) x / (1 + k (x-m)^2) with k = (q-1) beta / sigma2;
    its extremes sit at x = m + u, u = -m +- sqrt(m^2 + 1/k).
    """
    _require_window(p.q)
    if is_classical(p.q):
        return -math.inf, math.inf
    k = (p.q - 1.0) * p.beta / p.sigma2
    root = math.sqrt(p.m * p.m + 1.0 / k)
    extremes = [x / (1.0 + k * (x - p.m) ** 2) for x in (root, -root)]
    scale = (p.q - 1.0) * p.prefactor ** (p.q - 1.0)
    g_max, g_min = max(extremes), min(extremes)
    upper = 1.0 / (scale * g_max) if g_max > 0 else math.inf
    lower = 1.0 / (scale * g_min) if g_min < 0 else -math.inf
    return lower, upper


def laplace_oracle(
    p: QGaussianParams,
    theta: float,
    *,
    tol: Optional[float] = None,
    rel_tol: Optional[float] = None,
) -> LaplaceEval:
    """Quadrature of pdf(x) e_q(theta x pdf(x)^(q-1)); unconverged outside theta_limits."""
    lower, upper = theta_limits(p)
    if not lower < theta < upper:
        logger.debug(f"theta={theta:g} outside ({lower:g}, {upper:g}) for q={p.q:g}")
        return LaplaceEval(
            theta=theta, value=math.inf, method="oracle", converged=False,
            error_estimate=math.inf,
        )
    width = WINDOW_SIGMAS * p.sigma
    # The classical integrand is shifted by theta * sigma2; widen the window to cover it.
    shift = abs(theta) * p.sigma2 if is_classical(p.q) else 0.0
    window = (p.m - width - shift, p.m + width + shift)
    result = laplace_transform(
        lambda x: pdf(p, x),
        theta,
        p.q,
        tail=tail_exponent(p.q),
        window=window,
        tol=tol,
        rel_tol=rel_tol,
    )
    return LaplaceEval(
        theta=theta,
        value=result.value,
        method="oracle",
        converged=result.converged,
        error_estimate=result.error_estimate,
    )


def _closed_value(p: QGaussianParams, theta: float, variant: Variant) -> float:
    q = p.q
    a_power = p.prefactor ** (q - 1.0)
    quadratic = theta**2 * a_power**2 * p.sigma2 / (4.0 * p.beta)
    exponent = theta * p.m * a_power + (quadratic if variant == "plus" else -quadratic)
    base = q_exp(q, exponent)
    if not math.isfinite(base):
        raise PoleError("laplace_closed", q, exponent)
    return base ** ((3.0 - q) / 2.0)


def laplace_closed(
    p: QGaussianParams, theta: float, variant: Optional[Variant] = None
) -> LaplaceEval:
    """Closed form e_q(theta m a^(q-1) +- theta^2 a^(2q-2) sigma2 / (4 beta))^((3-q)/2).

    ``variant`` picks the sign of the theta^2 term; by default the sign
    certified against the oracle is used.
    """
    _require_window(p.q)
    chosen: Variant = variant or certify_laplace_sign().certified
    return LaplaceEval(
        theta=theta,
        value=_closed_value(p, theta, chosen),
        method="closed_form",
        variant=chosen,
    )


@lru_cache(maxsize=1)
def certify_laplace_sign() -> SignAdjudication:
    """Compare both theta^2 signs of the closed form with the oracle on a (q, theta) grid."""
    m, sigma2 = SIGN_PARAMS
    worst = {"plus": 0.0, "minus": 0.0}
    cases = 0
    for q in SIGN_Q_GRID:
        p = make_params(q, m, sigma2)
        for theta in SIGN_THETA_GRID:
            oracle = laplace_oracle(p, theta)
            if not oracle.converged:
                continue
            cases += 1
            for variant in ("plus", "minus"):
                try:
                    closed = _closed_value(p, theta, variant)
                except PoleError:
                    worst[variant] = math.inf
                    continue
                rel = abs(closed - oracle.value) / abs(oracle.value)
                worst[variant] = max(worst[variant], rel)
    if cases == 0:
        raise DivergenceError("q-Laplace sign adjudication")
    certified: Variant = "plus" if worst["plus"] <= worst["minus"] else "minus"
    logger.info(
        f"q-Laplace sign certified as '{certified}' over {cases} cases "
        f"(max rel err plus={worst['plus']:.3g}, minus={worst['minus']:.3g})"
    )
    return SignAdjudication(
        certified=certified,
        max_rel_err_plus=worst["plus"],
        max_rel_err_minus=worst["minus"],
        cases=cases,
    )


def ladder_coefficient(q: float, n: int) -> float:
    """prod_{j=0}^{n-1} (1 + j (q-1))."""
    return math.prod(1.0 + j * (q - 1.0) for j in range(n))


def derivative_ladder_check(p: QGaussianParams, n: int) -> MomentReport:
    """n-th theta-derivative of the transform at 0 against the q-moment it generates.

    The derivative is taken numerically on the oracle; the right-hand side is
    ladder_coefficient(q, n) times the integral of x^n pdf^(1 + n(q-1)).
    """
    _require_window(p.q)
    if n not in LADDER_STEPS:
        raise DomainError(f"derivative ladder order must be 1..4 (got {n})")
    lower, upper = theta_limits(p)
    h = min(LADDER_STEPS[n] / p.sigma, 0.0625 * min(-lower, upper))
    evaluations = 0

    def transform(theta: float) -> float:
        nonlocal evaluations
        result = laplace_oracle(p, theta, tol=LADDER_TOL, rel_tol=LADDER_REL_TOL)
        evaluations += 1
        if not result.converged:
            raise DivergenceError(f"q-Laplace transform at theta={theta:g}", result.error_estimate)
        return result.value

    derivative = float(differentiate_n(transform, 0.0, n, h))
    power = 1.0 + n * (p.q - 1.0)
    moment = unnormalized_q_moment(p, n, power)
    ladder = ladder_coefficient(p.q, n) * require_converged(moment, f"q-moment of order {n}")
    observed = QuadratureResult(
        value=derivative,
        error_estimate=0.0,
        evaluations=evaluations,
        converged=True,
    )
    return moment_report(
        f"laplace-derivative-{n}", ladder, observed, scale=p.sigma**n
    )


def sum_params(p1: QGaussianParams, p2: QGaussianParams) -> QGaussianParams:
    """N_q(m1 + m2, sigma1^2 + sigma2^2)."""
    if p1.q != p2.q:
        raise MismatchedQError(p1.q, p2.q)
    return make_params(p1.q, p1.m + p2.m, p1.sigma2 + p2.sigma2)


def q_independence_residual(p1: QGaussianParams, p2: QGaussianParams, theta: float) -> float:
    """|L(sum)(theta) - L(p1)(theta) (x)_q L(p2)(theta)| on the closed forms."""
    combined = sum_params(p1, p2)
    _require_window(combined.q)
    joint = laplace_closed(combined, theta).value
    product = q_prod(combined.q, laplace_closed(p1, theta).value, laplace_closed(p2, theta).value)
    return abs(joint - product)


def nonlinearity_gap(
    p1: QGaussianParams, p2: QGaussianParams, theta: float, weight: float = 0.5
) -> float:
    """|L(w f1 + (1-w) f2) - (w L(f1) + (1-w) L(f2))|; zero at q = 1."""
    if p1.q != p2.q:
        raise MismatchedQError(p1.q, p2.q)
    q = p1.q
    lo = min(p1.m - WINDOW_SIGMAS * p1.sigma, p2.m - WINDOW_SIGMAS * p2.sigma)
    hi = max(p1.m + WINDOW_SIGMAS * p1.sigma, p2.m + WINDOW_SIGMAS * p2.sigma)

    def mixture(x: np.ndarray) -> np.ndarray:
        return weight * pdf(p1, x) + (1.0 - weight) * pdf(p2, x)

    def transform(density: Callable[[np.ndarray], np.ndarray]) -> float:
        result = laplace_transform(
            density, theta, q, tail=tail_exponent(q), window=(lo, hi)
        )
        return require_converged(result, f"q-Laplace transform at theta={theta:g}")

    mixed = transform(mixture)
    separate = weight * transform(lambda x: pdf(p1, x)) + (1.0 - weight) * transform(
        lambda x: pdf(p2, x)
    )
    return abs(mixed - separate)


def ordinary_sum_discrepancy(
    p: QGaussianParams,
    n: int,
    seed: Optional[int] = None,
    *,
    gate: float = DISCREPANCY_GATE,
) -> SumDiscrepancyReport:
    """Monte Carlo E|X1 + X2 - 2m| for ordinarily independent X1, X2 ~ p.

    Compared with the same statistic under N_q(2m, 2 sigma2), the law that
    q-independent summands would follow. For q != 1 the two differ.
    """
    if not p.q < 5.0 / 3.0:
        raise FormulaWindowError("ordinary_sum_discrepancy", p.q, "q < 5/3")
    if n < 2:
        raise InsufficientDataError(n)
    seed = settings.seed if seed is None else seed
    first, second = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    deviations = np.abs(sample(p, first, n) + sample(p, second, n) - 2.0 * p.m)
    empirical = float(deviations.mean())
    standard_error = float(deviations.std(ddof=1) / math.sqrt(n))

    target = sum_params(p, p)
    predicted = require_converged(
        integrate_over_support(
            target,
            lambda x: np.abs(x - target.m) * pdf(target, x),
            tail=tail_exponent(target.q, 1.0, 1),
        ),
        "mean absolute deviation of the q-Gaussian sum law",
    )
    z = (empirical - predicted) / standard_error if standard_error > 0 else 0.0
    detected = abs(z) > gate
    logger.info(
        f"ordinary sum at q={p.q:g}, n={n}, seed={seed}: "
        f"E|S|={empirical:.6g} vs {predicted:.6g} (z={z:.2f})"
    )
    return SumDiscrepancyReport(
        q=p.q,
        n=n,
        seed=seed,
        statistic="mean_abs_deviation",
        empirical=empirical,
        predicted=predicted,
        standard_error=standard_error,
        z=z,
        discrepancy_detected=detected,
    )
