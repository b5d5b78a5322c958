"""Adjudication of printed formulas that disagree with their own definitions.

Each check evaluates the printed statement and the adopted replacement
against an independent reference (a defining identity or a quadrature) and
returns an Adjudication. Nothing here corrects a formula silently: the
adopted forms live in qalgebra, qlaplace and moments, and these checks are
the evidence for them.
"""
import logging
import math
from typing import Optional

import numpy as np

from core.config import settings
from core.exceptions import PoleError
from models.domain import Adjudication
from services.moments import escort_moment_oracle, normalized_kurtosis
from services.qalgebra import q_exp, q_log, q_neg, q_prod, q_sum
from services.qgaussian import make_params
from services.qlaplace import certify_laplace_sign, laplace_closed, q_independence_residual

logger = logging.getLogger(__name__)

Q_GRID = (0.0, 0.5, 1.5, 2.5)
CASES_PER_Q = 2_500

INDEPENDENCE_Q_GRID = (1.3, 1.5)
INDEPENDENCE_THETAS = (-0.1, -0.05, -0.01, 0.01, 0.05, 0.1)
INDEPENDENCE_PAIRS = (((0.0, 1.0), (0.0, 1.0)), ((1.0, 2.0), (-1.0, 3.0)))

NORMALIZED_KURTOSIS_GRID = (0.8, 1.0, 1.2, 1.5, 2.0, 2.5)


def _relative(observed: np.ndarray, expected: np.ndarray) -> float:
    with np.errstate(invalid="ignore", over="ignore"):
        gap = np.abs(observed - expected) / np.maximum(np.abs(expected), 1.0)
    gap = np.where(np.isnan(gap), math.inf, gap)
    return float(np.max(gap))


def _rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(settings.seed if seed is None else seed)


def qprod_exponent(tolerance: float = 1e-12, seed: Optional[int] = None) -> Adjudication:
    """Outer exponent of the q-product, judged by e_q(x) (x)_q e_q(y) = e_q(x + y)."""
    rng = _rng(seed)
    adopted_error = printed_error = 0.0
    for q in Q_GRID:
        x = rng.uniform(-0.3, 0.3, CASES_PER_Q)
        y = rng.uniform(-0.3, 0.3, CASES_PER_Q)
        ex, ey = np.asarray(q_exp(q, x)), np.asarray(q_exp(q, y))
        expected = np.asarray(q_exp(q, x + y))
        adopted_error = max(adopted_error, _relative(np.asarray(q_prod(q, ex, ey)), expected))
        with np.errstate(invalid="ignore"):
            printed = np.power(ex ** (1.0 - q) + ey ** (1.0 - q) - 1.0, 1.0 - q)
        printed_error = max(printed_error, _relative(printed, expected))
    q, x, y = 0.5, 0.2, 0.1
    return Adjudication(
        name="qprod-exponent",
        locus="q-product definition",
        printed="[x^(1-q) + y^(1-q) - 1]_+^(1-q)",
        adopted="[x^(1-q) + y^(1-q) - 1]_+^(1/(1-q))",
        closed=q_prod(q, q_exp(q, x), q_exp(q, y)),
        oracle=q_exp(q, x + y),
        printed_error=printed_error,
        adopted_error=adopted_error,
        tolerance=tolerance,
        cases=len(Q_GRID) * CASES_PER_Q,
    )


def qneg_sign(tolerance: float = 1e-12, seed: Optional[int] = None) -> Adjudication:
    """Sign of the additive q-inverse, judged by x (+)_q (-)x = 0."""
    rng = _rng(seed)
    adopted_error = printed_error = 0.0
    for q in Q_GRID:
        x = rng.uniform(-0.3, 0.3, CASES_PER_Q)
        adopted = np.asarray(q_sum(q, x, q_neg(q, x)))
        printed = np.asarray(q_sum(q, x, x / (1.0 + (1.0 - q) * x)))
        adopted_error = max(adopted_error, float(np.max(np.abs(adopted))))
        printed_error = max(printed_error, float(np.max(np.abs(printed))))
    return Adjudication(
        name="qneg-sign",
        locus="additive q-inverse",
        printed="x / (1 + (1-q) x)",
        adopted="-x / (1 + (1-q) x)",
        closed=q_sum(0.0, 1.0, q_neg(0.0, 1.0)),
        oracle=0.0,
        printed_error=printed_error,
        adopted_error=adopted_error,
        tolerance=tolerance,
        cases=len(Q_GRID) * CASES_PER_Q,
    )


def exp_law_operators(tolerance: float = 1e-12, seed: Optional[int] = None) -> Adjudication:
    """Which of (+)_q / (x)_q turns products into sums in the exp and log laws."""
    rng = _rng(seed)
    adopted_error = printed_error = 0.0
    for q in Q_GRID:
        # e_q(x) e_q(y) = e_q(x (+)_q y); the printed law has (x)_q.
        x = rng.uniform(0.05, 0.3, CASES_PER_Q)
        y = rng.uniform(0.05, 0.3, CASES_PER_Q)
        product = np.asarray(q_exp(q, x)) * np.asarray(q_exp(q, y))
        adopted = np.asarray(q_exp(q, q_sum(q, x, y)))
        printed = np.asarray(q_exp(q, q_prod(q, x, y)))
        adopted_error = max(adopted_error, _relative(adopted, product))
        printed_error = max(printed_error, _relative(printed, product))

        # ln_q(u v) = ln_q(u) (+)_q ln_q(v); the printed law has (x)_q.
        u = rng.uniform(1.05, 1.5, CASES_PER_Q)
        v = rng.uniform(1.05, 1.5, CASES_PER_Q)
        expected = np.asarray(q_log(q, u * v))
        lu, lv = np.asarray(q_log(q, u)), np.asarray(q_log(q, v))
        adopted_error = max(adopted_error, _relative(np.asarray(q_sum(q, lu, lv)), expected))
        printed_error = max(printed_error, _relative(np.asarray(q_prod(q, lu, lv)), expected))
    return Adjudication(
        name="exp-law-operators",
        locus="q-exponential and q-logarithm exchange laws",
        printed="e_q(x) e_q(y) = e_q(x (x)_q y); ln_q(xy) = ln_q(x) (x)_q ln_q(y)",
        adopted="e_q(x) e_q(y) = e_q(x (+)_q y); ln_q(xy) = ln_q(x) (+)_q ln_q(y)",
        printed_error=printed_error,
        adopted_error=adopted_error,
        tolerance=tolerance,
        cases=2 * len(Q_GRID) * CASES_PER_Q,
    )


def laplace_sign(tolerance: float = 1e-7) -> Adjudication:
    """Sign of the theta^2 term in the closed-form q-Laplace transform of N_q(m, sigma2)."""
    verdict = certify_laplace_sign()
    p = make_params(1.3, 0.3, 1.2)
    try:
        closed: Optional[float] = laplace_closed(p, 0.05, verdict.certified).value
    except PoleError:
        closed = None
    return Adjudication(
        name="laplace-sign",
        locus="closed-form q-Laplace transform of N_q(m, sigma2)",
        printed="minus",
        adopted=verdict.certified,
        closed=closed,
        printed_error=verdict.max_rel_err_minus,
        adopted_error=(
            verdict.max_rel_err_plus if verdict.certified == "plus" else verdict.max_rel_err_minus
        ),
        tolerance=tolerance,
        cases=verdict.cases,
        detail=f"certified variant: {verdict.certified}",
    )


def normalized_kurtosis_window(tolerance: float = 1e-7) -> Adjudication:
    """Validity window of the normalized kurtosis 3(q+1)^2 / ((5q-3)(3q-1)).

    The printed window 1 <= q < 3/5 is empty. The adopted window 3/4 < q < 3
    is where the power 4q-3 is positive; the closed form is compared with the
    ratio of escort quadratures across it.
    """
    worst = 0.0
    closed = oracle = None
    for q in NORMALIZED_KURTOSIS_GRID:
        p = make_params(q)
        fourth = escort_moment_oracle(p, 4, 4.0 * q - 3.0)
        second = escort_moment_oracle(p, 2, 2.0 * q - 1.0)
        if not (fourth.converged and second.converged):
            worst = math.inf
            continue
        ratio = fourth.value / second.value**2
        value = normalized_kurtosis(q)
        worst = max(worst, abs(value - ratio) / abs(value))
        if q == 1.2:
            closed, oracle = value, ratio
    return Adjudication(
        name="normalized-kurtosis-window",
        locus="normalized kurtosis of N_q(0, 1)",
        printed="1 <= q < 3/5",
        adopted="3/4 < q < 3",
        closed=closed,
        oracle=oracle,
        printed_error=None,
        adopted_error=worst,
        tolerance=tolerance,
        cases=len(NORMALIZED_KURTOSIS_GRID),
        detail="printed window is empty; the formula has a pole at q = 3/5",
    )


def q_independence(tolerance: float = 1e-10) -> Adjudication:
    """Factorization L(X1 + X2) = L(X1) (x)_q L(X2) on the closed forms, for q > 1."""
    worst = 0.0
    cases = 0
    sample_residual = None
    for q in INDEPENDENCE_Q_GRID:
        for (m1, s1), (m2, s2) in INDEPENDENCE_PAIRS:
            p1, p2 = make_params(q, m1, s1), make_params(q, m2, s2)
            for theta in INDEPENDENCE_THETAS:
                try:
                    residual = q_independence_residual(p1, p2, theta)
                except PoleError:
                    continue
                cases += 1
                worst = max(worst, residual)
                if q == 1.3 and theta == 0.05 and m1 == 0.0:
                    sample_residual = residual
    holds = worst <= tolerance
    logger.info(f"q-independence factorization max residual {worst:.3g} (holds={holds})")
    return Adjudication(
        name="q-independence",
        locus="sum of q-independent q-Gaussians",
        printed="L(N_q(m1+m2, s1+s2)) = L(N_q(m1, s1)) (x)_q L(N_q(m2, s2))",
        adopted=None,
        closed=sample_residual,
        oracle=0.0,
        printed_error=worst,
        tolerance=tolerance,
        cases=cases,
        detail="the closed-form exponent is not additive in sigma for q > 1",
    )


def adjudicate_all(tol_scale: float = 1.0, seed: Optional[int] = None) -> list[Adjudication]:
    """Every adjudication, with tolerances divided by ``tol_scale``."""
    return [
        qprod_exponent(1e-12 / tol_scale, seed),
        qneg_sign(1e-12 / tol_scale, seed),
        exp_law_operators(1e-12 / tol_scale, seed),
        laplace_sign(1e-7 / tol_scale),
        normalized_kurtosis_window(1e-7 / tol_scale),
        q_independence(1e-10 / tol_scale),
    ]
