"""Verification service.

Runs every closed-form-versus-oracle check of the library and collects the
outcomes into a VerifyReport. Tolerances are divided by ``tol_scale``, so a
scale below 1 relaxes the suite. Detection checks (a divergence that must be
flagged, a discrepancy that must be seen) keep fixed thresholds.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

from api.schemas.verify import Status, VerifyEntry, VerifyReport
from core import __version__
from core.config import settings
from core.exceptions import DomainError, FormulaWindowError, NumericalError
from models.domain import Adjudication, QGaussianParams, QuadratureResult, SampleStats
from services import errata
from services.estimators import (
    bias_experiment,
    confidence_interval,
    coverage_experiment,
    lln_check,
    summarize,
)
from services.moments import (
    central_moment_oracle,
    e2qm1_x2_closed,
    eq_x_closed,
    escort_moment_oracle,
    fourth_moment_closed,
    kurtosis_closed,
    mean_closed,
    normalized_mean,
    normalized_q_variance,
    raw_moment_oracle,
    unnormalized_q_moment,
    variance_closed,
)
from services.numerics import integrate
from services.qalgebra import (
    q_exp,
    q_inv,
    q_log,
    q_neg,
    q_prod,
    q_prod_fold,
    q_sum,
    q_sum_fold,
)
from services.qgaussian import (
    WINDOW_SIGMAS,
    cdf,
    duality_residual,
    escort_residual,
    integrate_over_support,
    make_params,
    nu_p,
    nu_p_oracle,
    pdf,
    quantile,
    sample,
    student_t_residual,
    tail_exponent,
)
from services.qlaplace import (
    DISCREPANCY_GATE,
    SIGN_PARAMS,
    SIGN_Q_GRID,
    SIGN_THETA_GRID,
    derivative_ladder_check,
    laplace_closed,
    laplace_oracle,
    nonlinearity_gap,
    ordinary_sum_discrepancy,
)
from services.special import SQRT_PI, c_q, log_gamma

logger = logging.getLogger(__name__)

Suite = Callable[[], list[VerifyEntry]]

ALGEBRA_Q_GRID = (0.0, 0.5, 1.0, 1.5, 2.5)
ALGEBRA_CASES = 2_000
MAX_FOLD = 16

C_Q_GRID = (-0.5, 0.0, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 2.5, 2.9)
C_Q_RATIO_GRID = (1.0, 1.2, 1.4, 1.6)
NORMALIZATION_Q_GRID = (-1.0, 0.0, 0.5, 1.0, 1.3, 1.5, 2.0, 2.5)
STUDENT_T_Q_GRID = (1.2, 1.5, 2.0, 2.5)
ESCORT_Q_GRID = (1.2, 1.5)
DUALITY_Q_GRID = (0.5, 1.0, 1.5, 2.0, 2.5)
NU_P_CASES = ((1.0, 2.0), (2.0, 2.0), (1.5, 1.5), (0.5, 2.0), (1.2, 0.8))
SAMPLER_Q_GRID = (0.0, 0.5, 1.0, 1.5, 2.0)
SAMPLER_DRAWS = 100_000

MOMENT_Q_GRID = (0.5, 0.9, 1.0, 1.1, 1.3, 1.5)
MOMENT_PARAMS = (0.7, 1.3)  # (m, sigma2)

LADDER_Q_GRID = (1.0, 1.1, 1.2)
MGF_THETAS = (-1.0, 0.5, 1.0)
# Smallest mixture gap accepted as evidence that the q = 1.5 transform is nonlinear.
NONLINEAR_WITNESS = 1e-6

BIAS_CASES = ((1.0, 10, 100_000), (1.3, 10, 100_000), (1.5, 20, 100_000))
COVERAGE_CASE = (1.2, 400, 2_000)
DISCREPANCY_CASE = (1.5, 100_000)

SIGMA2_HAT_DATA = (1.0, 2.0, 3.0, 4.0)
CLASSICAL_Z = 1.959963984540054


def _relative_error(closed: float, oracle: float, scale: float = 0.0) -> tuple[float, float]:
    abs_err = abs(closed - oracle)
    denominator = max(abs(oracle), scale)
    rel_err = abs_err / denominator if denominator > 0 else abs_err
    if math.isnan(rel_err):
        return math.inf, math.inf
    return abs_err, rel_err


def _compare(
    name: str,
    locus: str,
    closed: float,
    oracle: float,
    tolerance: float,
    *,
    scale: float = 0.0,
    detail: Optional[str] = None,
) -> VerifyEntry:
    """PASS when the relative gap (floored at ``scale``) is within tolerance."""
    closed, oracle = float(closed), float(oracle)
    abs_err, rel_err = _relative_error(closed, oracle, scale)
    return VerifyEntry(
        name=name,
        locus=locus,
        closed=closed,
        oracle=oracle,
        abs_err=abs_err,
        rel_err=rel_err,
        tolerance=tolerance,
        status="PASS" if rel_err <= tolerance else "FAIL",
        detail=detail,
    )


def _worst(name: str, locus: str, error: float, tolerance: float, cases: int) -> VerifyEntry:
    """Entry for an identity suite summarized by its largest error."""
    error = math.inf if math.isnan(error) else float(error)
    return VerifyEntry(
        name=name,
        locus=locus,
        abs_err=error,
        rel_err=error,
        tolerance=tolerance,
        status="PASS" if error <= tolerance else "FAIL",
        detail=f"{cases} cases",
    )


def _max_gap(observed: np.ndarray, expected: np.ndarray) -> float:
    with np.errstate(invalid="ignore", over="ignore"):
        gap = np.abs(np.asarray(observed) - np.asarray(expected))
        gap = gap / np.maximum(np.abs(np.asarray(expected)), 1.0)
    if np.any(np.isnan(gap)):
        return math.inf
    return float(np.max(gap))


def _skipped(name: str, locus: str, detail: str, closed: Optional[float] = None) -> VerifyEntry:
    return VerifyEntry(
        name=name, locus=locus, closed=closed, status="SKIPPED-divergent", detail=detail
    )


def _adjudication_entry(item: Adjudication) -> VerifyEntry:
    status: Status
    if item.adopted is not None:
        status = "PASS" if item.adopted_holds else "FAIL"
        error = item.adopted_error
    else:
        status = "PASS" if item.printed_holds else "REFUTED"
        error = item.printed_error
    parts = [f"printed: {item.printed}"]
    if item.adopted is not None:
        parts.append(f"adopted: {item.adopted}")
    if item.printed_error is not None:
        parts.append(f"printed error {item.printed_error:.3g}")
    if item.detail:
        parts.append(item.detail)
    return VerifyEntry(
        name=item.name,
        locus=item.locus,
        closed=item.closed,
        oracle=item.oracle,
        abs_err=error,
        rel_err=error,
        tolerance=item.tolerance,
        status=status,
        detail="; ".join(parts),
    )


class VerificationService:
    """Service for the verify suite."""

    def __init__(
        self,
        tol_scale: float = 1.0,
        q_grid: Optional[Sequence[float]] = None,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        monte_carlo: bool = True,
    ):
        if not tol_scale > 0:
            raise DomainError(f"tol-scale must be > 0 (got {tol_scale:g})")
        self.tol_scale = tol_scale
        self.q_grid = list(q_grid) if q_grid else None
        self.seed = settings.seed if seed is None else seed
        self.workers = max(1, settings.workers if workers is None else workers)
        self.monte_carlo = monte_carlo

    def tol(self, value: float) -> float:
        return value / self.tol_scale

    def suites(self) -> list[Suite]:
        suites: list[Suite] = [
            self.algebra_suite,
            self.special_suite,
            self.density_suite,
            self.moment_suite,
            self.laplace_suite,
            self.estimator_suite,
            self.errata_suite,
        ]
        if self.monte_carlo:
            suites.insert(3, self.sampler_suite)
            suites.insert(-1, self.experiment_suite)
        return suites

    def run(self) -> VerifyReport:
        """Run every suite and collect the entries in a fixed order.

        Returns:
            VerifyReport with one entry per check
        """
        suites = self.suites()
        logger.info(
            f"verify: {len(suites)} suites, seed={self.seed}, tol_scale={self.tol_scale:g}, "
            f"workers={self.workers}"
        )
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda suite: suite(), suites))
        else:
            results = [suite() for suite in suites]
        entries = [entry for result in results for entry in result]
        report = VerifyReport(
            entries=entries,
            seed=self.seed,
            tol_scale=self.tol_scale,
            q_grid=self.q_grid,
            version=__version__,
        )
        logger.info(f"verify summary: {report.summary}")
        return report

    # q-algebra

    def algebra_suite(self) -> list[VerifyEntry]:
        rng = np.random.default_rng(self.seed)
        tol = self.tol(1e-12)
        worst = {
            "exp-sum-law": 0.0,
            "exp-prod-law": 0.0,
            "log-prod-law": 0.0,
            "log-qprod-law": 0.0,
            "log-exp-roundtrip": 0.0,
            "qsum-assoc-comm": 0.0,
            "qprod-assoc-comm": 0.0,
            "qneg-identity": 0.0,
            "qinv-identity": 0.0,
            "qsum-fold": 0.0,
            "qprod-fold": 0.0,
        }

        def record(name: str, observed, expected) -> None:
            worst[name] = max(worst[name], _max_gap(observed, expected))

        size = ALGEBRA_CASES
        for q in ALGEBRA_Q_GRID:
            x, y, z = rng.uniform(-0.3, 0.3, (3, size))
            ex, ey = q_exp(q, x), q_exp(q, y)
            record("exp-sum-law", ex * ey, q_exp(q, q_sum(q, x, y)))
            record("exp-prod-law", q_prod(q, ex, ey), q_exp(q, x + y))
            record("log-exp-roundtrip", q_log(q, ex), x)
            record("qsum-assoc-comm", q_sum(q, q_sum(q, x, y), z), q_sum(q, x, q_sum(q, y, z)))
            record("qsum-assoc-comm", q_sum(q, x, y), q_sum(q, y, x))
            record("qneg-identity", q_sum(q, x, q_neg(q, x)), np.zeros(size))

            u, v = rng.uniform(0.5, 2.0, (2, size))
            record("log-prod-law", q_log(q, u * v), q_sum(q, q_log(q, u), q_log(q, v)))

            u, v = rng.uniform(0.6, 1.5, (2, size))
            record("log-qprod-law", q_log(q, q_prod(q, u, v)), q_log(q, u) + q_log(q, v))

            u, v, w = rng.uniform(0.8, 1.25, (3, size))
            record("qprod-assoc-comm", q_prod(q, q_prod(q, u, v), w), q_prod(q, u, q_prod(q, v, w)))
            record("qprod-assoc-comm", q_prod(q, u, v), q_prod(q, v, u))
            record("qinv-identity", q_prod(q, u, q_inv(q, u)), np.ones(size))

            t = rng.uniform(-0.3, 0.3, size // MAX_FOLD)
            s = rng.uniform(0.98, 1.02, size // MAX_FOLD)
            summed, multiplied = t, s
            for n in range(1, MAX_FOLD + 1):
                if n > 1:
                    summed = q_sum(q, summed, t)
                    multiplied = q_prod(q, multiplied, s)
                record("qsum-fold", q_sum_fold(q, t, n), summed)
                record("qprod-fold", q_prod_fold(q, s, n), multiplied)

        cases = len(ALGEBRA_Q_GRID) * ALGEBRA_CASES
        loci = {
            "exp-sum-law": "e_q(x) e_q(y) = e_q(x (+)_q y)",
            "exp-prod-law": "e_q(x) (x)_q e_q(y) = e_q(x + y)",
            "log-prod-law": "ln_q(xy) = ln_q(x) (+)_q ln_q(y)",
            "log-qprod-law": "ln_q(x (x)_q y) = ln_q(x) + ln_q(y)",
            "log-exp-roundtrip": "ln_q(e_q(x)) = x",
            "qsum-assoc-comm": "associativity and commutativity of (+)_q",
            "qprod-assoc-comm": "associativity and commutativity of (x)_q",
            "qneg-identity": "x (+)_q (-)_q x = 0",
            "qinv-identity": "x (x)_q x^(-1)_q = 1",
            "qsum-fold": "n-fold q-sum closed form, n <= 16",
            "qprod-fold": "n-fold q-product closed form, n <= 16",
        }
        return [_worst(name, loci[name], error, tol, cases) for name, error in worst.items()]

    # Special functions

    def special_suite(self) -> list[VerifyEntry]:
        entries = [
            _compare(
                "log-gamma-1", "log Gamma(1) = 0", log_gamma(1.0), 0.0, self.tol(1e-13), scale=1.0
            ),
            _compare(
                "log-gamma-half", "log Gamma(1/2) = log sqrt(pi)",
                log_gamma(0.5), math.log(SQRT_PI), self.tol(1e-13),
            ),
            _compare(
                "log-gamma-5", "log Gamma(5) = log 24",
                log_gamma(5.0), math.log(24.0), self.tol(1e-13),
            ),
        ]
        for q in C_Q_GRID:
            tolerance = self.tol(1e-6 if q >= 2.7 else 1e-9)
            if q < 1:
                edge = 1.0 / math.sqrt(1.0 - q)
                oracle = integrate(lambda x, q=q: q_exp(q, -x * x), -edge, edge)
            else:
                oracle = integrate(
                    lambda x, q=q: q_exp(q, -x * x),
                    -math.inf,
                    math.inf,
                    tail_exponent=None if q == 1 else 2.0 / (q - 1.0),
                    window=(-WINDOW_SIGMAS, WINDOW_SIGMAS),
                )
            entries.append(
                _compare(
                    f"c_q-quadrature-q{q:g}",
                    "C_q as the integral of e_q(-x^2)",
                    c_q(q),
                    oracle.value,
                    tolerance,
                    detail=None if oracle.converged else "oracle did not meet its tolerance",
                )
            )
        for q in C_Q_RATIO_GRID:
            q1 = 1.0 / (2.0 - q)
            entries.append(
                _compare(
                    f"c_q-ratio-q{q:g}",
                    "C_q1 / C_q = 2 (2-q)^(3/2) / (5-3q) with q1 = 1/(2-q)",
                    2.0 * (2.0 - q) ** 1.5 / (5.0 - 3.0 * q),
                    c_q(q1) / c_q(q),
                    self.tol(1e-10),
                )
            )
        gap = max(abs(c_q(1.0 + step) - SQRT_PI) for step in (-1e-6, 1e-6))
        entries.append(
            _worst("c_q-continuity", "C_q continuous across q = 1", gap, self.tol(1e-5), 2)
        )
        return entries

    # Density, CDF, escort images

    def density_suite(self) -> list[VerifyEntry]:
        entries = []
        for q in NORMALIZATION_Q_GRID:
            p = make_params(q, 0.5, 2.0)
            mass = integrate_over_support(p, lambda x, p=p: pdf(p, x), tail=tail_exponent(q))
            entry = _compare(
                f"normalization-q{q:g}", "integral of the q-Gaussian density",
                1.0, mass.value, self.tol(1e-8),
            )
            if not mass.converged:
                entry = entry.model_copy(
                    update={"status": "FAIL", "detail": "quadrature did not converge"}
                )
            entries.append(entry)
        grid = np.linspace(-10.0, 10.0, 101)
        for q in STUDENT_T_Q_GRID:
            entries.append(
                _worst(
                    f"student-t-q{q:g}",
                    "N_q(0, 1) is Student-t with (3-q)/(q-1) degrees of freedom",
                    student_t_residual(q, grid), self.tol(1e-10), grid.size,
                )
            )
        for q in ESCORT_Q_GRID:
            p = make_params(q, 0.4, 1.5)
            points = np.linspace(p.m - 6.0 * p.sigma, p.m + 6.0 * p.sigma, 101)
            powers = {"2-q": 2.0 - q, "q": q, "2q-1": 2.0 * q - 1.0, "4q-3": 4.0 * q - 3.0}
            for label, power in powers.items():
                entries.append(
                    _worst(
                        f"escort-q{q:g}-power-{label}",
                        "pdf^p / nu_p is the density of N_q'(m, sigma2')",
                        escort_residual(p, power, points), self.tol(1e-8), points.size,
                    )
                )
        ys = np.linspace(0.0, 3.0, 61)
        duality = max(float(np.max(duality_residual(q, ys))) for q in DUALITY_Q_GRID)
        entries.append(
            _worst(
                "duality", "e_q(-y^2) = e_(2-1/q)(-q y^2)^(1/q)",
                duality, self.tol(1e-12), ys.size * len(DUALITY_Q_GRID),
            )
        )
        for q, power in NU_P_CASES:
            p = make_params(q, -0.3, 0.8)
            oracle = nu_p_oracle(p, power)
            entries.append(
                _compare(
                    f"nu_p-q{q:g}-power{power:g}", "integral of pdf^p",
                    nu_p(p, power), oracle.value, self.tol(1e-9),
                )
            )
        entries += [
            _compare(
                "cdf-normal", "N_1(0, 1) CDF at 1",
                cdf(make_params(1.0), 1.0), 0.8413447460685429, self.tol(1e-9),
            ),
            _compare(
                "cdf-cauchy", "N_2(0, 1) CDF at 1", cdf(make_params(2.0), 1.0), 0.75, self.tol(1e-9)
            ),
            _compare(
                "quantile-normal", "N_1(0, 1) quantile at 0.975",
                quantile(make_params(1.0), 0.975), CLASSICAL_Z, self.tol(1e-9),
            ),
            _compare(
                "quantile-cauchy", "N_2(0, 1) quantile at 0.75",
                quantile(make_params(2.0), 0.75), 1.0, self.tol(1e-9),
            ),
        ]
        return entries

    def sampler_suite(self) -> list[VerifyEntry]:
        entries = []
        streams = np.random.SeedSequence(self.seed).spawn(len(SAMPLER_Q_GRID))
        for q, stream in zip(SAMPLER_Q_GRID, streams):
            p = make_params(q)
            draws = np.sort(sample(p, np.random.default_rng(stream), SAMPLER_DRAWS))
            fitted = np.asarray(cdf(p, draws))
            n = draws.size
            above = np.arange(1, n + 1) / n - fitted
            below = fitted - np.arange(n) / n
            distance = float(max(above.max(), below.max()))
            entries.append(
                _worst(
                    f"sampler-ks-q{q:g}",
                    "Kolmogorov-Smirnov distance of the sampler to the CDF",
                    distance, self.tol(0.01), n,
                )
            )
        return entries

    # Moments

    def moment_suite(self) -> list[VerifyEntry]:
        m, sigma2 = MOMENT_PARAMS
        entries = []
        for q in self.q_grid or MOMENT_Q_GRID:
            p = make_params(q, m, sigma2)
            entries += [
                self._moment_entry(
                    f"mean-q{q:g}", "E(X) = m", lambda p=p: mean_closed(p),
                    lambda p=p: raw_moment_oracle(p, 1), self.tol(1e-7), p.sigma,
                ),
                self._moment_entry(
                    f"variance-q{q:g}", "V(X) = (3-q)/(5-3q) sigma2",
                    lambda p=p: variance_closed(p),
                    lambda p=p: central_moment_oracle(p, 2), self.tol(1e-7),
                ),
                self._moment_entry(
                    f"fourth-moment-q{q:g}",
                    "E((X-m)^4) = 3(3-q)^2 / ((5-3q)(7-5q)) sigma2^2",
                    lambda p=p: fourth_moment_closed(p),
                    lambda p=p: central_moment_oracle(p, 4), self.tol(1e-6),
                ),
                self._kurtosis_entry(q, p),
            ]
            entries += self._escort_entries(q, p)
        if 1.2 not in (self.q_grid or MOMENT_Q_GRID):
            entries.append(self._kurtosis_entry(1.2, make_params(1.2, m, sigma2)))
        entries += [
            self._divergence_entry(
                "variance-divergence-q1.8", "second moment is infinite for q >= 5/3",
                central_moment_oracle(make_params(1.8), 2),
            ),
            self._divergence_entry(
                "fourth-moment-divergence-q1.45", "fourth moment is infinite for q >= 7/5",
                central_moment_oracle(make_params(1.45), 4),
            ),
        ]
        p = make_params(1.8, m, sigma2)
        entries.append(
            self._moment_entry(
                "q-variance-finite-q1.8",
                "the escort q-variance stays finite past the variance window",
                lambda: normalized_q_variance(p),
                lambda: escort_moment_oracle(p, 2, 2.0 * p.q - 1.0), self.tol(1e-7),
            )
        )
        return entries

    def _moment_entry(
        self,
        name: str,
        locus: str,
        closed_fn: Callable[[], float],
        oracle_fn: Callable[[], QuadratureResult],
        tolerance: float,
        scale: float = 0.0,
    ) -> VerifyEntry:
        """Closed form against quadrature; SKIPPED-divergent when the moment does not exist."""
        window = ""
        try:
            closed: Optional[float] = closed_fn()
        except FormulaWindowError as exc:
            closed, window = None, exc.detail
        try:
            oracle = oracle_fn()
        except DomainError as exc:
            return _skipped(name, locus, exc.detail, closed)
        if not oracle.converged:
            if closed is None:
                return _skipped(name, locus, f"oracle diverges; {window}")
            return VerifyEntry(
                name=name, locus=locus, closed=closed, tolerance=tolerance, status="FAIL",
                detail=f"oracle did not converge (error estimate {oracle.error_estimate:.3g})",
            )
        if closed is None:
            return _skipped(name, locus, f"outside the formula window; {window}")
        return _compare(name, locus, closed, oracle.value, tolerance, scale=scale)

    def _kurtosis_entry(self, q: float, p: QGaussianParams) -> VerifyEntry:
        name = f"kurtosis-q{q:g}"
        locus = "E(Y^4) / E(Y^2)^2 = 3(5-3q)/(7-5q)"

        def ratio() -> QuadratureResult:
            fourth = central_moment_oracle(p, 4)
            second = central_moment_oracle(p, 2)
            if not (fourth.converged and second.converged):
                return QuadratureResult(
                    value=math.inf, error_estimate=math.inf,
                    evaluations=fourth.evaluations + second.evaluations, converged=False,
                )
            return QuadratureResult(
                value=fourth.value / second.value**2,
                error_estimate=fourth.error_estimate / second.value**2,
                evaluations=fourth.evaluations + second.evaluations,
                converged=True,
            )

        return self._moment_entry(name, locus, lambda: kurtosis_closed(q), ratio, self.tol(1e-6))

    def _escort_entries(self, q: float, p: QGaussianParams) -> list[VerifyEntry]:
        entries = [
            self._moment_entry(
                f"normalized-mean-q{q:g}", "escort mean with power q equals m",
                lambda: normalized_mean(p),
                lambda: escort_moment_oracle(p, 1, q, central=False),
                self.tol(1e-7), p.sigma,
            ),
            self._moment_entry(
                f"normalized-q-variance-q{q:g}",
                "escort variance with power 2q-1 is (3-q)/(q+1) sigma2",
                lambda: normalized_q_variance(p),
                lambda: escort_moment_oracle(p, 2, 2.0 * q - 1.0), self.tol(1e-7),
            ),
        ]
        for n in (1, 3):
            entries.append(
                self._moment_entry(
                    f"odd-escort-moment-{n}-q{q:g}", "odd central escort moments vanish",
                    lambda: 0.0, lambda n=n: escort_moment_oracle(p, n, q),
                    self.tol(1e-8), p.sigma**n,
                )
            )
        if q >= 1:
            entries += [
                self._moment_entry(
                    f"eq-x-q{q:g}", "E_q(X) = m (3-q)^((3-q)/2) / (2 (sigma C_q)^(q-1))",
                    lambda: eq_x_closed(p), lambda: unnormalized_q_moment(p, 1, q),
                    self.tol(1e-7),
                ),
                self._moment_entry(
                    f"e2qm1-x2-q{q:g}",
                    "E_(2q-1)(X^2) = [(3-q) sigma2 + (q+1) m^2] "
                    "/ (4q (3-q)^(q-2) (sigma C_q)^(2q-2))",
                    lambda: e2qm1_x2_closed(p),
                    lambda: unnormalized_q_moment(p, 2, 2.0 * q - 1.0),
                    self.tol(1e-7),
                ),
            ]
        return entries

    @staticmethod
    def _divergence_entry(name: str, locus: str, oracle: QuadratureResult) -> VerifyEntry:
        """PASS when the oracle reports the moment as divergent."""
        return VerifyEntry(
            name=name,
            locus=locus,
            oracle=oracle.value if math.isfinite(oracle.value) else None,
            status="FAIL" if oracle.converged else "PASS",
            detail=(
                "oracle converged on a divergent moment" if oracle.converged
                else "divergence flagged"
            ),
        )

    # q-Laplace transform

    def laplace_suite(self) -> list[VerifyEntry]:
        m, sigma2 = SIGN_PARAMS
        entries = []
        for q in SIGN_Q_GRID:
            p = make_params(q, m, sigma2)
            checks = []
            for theta in SIGN_THETA_GRID:
                oracle = laplace_oracle(p, theta)
                entry = _compare(
                    f"laplace-closed-q{q:g}",
                    "closed-form q-Laplace transform of N_q(m, sigma2) against quadrature",
                    laplace_closed(p, theta).value,
                    oracle.value,
                    self.tol(1e-7),
                    detail=f"worst theta={theta:g}",
                )
                if not oracle.converged:
                    entry = entry.model_copy(
                        update={"status": "FAIL", "detail": f"oracle diverged at theta={theta:g}"}
                    )
                checks.append(entry)
            # Report the worst theta; any FAIL outranks a larger PASS error.
            entries.append(max(checks, key=lambda e: (e.status == "FAIL", e.rel_err or 0.0)))

        p = make_params(1.0, m, sigma2)
        gap = 0.0
        for theta in MGF_THETAS:
            exact = math.exp(p.m * theta + p.sigma2 * theta**2 / 2.0)
            gap = max(gap, _relative_error(laplace_closed(p, theta).value, exact)[1])
        entries.append(
            _worst(
                "laplace-mgf", "q = 1 transform is exp(m theta + sigma2 theta^2 / 2)",
                gap, self.tol(1e-12), len(MGF_THETAS),
            )
        )

        for q in LADDER_Q_GRID:
            p = make_params(q, m, sigma2)
            for n in range(1, 5):
                entries.append(self._ladder_entry(p, n))

        first, second = make_params(1.5, 0.0, 1.0), make_params(1.5, 2.0, 0.5)
        nonlinear = nonlinearity_gap(first, second, 0.1)
        entries.append(
            VerifyEntry(
                name="laplace-nonlinear-q1.5",
                locus="the q-Laplace transform is nonlinear for 1 < q < 3",
                closed=nonlinear,
                oracle=0.0,
                abs_err=nonlinear,
                status="PASS" if nonlinear > NONLINEAR_WITNESS else "FAIL",
                detail=f"mixture gap must exceed {NONLINEAR_WITNESS:g}",
            )
        )
        linear = nonlinearity_gap(make_params(1.0, 0.0, 1.0), make_params(1.0, 2.0, 0.5), 0.1)
        entries.append(
            _worst("laplace-linear-q1", "the q = 1 transform is linear", linear, self.tol(1e-9), 1)
        )
        return entries

    def _ladder_entry(self, p: QGaussianParams, n: int) -> VerifyEntry:
        name = f"laplace-ladder-q{p.q:g}-n{n}"
        locus = "n-th theta-derivative at 0 generates the q-moment of order n"
        tolerance = self.tol(1e-4 if n <= 2 else 1e-3)
        try:
            report = derivative_ladder_check(p, n)
        except NumericalError as exc:
            return VerifyEntry(
                name=name, locus=locus, tolerance=tolerance, status="FAIL", detail=exc.detail
            )
        rel_err = math.inf if report.rel_err is None else report.rel_err
        return VerifyEntry(
            name=name,
            locus=locus,
            closed=report.closed_form,
            oracle=report.oracle,
            abs_err=report.abs_err,
            rel_err=rel_err,
            tolerance=tolerance,
            status="PASS" if rel_err <= tolerance else "FAIL",
        )

    # Estimators

    def estimator_suite(self) -> list[VerifyEntry]:
        q = 1.2
        stats = summarize(SIGMA2_HAT_DATA, q)
        n = len(SIGMA2_HAT_DATA)
        expected = n / (n - 1) * (5.0 - 3.0 * q) / (3.0 - q) * stats.s2
        classical = SampleStats(n=100, mean=0.0, s2=1.0, sigma2_hat=100.0 / 99.0, q=1.0)
        interval = confidence_interval(classical, 1.0, 0.95)
        return [
            _compare(
                "sigma2-hat-identity", "sigma2_hat = n/(n-1) (5-3q)/(3-q) S^2",
                expected, stats.sigma2_hat, self.tol(1e-14),
            ),
            _compare(
                "classical-ci", "q = 1 interval half-width is z sigma / sqrt(n)",
                CLASSICAL_Z * 0.1, 0.5 * (interval.hi - interval.lo), self.tol(1e-6),
            ),
        ]

    def experiment_suite(self) -> list[VerifyEntry]:
        entries = []
        for q, n, reps in BIAS_CASES:
            report = bias_experiment(
                make_params(q), n, reps, self.seed, workers=self.workers, gate=self.tol(4.0)
            )
            entries.append(
                VerifyEntry(
                    name=f"bias-q{q:g}-n{n}",
                    locus="E(S^2) = ((n-1)/n)((3-q)/(5-3q)) sigma2 and E(sigma2_hat) = sigma2",
                    closed=report.expected_s2,
                    oracle=report.mean_s2,
                    abs_err=abs(report.mean_s2 - report.expected_s2),
                    rel_err=abs(report.mean_s2 - report.expected_s2) / report.expected_s2,
                    tolerance=report.gate,
                    status="PASS" if report.passed else "FAIL",
                    detail=f"z(S^2)={report.z_s2:.2f}, z(sigma2_hat)={report.z_sigma2_hat:.2f}",
                )
            )

        q, n, reps = COVERAGE_CASE
        coverage = coverage_experiment(
            make_params(q, 0.5, 2.0), n, reps, 0.95, self.seed, band=self.tol(0.02)
        )
        entries.append(
            VerifyEntry(
                name=f"coverage-q{q:g}",
                locus="95% interval for m with the exact standard error",
                closed=coverage.level,
                oracle=coverage.coverage,
                abs_err=abs(coverage.coverage - coverage.level),
                tolerance=coverage.band,
                status="PASS" if coverage.passed else "FAIL",
            )
        )

        lln = lln_check(make_params(1.3, 0.5, 1.0), seed=self.seed, gate=self.tol(5.0))
        largest = max(lln.rows, key=lambda row: row.n)
        entries.append(
            VerifyEntry(
                name="lln-q1.3",
                locus="sample mean approaches m under ordinary independence",
                closed=lln.m,
                oracle=largest.sample_mean,
                abs_err=largest.deviation,
                tolerance=largest.bound,
                status="PASS" if lln.passed else "FAIL",
                detail=f"n={largest.n}",
            )
        )

        q, n = DISCREPANCY_CASE
        discrepancy = ordinary_sum_discrepancy(make_params(q), n, self.seed)
        entries.append(
            VerifyEntry(
                name="ordinary-sum-discrepancy",
                locus="ordinarily independent sums do not follow the q-Gaussian sum law",
                closed=discrepancy.predicted,
                oracle=discrepancy.empirical,
                abs_err=abs(discrepancy.empirical - discrepancy.predicted),
                status="PASS" if discrepancy.discrepancy_detected else "FAIL",
                detail=(
                    f"z={discrepancy.z:.2f}; the gap must exceed "
                    f"{DISCREPANCY_GATE:g} standard errors"
                ),
            )
        )
        return entries

    # Printed-formula adjudications

    def errata_suite(self) -> list[VerifyEntry]:
        adjudications = errata.adjudicate_all(self.tol_scale, self.seed)
        return [_adjudication_entry(item) for item in adjudications]
