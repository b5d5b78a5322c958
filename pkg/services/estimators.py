"""Sample statistics, the q-corrected variance estimator and Monte Carlo experiments.

Every experiment draws ordinarily independent samples. Seeds are integers so
they can be reported; ``workers`` independent streams are spawned from the
seed with ``numpy.random.SeedSequence`` and their sums combined in a fixed
order, so results only depend on (seed, workers).
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Literal, Optional, Sequence

import numpy as np

from core.config import settings
from core.exceptions import (
    DomainError,
    FormulaWindowError,
    InsufficientDataError,
    LevelError,
    NonPositiveScaleError,
)
from models.domain import (
    BiasReport,
    ConfidenceInterval,
    CoverageReport,
    LlnReport,
    LlnRow,
    QGaussianParams,
    SampleStats,
)
from services.moments import variance_closed
from services.qgaussian import make_params, quantile, sample

logger = logging.getLogger(__name__)

IntervalMethod = Literal["clt", "q-quantile"]

VARIANCE_WINDOW_TOP = 5.0 / 3.0
BIAS_GATE = 4.0
LLN_GATE = 5.0
COVERAGE_BAND = 0.02
DEFAULT_LLN_SCHEDULE = (100, 10_000, 1_000_000)
# Replications drawn per block, bounding memory at CHUNK_REPS * n doubles.
CHUNK_REPS = 10_000


def _require_variance_window(q: float) -> None:
    if not q < VARIANCE_WINDOW_TOP:
        raise FormulaWindowError("the variance correction", q, "q < 5/3")


def variance_factor(q: float) -> float:
    """(3-q)/(5-3q): V(X) / sigma2 for X ~ N_q(m, sigma2)."""
    _require_variance_window(q)
    return (3.0 - q) / (5.0 - 3.0 * q)


def summarize(data: Sequence[float] | np.ndarray, q: float) -> SampleStats:
    """Mean, S^2 = (1/n) sum (x - mean)^2 and sigma2_hat = n/(n-1) (5-3q)/(3-q) S^2."""
    values = np.asarray(data, dtype=float)
    n = values.size
    if n < 2:
        raise InsufficientDataError(n)
    _require_variance_window(q)
    mean = float(values.mean())
    s2 = float(np.mean((values - mean) ** 2))
    sigma2_hat = n / (n - 1) * ((5.0 - 3.0 * q) / (3.0 - q)) * s2
    return SampleStats(n=n, mean=mean, s2=s2, sigma2_hat=sigma2_hat, q=q)


def sample_kurtosis(data: Sequence[float] | np.ndarray) -> float:
    """Fourth central sample moment over the squared second."""
    values = np.asarray(data, dtype=float)
    if values.size < 2:
        raise InsufficientDataError(values.size)
    centred = values - values.mean()
    m2 = float(np.mean(centred**2))
    if m2 == 0:
        raise DomainError("sample kurtosis of a constant sample is undefined")
    return float(np.mean(centred**4)) / m2**2


def interval_quantile(q: float, level: float, method: IntervalMethod = "clt") -> float:
    """z_{1 - alpha/2} from N_1(0, 1) ("clt") or from N_q(0, 1) ("q-quantile")."""
    if not 0 < level < 1:
        raise LevelError("level", level)
    reference = make_params(1.0 if method == "clt" else q)
    return quantile(reference, 0.5 + 0.5 * level)


def confidence_interval(
    stats: SampleStats,
    sigma2_known: float,
    level: float = 0.95,
    method: IntervalMethod = "clt",
) -> ConfidenceInterval:
    """mean +- z sqrt((3-q)/(5-3q)) sigma / sqrt(n).

    The standard error is the exact one of the sample mean of n ordinarily
    independent draws; ``method`` picks the quantile z.
    """
    if not sigma2_known > 0:
        raise NonPositiveScaleError(sigma2_known)
    z = interval_quantile(stats.q, level, method)
    standard_error = math.sqrt(variance_factor(stats.q) * sigma2_known / stats.n)
    half_width = z * standard_error
    return ConfidenceInterval(
        lo=stats.mean - half_width,
        hi=stats.mean + half_width,
        level=level,
        method=method,
        z=z,
        standard_error=standard_error,
    )


def _streams(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def _bias_sums(
    p: QGaussianParams, n: int, reps: int, rng: np.random.Generator
) -> np.ndarray:
    """Sums of S^2, S^4, sigma2_hat, sigma2_hat^2 over ``reps`` replications."""
    correction = n / (n - 1) * (5.0 - 3.0 * p.q) / (3.0 - p.q)
    sums = np.zeros(4)
    done = 0
    while done < reps:
        block = min(CHUNK_REPS, reps - done)
        draws = sample(p, rng, block * n).reshape(block, n)
        s2 = draws.var(axis=1)
        sigma2_hat = correction * s2
        sums += (s2.sum(), (s2**2).sum(), sigma2_hat.sum(), (sigma2_hat**2).sum())
        done += block
    return sums


def _mean_and_se(total: float, total_sq: float, count: int) -> tuple[float, float]:
    mean = total / count
    variance = max(total_sq / count - mean * mean, 0.0) * count / (count - 1)
    return mean, math.sqrt(variance / count)


def bias_experiment(
    p: QGaussianParams,
    n: int,
    reps: int,
    seed: Optional[int] = None,
    *,
    workers: Optional[int] = None,
    gate: float = BIAS_GATE,
) -> BiasReport:
    """Monte Carlo E(S^2) and mean(sigma2_hat) against their closed forms.

    E(S^2) is compared with ((n-1)/n)((3-q)/(5-3q)) sigma2 and the mean of
    sigma2_hat with sigma2. Each comparison passes when it lies within
    ``gate`` Monte Carlo standard errors.
    """
    _require_variance_window(p.q)
    if n < 2:
        raise InsufficientDataError(n)
    if reps < 2:
        raise InsufficientDataError(reps)
    seed = settings.seed if seed is None else seed
    workers = max(1, min(settings.workers if workers is None else workers, reps))
    logger.info(f"bias experiment q={p.q:g} n={n} reps={reps} seed={seed} workers={workers}")

    shares = _split(reps, workers)
    streams = _streams(seed, workers)
    if workers == 1:
        partials = [_bias_sums(p, n, reps, streams[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_bias_sums, p, n, share, rng) for share, rng in zip(shares, streams)
            ]
            partials = [future.result() for future in futures]
    totals = np.sum(partials, axis=0)

    expected = (n - 1) / n * variance_factor(p.q) * p.sigma2
    mean_s2, se_s2 = _mean_and_se(totals[0], totals[1], reps)
    mean_hat, se_hat = _mean_and_se(totals[2], totals[3], reps)
    z_s2 = (mean_s2 - expected) / se_s2 if se_s2 > 0 else 0.0
    z_hat = (mean_hat - p.sigma2) / se_hat if se_hat > 0 else 0.0
    passed = bool(abs(z_s2) <= gate and abs(z_hat) <= gate)
    return BiasReport(
        q=p.q,
        n=n,
        reps=reps,
        sigma2=p.sigma2,
        seed=seed,
        workers=workers,
        expected_s2=expected,
        mean_s2=mean_s2,
        se_s2=se_s2,
        z_s2=z_s2,
        mean_sigma2_hat=mean_hat,
        se_sigma2_hat=se_hat,
        z_sigma2_hat=z_hat,
        gate=gate,
        passed=passed,
    )


def lln_check(
    p: QGaussianParams,
    n_schedule: Sequence[int] = DEFAULT_LLN_SCHEDULE,
    seed: Optional[int] = None,
    *,
    gate: float = LLN_GATE,
) -> LlnReport:
    """|sample mean - m| along ``n_schedule``.

    Passes when the deviation at the largest n is within gate * sqrt(V/n).
    """
    if not n_schedule:
        raise DomainError("sample-size schedule is empty")
    seed = settings.seed if seed is None else seed
    variance = variance_closed(p)
    rows = []
    for size, rng in zip(n_schedule, _streams(seed, len(n_schedule))):
        if size < 1:
            raise InsufficientDataError(size, minimum=1)
        sample_mean = float(sample(p, rng, size).mean())
        rows.append(
            LlnRow(
                n=size,
                sample_mean=sample_mean,
                deviation=abs(sample_mean - p.m),
                bound=gate * math.sqrt(variance / size),
            )
        )
    largest = max(rows, key=lambda row: row.n)
    passed = bool(largest.deviation < largest.bound)
    logger.info(f"LLN check q={p.q:g} seed={seed}: passed={passed}")
    return LlnReport(q=p.q, m=p.m, seed=seed, rows=rows, passed=passed)


def coverage_experiment(
    p: QGaussianParams,
    n: int,
    reps: int,
    level: float = 0.95,
    seed: Optional[int] = None,
    *,
    method: IntervalMethod = "clt",
    band: float = COVERAGE_BAND,
) -> CoverageReport:
    """Fraction of ``reps`` intervals (known sigma2) that contain m.

    Passes when the coverage is within ``band`` of ``level``.
    """
    _require_variance_window(p.q)
    if n < 2:
        raise InsufficientDataError(n)
    if reps < 1:
        raise InsufficientDataError(reps, minimum=1)
    seed = settings.seed if seed is None else seed
    rng = _streams(seed, 1)[0]
    z = interval_quantile(p.q, level, method)
    half_width = z * math.sqrt(variance_factor(p.q) * p.sigma2 / n)
    covered = 0
    done = 0
    while done < reps:
        block = min(CHUNK_REPS, reps - done)
        means = sample(p, rng, block * n).reshape(block, n).mean(axis=1)
        covered += int(np.count_nonzero(np.abs(means - p.m) <= half_width))
        done += block
    coverage = covered / reps
    passed = bool(abs(coverage - level) <= band)
    logger.info(
        f"coverage q={p.q:g} n={n} reps={reps} method={method} seed={seed}: {coverage:.4f}"
    )
    return CoverageReport(
        q=p.q,
        n=n,
        reps=reps,
        level=level,
        method=method,
        seed=seed,
        coverage=coverage,
        passed=passed,
        band=band,
    )
