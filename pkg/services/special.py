"""Special functions for the q-Gaussian normalizer."""
import logging
import math

from core.config import settings
from core.exceptions import NonPositiveArgumentError, QOutOfRangeError

logger = logging.getLogger(__name__)

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
SQRT_PI = math.sqrt(math.pi)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise NonPositiveArgumentError("log_gamma", x)
    if x < 0.5:
        # Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    series = LANCZOS_COEFFICIENTS[0]
    for k, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + k)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(series)


def log_beta(a: float, b: float) -> float:
    """log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a + b)."""
    if not a > 0:
        raise NonPositiveArgumentError("beta_fn", a)
    if not b > 0:
        raise NonPositiveArgumentError("beta_fn", b)
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function, evaluated in log space."""
    return math.exp(log_beta(a, b))


def c_q(q: float) -> float:
    """C_q = integral of e_q(-x^2) over the real line, for q < 3.

    Three branches: the Beta form with first argument (3-q)/(2(q-1)) for
    1 < q < 3, sqrt(pi) at q = 1, and the Beta form with first argument
    (2-q)/(1-q) for q < 1. Within ``settings.cq_one_band`` of 1 the value
    is sqrt(pi) directly.
    """
    if not q < 3:
        raise QOutOfRangeError(q)
    if abs(q - 1.0) < settings.cq_one_band:
        if q != 1.0:
            logger.debug(f"c_q({q!r}) inside the q=1 band, returning sqrt(pi)")
        return SQRT_PI
    if q > 1:
        log_value = -0.5 * math.log(q - 1.0) + log_beta((3.0 - q) / (2.0 * (q - 1.0)), 0.5)
    else:
        log_value = -0.5 * math.log(1.0 - q) + log_beta((2.0 - q) / (1.0 - q), 0.5)
    return math.exp(log_value)


def student_t_pdf(nu: float, y: float) -> float:
    """Student-t density with nu degrees of freedom."""
    if not nu > 0:
        raise NonPositiveArgumentError("student_t_pdf", nu)
    log_norm = (
        log_gamma(0.5 * (nu + 1.0))
        - log_gamma(0.5 * nu)
        - 0.5 * math.log(nu * math.pi)
    )
    return math.exp(log_norm - 0.5 * (nu + 1.0) * math.log1p(y * y / nu))
