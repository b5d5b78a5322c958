"""The q-Gaussian family N_q(m, sigma2).

The density is a * e_q(-beta (x-m)^2 / sigma2) with beta = 1/(3-q) and
a = sqrt(beta) / (sigma C_q). For 1 < q < 3 the standard member N_q(0, 1)
coincides with the Student-t law with (3-q)/(q-1) degrees of freedom; for
q < 1 the support is compact.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from pydantic import ValidationError

from core.config import settings
from core.exceptions import (
    DegenerateTransformError,
    DivergenceError,
    DomainError,
    EscortDomainError,
    LevelError,
    NonPositiveScaleError,
    QOutOfRangeError,
)
from models.domain import EscortMap, QGaussianParams, QuadratureResult
from services.numerics import find_root, integrate, integrate_fixed
from services.qalgebra import ArrayLike, is_classical, q_exp
from services.special import student_t_pdf

logger = logging.getLogger(__name__)

# Half-width of the directly integrated window around m, in units of sigma.
WINDOW_SIGMAS = 8.0

# Standardized CDF table layout.
COMPACT_PANELS = 256
UNIFORM_STEP = 0.0625
UNIFORM_END = 8.0
GEOMETRIC_RATIO = 1.25
TABLE_END = 1.0e8
INVERSE_MAX_STEPS = 60
EDGE_PANEL_TOL = 1.0e-300


def make_params(q: float, m: float = 0.0, sigma2: float = 1.0) -> QGaussianParams:
    """Validated N_q(m, sigma2).

    Raises:
        QOutOfRangeError: q >= 3, where e_q(-x^2) is not normalizable.
        NonPositiveScaleError: sigma2 <= 0.
    """
    if not q < 3:
        raise QOutOfRangeError(q)
    if not sigma2 > 0 or not math.isfinite(sigma2):
        raise NonPositiveScaleError(sigma2)
    if not math.isfinite(m):
        raise DomainError(f"m must be finite (got {m})")
    try:
        return QGaussianParams(q=q, m=m, sigma2=sigma2)
    except ValidationError as exc:
        raise DomainError(str(exc)) from exc


def degrees_of_freedom(q: float) -> float:
    """Student-t degrees of freedom (3-q)/(q-1) matching N_q(0, 1) for 1 < q < 3."""
    if not 1 < q < 3:
        raise DomainError(f"Student-t identification needs 1 < q < 3 (got q={q:g})")
    return (3.0 - q) / (q - 1.0)


def tail_exponent(q: float, power: float = 1.0, n: int = 0) -> Optional[float]:
    """Decay exponent p of |x|^n pdf(x)^power ~ |x|^(-p) for q > 1 (None otherwise)."""
    if q <= 1 or is_classical(q):
        return None
    return 2.0 * power / (q - 1.0) - n


def pdf(p: QGaussianParams, x: ArrayLike) -> ArrayLike:
    """Density of N_q(m, sigma2); zero outside the support, maximal (= a) at m."""
    x = np.asarray(x, dtype=float)
    z = (x - p.m) / p.sigma
    value = p.prefactor * np.asarray(q_exp(p.q, -p.beta * z * z))
    if value.ndim == 0:
        return float(value)
    return value


def integrate_over_support(
    p: QGaussianParams,
    f: Callable[[np.ndarray], np.ndarray],
    *,
    tail: Optional[float] = None,
    tol: Optional[float] = None,
    rel_tol: Optional[float] = None,
) -> QuadratureResult:
    """Integrate f over the support of p.

    ``tail`` is the decay exponent of f for q > 1; the oracle uses it for
    the tail map and the divergence check.
    """
    lo, hi = p.support
    if p.q < 1:
        return integrate(f, lo, hi, tol, rel_tol=rel_tol)
    width = WINDOW_SIGMAS * p.sigma
    return integrate(
        f,
        -math.inf,
        math.inf,
        tol,
        rel_tol=rel_tol,
        tail_exponent=tail,
        window=(p.m - width, p.m + width),
    )


class StandardCdfTable:
    """Cumulative mass of N_q(0, 1) on a fixed grid of y >= 0.

    ``tail_mass[k]`` is the probability beyond ``nodes[k]``; ``tail_mass[0]``
    is 1/2. The table is immutable once built.
    """

    def __init__(self, q: float):
        self.q = q
        self.params = make_params(q, 0.0, 1.0)
        self.tail = tail_exponent(q)
        uniform = np.arange(0.0, UNIFORM_END, UNIFORM_STEP)
        count = math.ceil(math.log(TABLE_END / UNIFORM_END) / math.log(GEOMETRIC_RATIO))
        geometric = UNIFORM_END * GEOMETRIC_RATIO ** np.arange(count + 1)
        nodes = np.concatenate([uniform, geometric])
        if q < 1:
            # Clustered towards the support edge, where the density has a power-law zero.
            radius = self.params.half_width
            angles = 0.5 * math.pi * np.arange(COMPACT_PANELS + 1) / COMPACT_PANELS
            edge = radius * np.sin(angles)
            edge[-1] = radius
            nodes = np.unique(np.concatenate([nodes[nodes < radius], edge]))
        self.nodes = nodes
        self.nodes.setflags(write=False)

        panels = integrate_fixed(self.density, nodes[:-1], nodes[1:])
        if q < 1:
            # The density has a power-law zero at the support edge.
            edge_panel = integrate(
                self.density, float(nodes[-2]), float(nodes[-1]),
                EDGE_PANEL_TOL,
            )
            panels[-1] = edge_panel.value
        beyond = self._beyond(float(nodes[-1]))
        tail_mass = np.empty(nodes.size)
        tail_mass[-1] = beyond
        tail_mass[:-1] = beyond + np.cumsum(panels[::-1])[::-1]
        self.tail_mass = tail_mass
        self.tail_mass.setflags(write=False)
        logger.debug(
            f"built CDF table for q={q:g}: {nodes.size} nodes, "
            f"half mass {tail_mass[0]:.17g}, mass past {nodes[-1]:g} {beyond:.6g}"
        )

    def density(self, y: np.ndarray) -> np.ndarray:
        return pdf(self.params, y)

    def _beyond(self, y: float) -> float:
        """Probability mass beyond y, past the end of the table."""
        if self.q < 1 and y >= self.params.half_width:
            return 0.0
        if is_classical(self.q) and y >= UNIFORM_END:
            return 0.0
        result = integrate(self.density, y, math.inf, tail_exponent=self.tail)
        if not result.converged:
            raise DivergenceError(f"q={self.q:g} tail mass beyond {y:g}", result.error_estimate)
        return result.value

    def survival(self, y: ArrayLike) -> np.ndarray:
        """P(Y > y) for y >= 0."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        last = self.nodes.size - 1
        k = np.clip(np.searchsorted(self.nodes, y, side="right") - 1, 0, last - 1)
        inside = y < self.nodes[-1]
        upper = self.nodes[k + 1]
        local = integrate_fixed(self.density, np.where(inside, y, upper), upper)
        out = np.where(inside, self.tail_mass[k + 1] + local, 0.0)
        for index in np.flatnonzero(~inside):
            out[index] = self._beyond(float(y[index]))
        return out

    def tail_quantile(self, s: float) -> float:
        """y >= 0 with P(Y > y) = s, for 0 < s <= 1/2."""
        if s >= 0.5:
            return 0.0
        tol = settings.root_tol
        k = int(np.searchsorted(-self.tail_mass, -s, side="right")) - 1
        if k < self.nodes.size - 1:
            lo, hi = float(self.nodes[k]), float(self.nodes[k + 1])
        else:
            lo = float(self.nodes[-1])
            hi = 2.0 * lo
            while float(self.survival(hi)[0]) > s:
                lo, hi = hi, 2.0 * hi
                if not math.isfinite(hi):
                    raise DivergenceError(f"q={self.q:g} quantile bracket for tail mass {s:g}")
        return find_root(
            lambda y: float(self.survival(y)[0]) - s, lo, hi, tol * max(1.0, abs(lo))
        )

    def inverse_survival(self, s: np.ndarray) -> np.ndarray:
        """Vectorized tail_quantile by safeguarded Newton steps inside each table panel.

        Only used for compact support, where every s in [0, 1/2] falls
        inside the table.
        """
        s = np.asarray(s, dtype=float)
        last = self.nodes.size - 1
        k = np.clip(np.searchsorted(-self.tail_mass, -s, side="right") - 1, 0, last - 1)
        lo = self.nodes[k].copy()
        hi = self.nodes[k + 1].copy()
        top = self.nodes[k + 1]
        base = self.tail_mass[k + 1]
        y = 0.5 * (lo + hi)
        resolution = 4.0 * np.finfo(float).eps * max(1.0, float(self.nodes[-1]))
        for _ in range(INVERSE_MAX_STEPS):
            residual = base + integrate_fixed(self.density, y, top) - s
            too_small = residual > 0
            lo = np.where(too_small, y, lo)
            hi = np.where(too_small, hi, y)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = y + residual / self.density(y)
            newton = np.isfinite(step) & (step > lo) & (step < hi)
            y_next = np.where(newton, step, 0.5 * (lo + hi))
            moved = np.max(np.abs(y_next - y), initial=0.0)
            y = y_next
            if moved <= resolution:
                break
        return y


@lru_cache(maxsize=64)
def cdf_table(q: float) -> StandardCdfTable:
    return StandardCdfTable(q)


def cdf(p: QGaussianParams, x: ArrayLike) -> ArrayLike:
    """P(X <= x), from the cached standardized table plus one local panel."""
    x = np.asarray(x, dtype=float)
    y = np.atleast_1d((x - p.m) / p.sigma)
    upper = cdf_table(p.q).survival(np.abs(y))
    out = np.where(y > 0, 1.0 - upper, upper)
    out = np.where(y == 0, 0.5, out)
    if x.ndim == 0:
        return float(out[0])
    return out.reshape(x.shape)


def quantile(p: QGaussianParams, u: float) -> float:
    """x with cdf(x) = u, for 0 < u < 1."""
    if not 0 < u < 1:
        raise LevelError("u", u)
    if u == 0.5:
        return p.m
    table = cdf_table(p.q)
    if u > 0.5:
        y = table.tail_quantile(1.0 - u)
    else:
        y = -table.tail_quantile(u)
    return p.m + p.sigma * y


def sample(p: QGaussianParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """n independent draws from N_q(m, sigma2).

    q = 1 draws normals, 1 < q < 3 draws Student-t variates (exactly N_q(0, 1)
    rescaled), q < 1 inverts the CDF.
    """
    if n < 0:
        raise DomainError(f"sample size must be >= 0 (got {n})")
    if n == 0:
        return np.empty(0)
    if is_classical(p.q):
        standard = rng.standard_normal(n)
    elif p.q > 1:
        standard = rng.standard_t(degrees_of_freedom(p.q), n)
    else:
        u = rng.random(n)
        s = np.minimum(u, 1.0 - u)
        standard = np.where(u < 0.5, -1.0, 1.0) * cdf_table(p.q).inverse_survival(s)
    return p.m + p.sigma * standard


def affine(p: QGaussianParams, c: float, d: float) -> QGaussianParams:
    """Parameters of c + d X for X ~ N_q(m, sigma2): N_q(c + d m, d^2 sigma2)."""
    if d == 0:
        raise DegenerateTransformError()
    return make_params(p.q, c + d * p.m, d * d * p.sigma2)


def duality_residual(q: float, y: ArrayLike) -> ArrayLike:
    """|e_q(-y^2) - e_{2-1/q}(-q y^2)^(1/q)|."""
    if q == 0:
        raise DomainError("duality needs q != 0")
    y = np.asarray(y, dtype=float)
    lhs = np.asarray(q_exp(q, -y * y))
    with np.errstate(over="ignore", divide="ignore"):
        rhs = np.power(np.asarray(q_exp(2.0 - 1.0 / q, -q * y * y)), 1.0 / q)
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        raise DomainError(f"duality sides are not finite for q={q:g}")
    residual = np.abs(lhs - rhs)
    if residual.ndim == 0:
        return float(residual)
    return residual


def escort_map(p: QGaussianParams, power: float) -> EscortMap:
    """(q', sigma2') with pdf^power proportional to the pdf of N_q'(m, sigma2').

    Uses e_q(x)^power = e_q'(power * x) with q' = 1 - (1-q)/power.
    """
    if not power > 0:
        raise DomainError(f"escort power must be > 0 (got {power:g})")
    q_prime = 1.0 - (1.0 - p.q) / power
    if not q_prime < 3:
        raise EscortDomainError(p.q, power, q_prime)
    beta_prime = 1.0 / (3.0 - q_prime)
    sigma2_prime = p.sigma2 * beta_prime / (power * p.beta)
    return EscortMap(power=power, q_prime=q_prime, m=p.m, sigma2_prime=sigma2_prime)


def nu_p(p: QGaussianParams, power: float) -> float:
    """Closed form of the integral of pdf^power: a^power / a', a' the escort image's prefactor."""
    image = escort_map(p, power).target()
    return math.exp(power * math.log(p.prefactor) - math.log(image.prefactor))


def nu_p_oracle(p: QGaussianParams, power: float) -> QuadratureResult:
    """Quadrature of pdf^power over the support."""
    if not power > 0:
        raise DomainError(f"escort power must be > 0 (got {power:g})")
    return integrate_over_support(
        p, lambda x: np.power(pdf(p, x), power), tail=tail_exponent(p.q, power)
    )


def escort_residual(p: QGaussianParams, power: float, x: ArrayLike) -> float:
    """Largest relative gap between pdf^power / nu_p and the escort image's pdf on x."""
    image = escort_map(p, power).target()
    expected = np.asarray(pdf(image, x))
    observed = np.power(np.asarray(pdf(p, x)), power) / nu_p(p, power)
    positive = expected > 0
    if np.any(observed[~positive] != 0):
        return math.inf
    if not np.any(positive):
        return 0.0
    return float(np.max(np.abs(observed[positive] / expected[positive] - 1.0)))


def student_t_residual(q: float, y: ArrayLike) -> float:
    """Largest relative gap between the N_q(0, 1) and Student-t((3-q)/(q-1)) densities."""
    nu = degrees_of_freedom(q)
    standard = make_params(q)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    ours = np.asarray(pdf(standard, y))
    reference = np.array([student_t_pdf(nu, float(v)) for v in y])
    return float(np.max(np.abs(ours / reference - 1.0)))
