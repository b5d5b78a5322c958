"""Independent numerical oracle: adaptive quadrature, differentiation, root finding.

Integrands must accept a numpy array of abscissae and return an array of the
same shape (every qalgebra and density function does).
"""
import heapq
import itertools
import logging
import math
from typing import Callable, Optional

import numpy as np

from core.config import settings
from core.exceptions import BracketError, DivergenceError, DomainError
from models.domain import QuadratureResult

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

EPS = float(np.finfo(float).eps)

# 15-point Kronrod rule with its embedded 7-point Gauss rule (QUADPACK qk15).
# Half-tables run from the outermost node to the centre.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK, _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK, _WGK[-2::-1]])
GAUSS_WEIGHTS = np.concatenate([_WG, _WG[-2::-1]])
RULE_POINTS = NODES.size

# Far abscissae, in units of the tail scale, used to read off a power-law decay.
TAIL_SAMPLES = (1.0e6, 1.0e12)
MAX_POWER_TAIL = 60.0
DIVERGENT_TAIL_MARGIN = 1.0e-6


def _gk15(f: Integrand, lo: float, hi: float) -> tuple[float, float]:
    """One Gauss-Kronrod panel: (Kronrod estimate, QUADPACK error estimate)."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    with np.errstate(all="ignore"):
        fx = np.broadcast_to(np.asarray(f(centre + half * NODES), dtype=float), NODES.shape)
    if not np.all(np.isfinite(fx)):
        finite = np.where(np.isfinite(fx), fx, 0.0)
        return half * float(KRONROD_WEIGHTS @ finite), math.inf

    kronrod = float(KRONROD_WEIGHTS @ fx)
    gauss = float(GAUSS_WEIGHTS @ fx)
    mean = 0.5 * kronrod
    resabs = float(KRONROD_WEIGHTS @ np.abs(fx)) * abs(half)
    resasc = float(KRONROD_WEIGHTS @ np.abs(fx - mean)) * abs(half)

    error = abs((kronrod - gauss) * half)
    if resasc != 0.0 and error != 0.0:
        error = resasc * min(1.0, (200.0 * error / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50.0 * EPS):
        error = max(50.0 * EPS * resabs, error)
    return kronrod * half, error


def integrate_fixed(f: Integrand, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Single 15-point Kronrod panel on every interval [a_i, b_i] at once.

    ``f`` receives an array of shape ``a.shape + (15,)``. No error control:
    callers keep the panels short enough for the rule to be exact to
    working precision.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[..., None] + half[..., None] * NODES
    with np.errstate(all="ignore"):
        fx = np.asarray(f(x), dtype=float)
    return half * (fx @ KRONROD_WEIGHTS)


def _power_tail(f: Integrand, edge: float, width: float, p: float, sign: float) -> Integrand:
    """Map the tail beyond ``edge`` onto v in (0, 1] with x = edge + sign*w*(v^(-1/(p-1)) - 1).

    An |x|^(-p) tail becomes a bounded, smooth function of v.
    """
    k = 1.0 / (p - 1.0)

    def mapped(v: np.ndarray) -> np.ndarray:
        log_v = np.log(v)
        x = edge + sign * width * np.expm1(-k * log_v)
        jacobian = width * k * np.exp(-(k + 1.0) * log_v)
        fx = np.asarray(f(x), dtype=float)
        out = np.where(fx == 0.0, 0.0, fx * jacobian)
        return np.where(np.isfinite(x), out, 0.0)

    return mapped


def _rational_tail(f: Integrand, edge: float, width: float, sign: float) -> Integrand:
    """Map the tail beyond ``edge`` onto t in [0, 1) with x = edge + sign*w*t/(1-t^2)."""

    def mapped(t: np.ndarray) -> np.ndarray:
        one_minus = 1.0 - t * t
        x = edge + sign * width * t / one_minus
        jacobian = width * (1.0 + t * t) / (one_minus * one_minus)
        fx = np.asarray(f(x), dtype=float)
        out = np.where(fx == 0.0, 0.0, fx * jacobian)
        return np.where(np.isfinite(x), out, 0.0)

    return mapped


def measured_tail_exponent(
    f: Integrand, edge: float, width: float, sign: float
) -> Optional[float]:
    """Decay exponent p of |f(x)| ~ |x|^(-p) beyond ``edge``, read off two far abscissae.

    None when f vanishes (or decays faster than |x|^(-MAX_POWER_TAIL)) out there.
    """
    distances = width * np.asarray(TAIL_SAMPLES)
    with np.errstate(all="ignore"):
        fx = np.abs(np.asarray(f(edge + sign * distances), dtype=float))
    if fx.shape != distances.shape or not np.all(np.isfinite(fx)):
        return None
    near, far = float(fx[0]), float(fx[1])
    if near == 0.0 or far == 0.0:
        return None
    p = math.log(near / far) / math.log(TAIL_SAMPLES[1] / TAIL_SAMPLES[0])
    return p if p < MAX_POWER_TAIL else None


def _segments(
    f: Integrand,
    a: float,
    b: float,
    tail_exponent: Optional[float],
    window: Optional[tuple[float, float]],
) -> Optional[list[tuple[Integrand, float, float]]]:
    """Split (a, b) into a finite window plus mapped tails, each on a finite interval.

    Without a ``tail_exponent`` each tail is checked for power-law decay and
    gets the power map when one is found. None means some tail decays no
    faster than 1/|x|, so the integral is infinite.
    """
    if math.isfinite(a) and math.isfinite(b):
        return [(f, a, b)]

    if window is not None:
        lo, hi = window
    elif math.isfinite(a):
        lo, hi = a, a + 1.0
    elif math.isfinite(b):
        lo, hi = b - 1.0, b
    else:
        lo, hi = -1.0, 1.0
    lo, hi = max(lo, a), min(hi, b)
    width = max(0.5 * (hi - lo), 1.0e-3)

    segments: list[tuple[Integrand, float, float]] = []
    if hi > lo:
        segments.append((f, lo, hi))
    for edge, sign, infinite in ((hi, 1.0, math.isinf(b)), (lo, -1.0, math.isinf(a))):
        if not infinite:
            continue
        # The tail scale follows the edge unless the caller fixed the window.
        scale = width if window is not None else max(width, 0.5 * abs(edge))
        p = tail_exponent
        if p is None:
            p = measured_tail_exponent(f, edge, scale, sign)
            if p is not None:
                logger.debug(f"tail beyond {edge:g} decays like |x|^-{p:.6g}")
        if p is None:
            segments.append((_rational_tail(f, edge, scale, sign), 0.0, 1.0))
        elif p <= 1.0 + DIVERGENT_TAIL_MARGIN:
            return None
        else:
            segments.append((_power_tail(f, edge, scale, p, sign), 0.0, 1.0))
    return segments


def integrate(
    f: Integrand,
    a: float,
    b: float,
    tol: Optional[float] = None,
    *,
    rel_tol: Optional[float] = None,
    limit: Optional[int] = None,
    tail_exponent: Optional[float] = None,
    window: Optional[tuple[float, float]] = None,
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod quadrature of f over (a, b).

    Infinite endpoints are mapped onto finite intervals. When the integrand
    decays like |x|^(-p), passing ``tail_exponent=p`` switches the tails to a
    power map and enables the tail bound check: p <= 1 means the tail
    integral is infinite, so the result comes back unconverged without any
    evaluation. ``window`` is the finite region integrated directly, outside
    of which the tail maps take over.

    Args:
        f: Vectorized integrand.
        a, b: Limits; ``-inf``/``inf`` allowed.
        tol: Absolute tolerance (``settings.quad_tol`` by default).
        rel_tol: Relative tolerance (``settings.quad_rel_tol`` by default).
        limit: Maximum number of panels (``settings.quad_limit`` by default).

    Returns:
        QuadratureResult, with ``converged`` set when the summed error
        estimate meets max(tol, rel_tol * |value|).
    """
    tol = settings.quad_tol if tol is None else tol
    rel_tol = settings.quad_rel_tol if rel_tol is None else rel_tol
    limit = settings.quad_limit if limit is None else limit
    if not tol > 0:
        raise DomainError(f"quadrature tolerance must be > 0 (got {tol:g})")

    if a == b:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0, converged=True)
    if a > b:
        flipped = integrate(
            f, b, a, tol, rel_tol=rel_tol, limit=limit,
            tail_exponent=tail_exponent, window=window,
        )
        return flipped.model_copy(update={"value": -flipped.value})

    if tail_exponent is not None and tail_exponent <= 1.0 and not (
        math.isfinite(a) and math.isfinite(b)
    ):
        logger.debug(f"tail exponent {tail_exponent:g} <= 1: integral diverges, skipping")
        return QuadratureResult(
            value=math.inf, error_estimate=math.inf, evaluations=0, converged=False
        )

    segments = _segments(f, float(a), float(b), tail_exponent, window)
    if segments is None:
        logger.debug(f"integrand over ({a:g}, {b:g}) decays no faster than 1/|x|: diverges")
        return QuadratureResult(
            value=math.inf,
            error_estimate=math.inf,
            evaluations=len(TAIL_SAMPLES),
            converged=False,
        )

    counter = itertools.count()
    heap: list[tuple[float, int, int, float, float, float]] = []
    retired_value = 0.0
    retired_error = 0.0
    panels = 0
    for index, (g, lo, hi) in enumerate(segments):
        value, error = _gk15(g, lo, hi)
        panels += 1
        heapq.heappush(heap, (-error, next(counter), index, lo, hi, value))

    def totals() -> tuple[float, float]:
        value = math.fsum([entry[5] for entry in heap]) + retired_value
        error = math.fsum([-entry[0] for entry in heap]) + retired_error
        return value, error

    value, error = totals()
    while error > max(tol, rel_tol * abs(value)) and heap and panels < limit:
        neg_error, _, index, lo, hi, panel_value = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # Panel no longer splittable in floating point.
            retired_error += -neg_error
            retired_value += panel_value
            value, error = totals()
            continue
        g = segments[index][0]
        for sub_lo, sub_hi in ((lo, mid), (mid, hi)):
            sub_value, sub_error = _gk15(g, sub_lo, sub_hi)
            heapq.heappush(heap, (-sub_error, next(counter), index, sub_lo, sub_hi, sub_value))
        panels += 2
        value, error = totals()

    converged = bool(math.isfinite(error) and error <= max(tol, rel_tol * abs(value)))
    if not converged:
        logger.warning(
            f"quadrature over ({a:g}, {b:g}) did not converge: "
            f"value={value:.6g} error={error:.3g} panels={panels}"
        )
    return QuadratureResult(
        value=value,
        error_estimate=error if math.isfinite(error) else math.inf,
        evaluations=panels * RULE_POINTS,
        converged=converged,
    )


def require_converged(result: QuadratureResult, what: str) -> float:
    """Value of a converged quadrature; DivergenceError otherwise."""
    if not result.converged:
        raise DivergenceError(what, result.error_estimate)
    return result.value


# Central difference stencils: offsets, weights and the constant c in c * h^n.
_STENCILS: dict[int, tuple[tuple[int, ...], tuple[float, ...], float]] = {
    1: ((-1, 1), (-1.0, 1.0), 2.0),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0), 1.0),
    3: ((-2, -1, 1, 2), (-1.0, 2.0, -2.0, 1.0), 2.0),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0), 1.0),
}
RICHARDSON_LEVELS = 3


def _central_difference(f: Callable, x0: float, n: int, h: float) -> np.ndarray:
    offsets, weights, constant = _STENCILS[n]
    total = sum(w * np.asarray(f(x0 + k * h), dtype=float) for k, w in zip(offsets, weights))
    return total / (constant * h**n)


def differentiate_n(
    f: Callable, x0: float, n: int, h: Optional[float] = None
) -> float | np.ndarray:
    """n-th derivative of f at x0 (n = 1..4) by central differences and Richardson extrapolation.

    Differences at steps h, 2h, 4h are combined so the leading h^2 and h^4
    error terms cancel. ``f`` is called with scalars; an array-valued ``f``
    is differentiated elementwise. The default step is eps^(1/(n+4)) * (1 + |x0|).
    """
    if n not in _STENCILS:
        raise DomainError(f"derivative order must be 1..4 (got {n})")
    if h is None:
        h = EPS ** (1.0 / (n + 4)) * (1.0 + abs(x0))
    if not h > 0:
        raise DomainError(f"step must be > 0 (got {h:g})")

    table = [_central_difference(f, x0, n, h * 2**level) for level in range(RICHARDSON_LEVELS)]
    for order in range(1, RICHARDSON_LEVELS):
        factor = 4.0**order
        table = [
            (factor * table[i] - table[i + 1]) / (factor - 1.0) for i in range(len(table) - 1)
        ]
    result = table[0]
    if np.ndim(result) == 0:
        return float(result)
    return result


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Optional[float] = None,
    *,
    ftol: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Brent's method on a sign-changing bracket [lo, hi].

    Stops when the bracket is narrower than ``tol`` or |f| <= ``ftol``.

    Raises:
        BracketError: f(lo) and f(hi) share a sign.
        DivergenceError: ``max_iter`` iterations without convergence.
    """
    tol = settings.root_tol if tol is None else tol
    a, b = float(lo), float(hi)
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise BracketError(a, b, fa, fb)

    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0 or abs(fb) <= ftol:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                # Secant step
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                # Inverse quadratic interpolation
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = float(f(b))
    raise DivergenceError(f"root search on [{lo:g}, {hi:g}]")
