"""Custom exceptions.

Every error carries the process exit code the CLI reports for it:
2 for domain/usage errors, 3 for numerical non-convergence, 1 for a
failed verification run.
"""


class QStatError(Exception):
    """Base class for all library errors."""

    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(QStatError, ValueError):
    """Raised when an argument lies outside an operation's domain."""


class QOutOfRangeError(DomainError):
    """Raised when q is outside the range a distribution or formula accepts."""

    def __init__(self, q: float, bound: float = 3.0, what: str = "q"):
        super().__init__(f"{what} must be < {bound:g} (got q={q:g})")
        self.q = q
        self.bound = bound


class NonPositiveScaleError(DomainError):
    """Raised when sigma2 is not strictly positive."""

    def __init__(self, sigma2: float):
        super().__init__(f"sigma2 must be > 0 (got {sigma2:g})")


class NonPositiveArgumentError(DomainError):
    """Raised when a function defined on the positive reals gets x <= 0."""

    def __init__(self, name: str, value: float):
        super().__init__(f"{name} requires a positive argument (got {value:g})")


class PoleError(DomainError):
    """Raised when an expression hits the pole of a q-deformed operation."""

    def __init__(self, operation: str, q: float, x: float):
        super().__init__(f"{operation} has a pole at x={x:g} for q={q:g}")


class FormulaWindowError(DomainError):
    """Raised when a closed form is evaluated outside its validity window."""

    def __init__(self, formula: str, q: float, window: str):
        super().__init__(f"{formula} is defined for {window} (got q={q:g})")


class EscortDomainError(DomainError):
    """Raised when a power of a q-Gaussian does not map to a valid q-Gaussian."""

    def __init__(self, q: float, power: float, q_prime: float):
        super().__init__(
            f"power {power:g} of a q={q:g} Gaussian maps to q'={q_prime:g}; q' must be < 3"
        )


class MismatchedQError(DomainError):
    """Raised when two q-Gaussians with different q are combined."""

    def __init__(self, q1: float, q2: float):
        super().__init__(f"q-Gaussians must share q (got {q1:g} and {q2:g})")


class DegenerateTransformError(DomainError):
    """Raised when an affine map has a zero scale."""

    def __init__(self):
        super().__init__("affine scale d must be non-zero")


class InsufficientDataError(DomainError):
    """Raised when a sample is too small for the requested statistic."""

    def __init__(self, n: int, minimum: int = 2):
        super().__init__(f"need at least {minimum} observations (got {n})")


class LevelError(DomainError):
    """Raised when a probability or confidence level is outside (0, 1)."""

    def __init__(self, name: str, value: float):
        super().__init__(f"{name} must lie in (0, 1) (got {value:g})")


class NumericalError(QStatError, ArithmeticError):
    """Raised when a numerical method fails to deliver a trustworthy value."""

    exit_code = 3


class DivergenceError(NumericalError):
    """Raised when the quadrature oracle does not converge."""

    def __init__(self, what: str, error_estimate: float | None = None):
        suffix = "" if error_estimate is None else f" (error estimate {error_estimate:.3g})"
        super().__init__(f"{what} did not converge{suffix}")


class BracketError(NumericalError):
    """Raised when a root-finding bracket does not change sign."""

    def __init__(self, lo: float, hi: float, f_lo: float, f_hi: float):
        super().__init__(
            f"root not bracketed: f({lo:g})={f_lo:.3g} and f({hi:g})={f_hi:.3g} share a sign"
        )


class VerificationFailed(QStatError):
    """Raised when a verify run records at least one FAIL."""

    exit_code = 1

    def __init__(self, failures: int):
        super().__init__(f"{failures} verification check(s) failed")
        self.failures = failures
