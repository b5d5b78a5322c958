"""Domain models."""
import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

from services.special import c_q


class FrozenModel(BaseModel):
    """Immutable model whose infinities survive a JSON round trip."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class QuadratureResult(FrozenModel):
    """Outcome of one oracle integration."""

    value: float
    error_estimate: float = Field(ge=0.0)
    evaluations: int = Field(ge=0)
    converged: bool


class QGaussianParams(FrozenModel):
    """Validated parameters of N_q(m, sigma2) with its derived constants."""

    q: float = Field(lt=3.0)
    m: float = 0.0
    sigma2: float = Field(default=1.0, gt=0.0)

    @computed_field
    @property
    def beta(self) -> float:
        return 1.0 / (3.0 - self.q)

    @computed_field
    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @computed_field
    @property
    def c_q(self) -> float:
        return c_q(self.q)

    @computed_field
    @property
    def prefactor(self) -> float:
        """Density at the mode, a = sqrt(beta) / (sigma C_q)."""
        return math.sqrt(self.beta) / (self.sigma * self.c_q)

    @computed_field
    @property
    def half_width(self) -> float:
        """Distance from m to the support edge (inf for q >= 1)."""
        if self.q >= 1:
            return math.inf
        return self.sigma / math.sqrt((1.0 - self.q) * self.beta)

    @computed_field
    @property
    def support(self) -> tuple[float, float]:
        return (self.m - self.half_width, self.m + self.half_width)


class EscortMap(FrozenModel):
    """Parameters of the q-Gaussian proportional to a power of another one."""

    power: float = Field(gt=0.0)
    q_prime: float = Field(lt=3.0)
    m: float
    sigma2_prime: float = Field(gt=0.0)

    def target(self) -> QGaussianParams:
        return QGaussianParams(q=self.q_prime, m=self.m, sigma2=self.sigma2_prime)


class MomentReport(FrozenModel):
    """Closed form against oracle for one moment formula."""

    name: str
    closed_form: Optional[float] = None
    oracle: Optional[float] = None
    abs_err: Optional[float] = None
    rel_err: Optional[float] = None
    oracle_converged: bool
    error_estimate: Optional[float] = None


class LaplaceEval(FrozenModel):
    """One value of the q-Laplace transform."""

    theta: float
    value: float
    method: Literal["oracle", "closed_form"]
    converged: bool = True
    error_estimate: Optional[float] = None
    variant: Optional[Literal["plus", "minus"]] = None


class SignAdjudication(FrozenModel):
    """Which theta^2 sign of the closed-form q-Laplace transform matches the oracle."""

    certified: Literal["plus", "minus"]
    max_rel_err_plus: float
    max_rel_err_minus: float
    cases: int


class SampleStats(FrozenModel):
    """Sample mean, empirical variance (1/n) and the bias-corrected sigma^2."""

    n: int = Field(ge=2)
    mean: float
    s2: float = Field(ge=0.0)
    sigma2_hat: float = Field(ge=0.0)
    q: float


class ConfidenceInterval(FrozenModel):
    """Symmetric interval for m around the sample mean."""

    lo: float
    hi: float
    level: float = Field(gt=0.0, lt=1.0)
    method: Literal["clt", "q-quantile"]
    z: float
    standard_error: float


class BiasReport(FrozenModel):
    """Monte Carlo check of E(S^2) and of the unbiasedness of sigma2_hat."""

    q: float
    n: int
    reps: int
    sigma2: float
    seed: int
    workers: int
    expected_s2: float
    mean_s2: float
    se_s2: float
    z_s2: float
    mean_sigma2_hat: float
    se_sigma2_hat: float
    z_sigma2_hat: float
    gate: float
    passed: bool


class LlnRow(FrozenModel):
    n: int
    sample_mean: float
    deviation: float
    bound: float


class LlnReport(FrozenModel):
    """|sample mean - m| along a schedule of sample sizes."""

    q: float
    m: float
    seed: int
    rows: list[LlnRow]
    passed: bool


class CoverageReport(FrozenModel):
    """Fraction of replicated intervals that contain m."""

    q: float
    n: int
    reps: int
    level: float
    method: Literal["clt", "q-quantile"]
    seed: int
    coverage: float
    passed: bool
    band: float


class SumDiscrepancyReport(FrozenModel):
    """Sum of two ordinarily independent q-Gaussians against the q-Gaussian sum law."""

    q: float
    n: int
    seed: int
    statistic: str
    empirical: float
    predicted: float
    standard_error: float
    z: float
    discrepancy_detected: bool


class Adjudication(FrozenModel):
    """Printed statement against the form adopted in its place, both checked by an oracle.

    ``adopted`` is None when no corrected form is proposed and only the
    printed statement is tested.
    """

    name: str
    locus: str
    printed: str
    adopted: Optional[str] = None
    closed: Optional[float] = None
    oracle: Optional[float] = None
    printed_error: Optional[float] = None
    adopted_error: Optional[float] = None
    tolerance: float
    cases: int
    detail: Optional[str] = None

    @computed_field
    @property
    def printed_holds(self) -> bool:
        return self.printed_error is not None and self.printed_error <= self.tolerance

    @computed_field
    @property
    def adopted_holds(self) -> Optional[bool]:
        if self.adopted is None:
            return None
        return self.adopted_error is not None and self.adopted_error <= self.tolerance
