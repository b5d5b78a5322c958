"""Output schemas of the single-shot CLI commands."""
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from models.domain import (
    ConfidenceInterval,
    LaplaceEval,
    MomentReport,
    QGaussianParams,
    SampleStats,
)


class CommandResult(BaseModel):
    """Base schema for command output."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")


class EvalResult(CommandResult):
    """Schema for eval output."""

    params: QGaussianParams
    what: Literal["pdf", "cdf", "quantile"]
    x: float
    value: float


class MomentResult(CommandResult):
    """Schema for moments output."""

    params: QGaussianParams
    order: int
    kind: Literal["raw", "central", "unnormalized", "normalized"]
    power: float
    report: MomentReport


class LaplaceResult(CommandResult):
    """Schema for laplace output."""

    params: QGaussianParams
    evaluation: LaplaceEval


class SampleResult(CommandResult):
    """Schema for sample output."""

    params: QGaussianParams
    seed: int
    values: list[float]


class KurtosisSummary(CommandResult):
    sample_kurtosis: float
    reference: float
    excess: float
    shape: Literal["leptokurtic", "platykurtic", "mesokurtic"]


class EstimateResult(CommandResult):
    """Schema for estimate output."""

    stats: SampleStats
    interval: Optional[ConfidenceInterval] = None
    kurtosis: Optional[KurtosisSummary] = None
