"""Domain models."""
from models.domain import (
    Adjudication,
    BiasReport,
    ConfidenceInterval,
    CoverageReport,
    EscortMap,
    LaplaceEval,
    LlnReport,
    LlnRow,
    MomentReport,
    QGaussianParams,
    QuadratureResult,
    SampleStats,
    SignAdjudication,
    SumDiscrepancyReport,
)

__all__ = [
    "Adjudication",
    "BiasReport",
    "ConfidenceInterval",
    "CoverageReport",
    "EscortMap",
    "LaplaceEval",
    "LlnReport",
    "LlnRow",
    "MomentReport",
    "QGaussianParams",
    "QuadratureResult",
    "SampleStats",
    "SignAdjudication",
    "SumDiscrepancyReport",
]
