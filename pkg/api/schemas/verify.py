"""Verification report schemas."""
from collections import Counter
from typing import Literal, Optional, get_args

from pydantic import BaseModel, ConfigDict, computed_field

Status = Literal["PASS", "FAIL", "SKIPPED-divergent", "REFUTED"]

CSV_COLUMNS = ("name", "locus", "closed", "oracle", "abs_err", "rel_err", "status")


class VerifyEntry(BaseModel):
    """One closed-form-versus-oracle check of the verify suite."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    name: str
    locus: str
    closed: Optional[float] = None
    oracle: Optional[float] = None
    abs_err: Optional[float] = None
    rel_err: Optional[float] = None
    tolerance: Optional[float] = None
    status: Status
    detail: Optional[str] = None


class VerifyReport(BaseModel):
    """Schema for a verify run."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    entries: list[VerifyEntry]
    seed: int
    tol_scale: float
    q_grid: Optional[list[float]] = None
    version: str

    @computed_field
    @property
    def summary(self) -> dict[str, int]:
        counts = Counter(entry.status for entry in self.entries)
        return {status: counts.get(status, 0) for status in get_args(Status)}

    @property
    def failures(self) -> int:
        return sum(1 for entry in self.entries if entry.status == "FAIL")
