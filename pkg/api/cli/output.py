"""Rendering of command results as text, JSON or CSV."""
import csv
import math
import sys
from typing import Iterable, Optional, TextIO

from pydantic import BaseModel

from api.schemas.verify import CSV_COLUMNS, VerifyReport
from core.config import settings

FORMATS = ("text", "json")


def number(value: Optional[float]) -> str:
    """Shortest round-trippable rendering at ``settings.output_digits`` significant digits."""
    if value is None:
        return "-"
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{settings.output_digits}g}"


def write_json(result: BaseModel, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    stream.write(result.model_dump_json(indent=2))
    stream.write("\n")


def write_fields(fields: Iterable[tuple[str, object]], stream: Optional[TextIO] = None) -> None:
    """One ``name: value`` line per field; floats go through ``number``."""
    stream = stream or sys.stdout
    for name, value in fields:
        if isinstance(value, float) or value is None:
            value = number(value)
        stream.write(f"{name}: {value}\n")


NUMERIC_COLUMNS = frozenset({"closed", "oracle", "abs_err", "rel_err"})


def write_verify_csv(report: VerifyReport, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for entry in report.entries:
        row = entry.model_dump()
        writer.writerow(
            [
                number(row[column]) if column in NUMERIC_COLUMNS else row[column]
                for column in CSV_COLUMNS
            ]
        )


def write_verify_text(report: VerifyReport, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    width = max((len(entry.name) for entry in report.entries), default=4)
    for entry in report.entries:
        stream.write(
            f"{entry.status:<17} {entry.name:<{width}}  rel_err={number(entry.rel_err)}"
            f"  tol={number(entry.tolerance)}\n"
        )
        if entry.status != "PASS" and entry.detail:
            stream.write(f"{'':<17} {'':<{width}}  {entry.detail}\n")
    counts = ", ".join(f"{status}={count}" for status, count in report.summary.items())
    stream.write(
        f"seed={report.seed} tol_scale={number(report.tol_scale)} version={report.version}\n"
    )
    stream.write(f"summary: {counts}\n")
