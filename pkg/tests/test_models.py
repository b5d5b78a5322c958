"""Tests for domain models and report schemas."""
import json
import math

import pytest
from pydantic import ValidationError

from api.schemas.verify import VerifyEntry, VerifyReport
from models.domain import Adjudication, QGaussianParams
from services.qgaussian import make_params


def test_params_are_frozen():
    p = make_params(1.5)
    with pytest.raises(ValidationError):
        p.q = 2.0


def test_params_json_round_trip():
    p = make_params(0.5, 0.2, 3.0)
    data = json.loads(p.model_dump_json())
    assert data["beta"] == pytest.approx(1.0 / 2.5)
    assert data["support"] == pytest.approx(list(p.support))
    assert QGaussianParams.model_validate_json(p.model_dump_json()) == p


def test_params_validation():
    with pytest.raises(ValidationError):
        QGaussianParams(q=3.0)
    with pytest.raises(ValidationError):
        QGaussianParams(q=1.0, sigma2=0.0)


def test_adjudication_verdicts():
    refuted = Adjudication(
        name="x", locus="y", printed="p", printed_error=1.0, tolerance=1e-6, cases=1
    )
    assert not refuted.printed_holds
    assert refuted.adopted_holds is None

    corrected = refuted.model_copy(update={"adopted": "a", "adopted_error": 0.0})
    assert corrected.adopted_holds


def test_report_summary_and_json():
    report = VerifyReport(
        entries=[
            VerifyEntry(name="a", locus="l", rel_err=math.inf, status="FAIL"),
            VerifyEntry(name="b", locus="l", status="SKIPPED-divergent"),
            VerifyEntry(name="c", locus="l", status="REFUTED"),
        ],
        seed=7,
        tol_scale=1.0,
        version="0.1.0",
    )
    assert report.summary == {"PASS": 0, "FAIL": 1, "SKIPPED-divergent": 1, "REFUTED": 1}
    assert report.failures == 1
    data = json.loads(report.model_dump_json())
    assert data["summary"]["FAIL"] == 1
    assert data["entries"][0]["rel_err"] == math.inf


def test_unknown_status_is_rejected():
    with pytest.raises(ValidationError):
        VerifyEntry(name="a", locus="l", status="MAYBE")


def test_infinite_support_serializes_as_constants():
    data = json.loads(make_params(1.5).model_dump_json())
    assert data["half_width"] == math.inf
    assert data["support"] == [-math.inf, math.inf]
