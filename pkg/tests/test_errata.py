"""Tests for the adjudication of printed formulas."""
import pytest

from services import errata


@pytest.mark.parametrize(
    "check", [errata.qprod_exponent, errata.qneg_sign, errata.exp_law_operators]
)
def test_algebra_corrections(check):
    verdict = check(seed=21)
    assert verdict.adopted_holds
    assert not verdict.printed_holds
    assert verdict.cases > 0


def test_qprod_exponent_witness():
    verdict = errata.qprod_exponent()
    assert verdict.closed == pytest.approx(verdict.oracle, rel=1e-12)


def test_laplace_sign():
    verdict = errata.laplace_sign()
    assert verdict.adopted == "plus"
    assert verdict.adopted_holds
    assert not verdict.printed_holds
    assert verdict.detail == "certified variant: plus"


def test_normalized_kurtosis_window():
    verdict = errata.normalized_kurtosis_window()
    assert verdict.adopted == "3/4 < q < 3"
    assert verdict.adopted_holds
    assert verdict.printed_error is None
    assert not verdict.printed_holds
    assert verdict.closed == pytest.approx(verdict.oracle, rel=1e-7)


def test_q_independence_is_refuted():
    verdict = errata.q_independence()
    assert verdict.adopted is None
    assert verdict.adopted_holds is None
    assert not verdict.printed_holds
    assert verdict.printed_error > verdict.tolerance


def test_adjudicate_all_scales_tolerances():
    verdicts = errata.adjudicate_all(tol_scale=2.0, seed=3)
    assert [v.name for v in verdicts] == [
        "qprod-exponent",
        "qneg-sign",
        "exp-law-operators",
        "laplace-sign",
        "normalized-kurtosis-window",
        "q-independence",
    ]
    assert verdicts[0].tolerance == pytest.approx(5e-13)
    assert verdicts[3].tolerance == pytest.approx(5e-8)
