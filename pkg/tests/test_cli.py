"""Tests for the qstat command line."""
import io
import json

import pytest

from api.cli import cmd_verify
from api.schemas.verify import VerifyEntry, VerifyReport
from main import run


def output(capsys) -> str:
    return capsys.readouterr().out


class TestEval:
    def test_normal_density(self, capsys):
        assert run(["eval", "--q", "1", "--m", "0", "--sigma2", "1", "--x", "0"]) == 0
        assert output(capsys).strip() == "0.398942280401433"

    def test_cauchy_cdf(self, capsys):
        assert run(["eval", "--q", "2", "--x", "1", "--what", "cdf"]) == 0
        assert float(output(capsys)) == pytest.approx(0.75, abs=1e-9)

    def test_quantile_json(self, capsys):
        args = ["eval", "--q", "1", "--x", "0.975", "--what", "quantile", "--format", "json"]
        assert run(args) == 0
        data = json.loads(output(capsys))
        assert data["what"] == "quantile"
        assert data["value"] == pytest.approx(1.959963984540054, abs=1e-9)
        assert data["params"]["q"] == 1.0

    def test_q_out_of_range(self, capsys):
        assert run(["eval", "--q", "3", "--x", "0"]) == 2
        assert "q must be < 3" in capsys.readouterr().err

    def test_bad_scale(self, capsys):
        assert run(["eval", "--q", "1", "--sigma2", "0", "--x", "0"]) == 2
        assert "sigma2 must be > 0" in capsys.readouterr().err


class TestMoments:
    def test_variance_report(self, capsys):
        assert run(["moments", "--q", "1.2", "--order", "2", "--kind", "central"]) == 0
        fields = dict(line.split(": ", 1) for line in output(capsys).splitlines())
        assert float(fields["closed_form"]) == pytest.approx(1.8 / 1.4)
        assert float(fields["rel_err"]) < 1e-7

    def test_raw_second_moment_heavy_tail(self, capsys):
        assert run(["moments", "--q", "1.5", "--order", "2", "--kind", "raw"]) == 0
        fields = dict(line.split(": ", 1) for line in output(capsys).splitlines())
        assert float(fields["closed_form"]) == pytest.approx(3.0)
        assert float(fields["oracle"]) == pytest.approx(3.0, rel=1e-6)

    def test_divergent_moment_exits_3(self, capsys):
        assert run(["moments", "--q", "1.8", "--order", "2", "--kind", "central"]) == 3
        assert "did not converge" in capsys.readouterr().err

    def test_json(self, capsys):
        args = ["moments", "--q", "1.5", "--order", "2", "--kind", "normalized", "--format", "json"]
        assert run(args) == 0
        data = json.loads(output(capsys))
        assert data["power"] == 2.0
        assert data["report"]["closed_form"] == pytest.approx(0.6, rel=1e-12)


class TestLaplace:
    def test_classical(self, capsys):
        assert run(["laplace", "--q", "1", "--theta", "1"]) == 0
        assert output(capsys).strip() == "1.64872127070013"

    def test_oracle_matches_closed_form(self, capsys):
        assert run(["laplace", "--q", "1.3", "--theta", "0.05", "--method", "oracle"]) == 0
        oracle = float(output(capsys))
        assert run(["laplace", "--q", "1.3", "--theta", "0.05"]) == 0
        assert float(output(capsys)) == pytest.approx(oracle, rel=1e-7)

    def test_compact_support_is_rejected(self, capsys):
        assert run(["laplace", "--q", "0.5", "--theta", "0.1"]) == 2
        assert "1 <= q < 3" in capsys.readouterr().err


class TestSample:
    def test_deterministic(self, capsys):
        assert run(["sample", "--q", "1.5", "--n", "5", "--seed", "7"]) == 0
        first = output(capsys)
        assert run(["sample", "--q", "1.5", "--n", "5", "--seed", "7"]) == 0
        assert output(capsys) == first
        assert len(first.splitlines()) == 5

    def test_default_seed(self, capsys, fixed_seed):
        assert run(["sample", "--q", "0.5", "--n", "3", "--format", "json"]) == 0
        data = json.loads(output(capsys))
        assert data["seed"] == fixed_seed
        assert len(data["values"]) == 3


class TestEstimate:
    def test_from_file(self, capsys, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text("1\n2\n\n3\n4\n")
        assert run(["estimate", "--q", "1.2", "--file", str(path), "--sigma2-known", "1"]) == 0
        fields = dict(line.split(": ", 1) for line in output(capsys).splitlines())
        assert fields["n"] == "4"
        assert float(fields["mean"]) == pytest.approx(2.5)
        assert float(fields["ci_lo"]) < 2.5 < float(fields["ci_hi"])
        assert fields["ci_method"] == "clt"
        assert fields["shape"] in ("leptokurtic", "platykurtic", "mesokurtic")

    def test_from_stdin_json(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("0.5\n-0.5\n1.5\n"))
        assert run(["estimate", "--q", "1.0", "--format", "json"]) == 0
        data = json.loads(output(capsys))
        assert data["stats"]["n"] == 3
        assert data["interval"] is None

    def test_no_kurtosis_past_its_window(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("0.5\n-0.5\n1.5\n"))
        assert run(["estimate", "--q", "1.5", "--format", "json"]) == 0
        assert json.loads(output(capsys))["kurtosis"] is None

    def test_bad_token(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1.0\nabc\n"))
        assert run(["estimate", "--q", "1.0"]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_too_few_values(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1.0\n"))
        assert run(["estimate", "--q", "1.0"]) == 2

    @pytest.mark.parametrize("token", ["nan", "inf", "-Infinity"])
    def test_non_finite_value(self, capsys, monkeypatch, token):
        monkeypatch.setattr("sys.stdin", io.StringIO(f"1.0\n2.0\n{token}\n"))
        assert run(["estimate", "--q", "1.0"]) == 2
        assert "line 3" in capsys.readouterr().err


class TestVerify:
    @pytest.fixture
    def failing_report(self, monkeypatch):
        report = VerifyReport(
            entries=[
                VerifyEntry(name="ok", locus="a", closed=1.0, oracle=1.0, status="PASS"),
                VerifyEntry(name="bad", locus="b", closed=1.0, oracle=2.0, status="FAIL"),
            ],
            seed=1,
            tol_scale=1.0,
            version="0.1.0",
        )
        monkeypatch.setattr(cmd_verify.VerificationService, "run", lambda self: report)
        return report

    def test_failure_exits_1(self, capsys, failing_report):
        assert run(["verify", "--no-monte-carlo"]) == 1
        captured = capsys.readouterr()
        assert "summary: PASS=1, FAIL=1, SKIPPED-divergent=0, REFUTED=0" in captured.out
        assert "1 verification check(s) failed" in captured.err

    def test_csv(self, capsys, failing_report):
        run(["verify", "--format", "csv"])
        lines = output(capsys).splitlines()
        assert lines[0] == "name,locus,closed,oracle,abs_err,rel_err,status"
        assert lines[2] == "bad,b,1,2,-,-,FAIL"

    def test_bad_tol_scale(self, capsys):
        assert run(["verify", "--tol-scale", "0"]) == 2

    def test_bad_q_grid(self):
        with pytest.raises(SystemExit):
            run(["verify", "--q-grid", "1.0,x"])


def test_command_is_required():
    with pytest.raises(SystemExit):
        run([])
