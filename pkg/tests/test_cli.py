import csv
import io
import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from royroot import ConvergenceError
from royroot.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def parse_jsonl(text):
    return [json.loads(line) for line in text.strip().splitlines()]


class TestCdfCommand:
    def test_uniform_point(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "1", "--m", "0", "--n", "0",
                                   "--theta", "0.25"])
        assert res.exit_code == 0
        row = parse_csv(res.stdout)[0]
        assert float(row["value"]) == pytest.approx(0.25, abs=1e-12)
        assert row["method"] == "exact"
        assert row["field"] == "real"

    def test_published_exact_point(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "5", "--m", "-0.5", "--n", "1000",
                                   "--theta", "0.008501"])
        assert res.exit_code == 0
        row = parse_csv(res.stdout)[0]
        assert float(row["value"]) == pytest.approx(0.80, abs=1e-4)
        assert float(row["normalization_residual"]) <= 1e-8

    def test_manova_entry_matches_beta_entry(self, runner):
        a = runner.invoke(main, ["cdf", "--p", "5", "--mdim", "206", "--ndim", "5",
                                 "--theta", "0.5"])
        b = runner.invoke(main, ["cdf", "--s", "5", "--m", "-0.5", "--n", "100",
                                 "--theta", "0.5"])
        assert a.exit_code == 0 and b.exit_code == 0
        va = float(parse_csv(a.stdout)[0]["value"])
        vb = float(parse_csv(b.stdout)[0]["value"])
        assert va == vb

    def test_both_methods_two_records(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "5", "--m", "-0.5", "--n", "100",
                                   "--theta", "0.3", "--method", "both",
                                   "--format", "jsonl"])
        assert res.exit_code == 0
        rows = parse_jsonl(res.stdout)
        assert [r["method"] for r in rows] == ["exact", "approx"]
        assert rows[1]["normalization_residual"] is None

    def test_jsonl_schema(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "2", "--m", "0", "--n", "0",
                                   "--theta", "0.5", "--format", "jsonl"])
        row = parse_jsonl(res.stdout)[0]
        assert set(row) == {"s", "m", "n", "field", "method", "theta", "alpha",
                            "value", "normalization_residual", "elapsed_seconds",
                            "warnings"}

    def test_both_param_forms_rejected(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "2", "--m", "0", "--n", "0",
                                   "--p", "2", "--mdim", "4", "--ndim", "4",
                                   "--theta", "0.5"])
        assert res.exit_code == 2
        assert "error" in json.loads(res.stderr.strip().splitlines()[-1])

    def test_incomplete_params_rejected(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "2", "--m", "0", "--theta", "0.5"])
        assert res.exit_code == 2

    def test_invalid_domain_exit_2(self, runner):
        res = runner.invoke(main, ["cdf", "--s", "2", "--m", "-1.5", "--n", "0",
                                   "--theta", "0.5"])
        assert res.exit_code == 2


class TestQuantileCommand:
    def test_uniform_median(self, runner):
        res = runner.invoke(main, ["quantile", "--s", "1", "--m", "0", "--n", "0",
                                   "--alpha", "0.5"])
        assert res.exit_code == 0
        assert float(parse_csv(res.stdout)[0]["value"]) == pytest.approx(0.5, abs=1e-9)

    def test_approx_method(self, runner):
        res = runner.invoke(main, ["quantile", "--s", "5", "--m", "-0.5", "--n", "1000",
                                   "--alpha", "0.8", "--method", "approx"])
        assert res.exit_code == 0
        assert float(parse_csv(res.stdout)[0]["value"]) == pytest.approx(0.008609, abs=1e-5)

    def test_approx_method_large_case(self, runner):
        res = runner.invoke(main, ["quantile", "--s", "200", "--m", "-0.5", "--n", "149.5",
                                   "--alpha", "0.99", "--method", "approx"])
        assert res.exit_code == 0
        assert float(parse_csv(res.stdout)[0]["value"]) == pytest.approx(0.827761, abs=1e-5)

    def test_round_trip_through_cdf(self, runner):
        q = runner.invoke(main, ["quantile", "--s", "3", "--m", "-0.5", "--n", "1.5",
                                 "--alpha", "0.9", "--format", "jsonl"])
        theta = parse_jsonl(q.stdout)[0]["value"]
        c = runner.invoke(main, ["cdf", "--s", "3", "--m", "-0.5", "--n", "1.5",
                                 "--theta", str(theta), "--format", "jsonl"])
        assert parse_jsonl(c.stdout)[0]["value"] == pytest.approx(0.9, abs=1e-6)

    def test_numerical_failure_exit_3(self, runner, monkeypatch):
        import royroot.cli as climod

        def boom(params, alpha):
            raise ConvergenceError("synthetic")

        monkeypatch.setattr(climod, "exact_quantile", boom)
        res = runner.invoke(main, ["quantile", "--s", "1", "--m", "0", "--n", "0",
                                   "--alpha", "0.5"])
        assert res.exit_code == 3
        err = json.loads(res.stderr.strip().splitlines()[-1])
        assert err["error"] == "ConvergenceError"


class TestTableCommand:
    def test_single_cell_matches_quantile(self, runner):
        t = runner.invoke(main, ["table", "--s", "2", "--m", "0.5", "--n", "1.5",
                                 "--alpha", "0.95"])
        q = runner.invoke(main, ["quantile", "--s", "2", "--m", "0.5", "--n", "1.5",
                                 "--alpha", "0.95"])
        assert t.exit_code == 0
        tv = float(parse_csv(t.stdout)[0]["value"])
        qv = float(parse_csv(q.stdout)[0]["value"])
        assert tv == qv

    def test_grid_shape(self, runner):
        res = runner.invoke(main, ["table", "--s", "1,2", "--m", "-0.5,0", "--n", "1",
                                   "--alpha", "0.5,0.9", "--method", "both"])
        assert res.exit_code == 0
        rows = parse_csv(res.stdout)
        assert len(rows) == 2 * 2 * 1 * 2 * 2

    def test_alpha_must_increase(self, runner):
        res = runner.invoke(main, ["table", "--s", "1", "--m", "0", "--n", "0",
                                   "--alpha", "0.9,0.5"])
        assert res.exit_code == 2

    def test_writes_file(self, runner, tmp_path):
        out = tmp_path / "table.csv"
        res = runner.invoke(main, ["table", "--s", "1", "--m", "0", "--n", "0",
                                   "--alpha", "0.5", "--out", str(out)])
        assert res.exit_code == 0
        assert parse_csv(out.read_text())[0]["alpha"] == "0.5"


class TestCurveCommand:
    def test_endpoints_and_monotonicity(self, runner):
        res = runner.invoke(main, ["curve", "--s", "2", "--m", "0", "--n", "0",
                                   "--grid-size", "21", "--method", "both"])
        assert res.exit_code == 0
        rows = parse_csv(res.stdout)
        assert len(rows) == 21
        assert float(rows[0]["theta"]) == 0.0
        assert float(rows[0]["cdf_exact"]) == 0.0
        assert float(rows[0]["cdf_approx"]) == 0.0
        assert float(rows[-1]["theta"]) == 1.0
        assert float(rows[-1]["cdf_exact"]) == 1.0
        assert float(rows[-1]["cdf_approx"]) == 1.0
        ex = [float(r["cdf_exact"]) for r in rows]
        ap = [float(r["cdf_approx"]) for r in rows]
        assert all(b >= a for a, b in zip(ex, ex[1:]))
        assert all(b >= a for a, b in zip(ap, ap[1:]))

    def test_gap_summary_on_stderr(self, runner):
        res = runner.invoke(main, ["curve", "--s", "2", "--m", "0", "--n", "0",
                                   "--grid-size", "11", "--method", "both"])
        summary = json.loads(res.stderr.strip().splitlines()[-1])
        assert "max_abs_gap" in summary
        assert 0.0 <= summary["max_abs_gap"] <= 1.0

    def test_single_method_leaves_other_column_empty(self, runner):
        res = runner.invoke(main, ["curve", "--s", "2", "--m", "0", "--n", "0",
                                   "--grid-size", "5", "--method", "exact"])
        assert res.exit_code == 0
        rows = parse_csv(res.stdout)
        assert all(r["cdf_approx"] == "" for r in rows)
        assert all(r["cdf_exact"] != "" for r in rows)

    def test_complex_approx_rejected(self, runner):
        res = runner.invoke(main, ["curve", "--s", "2", "--m", "1", "--n", "2",
                                   "--complex", "--grid-size", "5", "--method", "both"])
        assert res.exit_code == 2

    def test_plot_file_rendered(self, runner, tmp_path):
        png = tmp_path / "curve.png"
        out = tmp_path / "curve.csv"
        res = runner.invoke(main, ["curve", "--s", "2", "--m", "0", "--n", "0",
                                   "--grid-size", "11", "--plot", str(png),
                                   "--out", str(out)])
        assert res.exit_code == 0
        assert png.exists() and png.stat().st_size > 1000
        assert out.exists()


class TestMcCommand:
    def test_deterministic_and_summarized(self, runner, tmp_path):
        args = ["mc", "--p", "2", "--mdim", "6", "--ndim", "4",
                "--replicates", "400", "--seed", "7"]
        a = runner.invoke(main, args)
        b = runner.invoke(main, args)
        assert a.exit_code == 0
        assert a.stdout == b.stdout
        summary = json.loads(a.stderr.strip().splitlines()[-1])
        assert summary["replicates"] == 400
        assert 0.0 <= summary["max_decile_deviation"] <= 1.0

    def test_beta_entry_requires_integral_dims(self, runner):
        res = runner.invoke(main, ["mc", "--s", "2", "--m", "0.3", "--n", "1",
                                   "--replicates", "10"])
        assert res.exit_code == 2

    def test_plot_rendered(self, runner, tmp_path):
        png = tmp_path / "mc.png"
        res = runner.invoke(main, ["mc", "--s", "2", "--m", "0.5", "--n", "1.5",
                                   "--replicates", "200", "--seed", "1",
                                   "--plot", str(png), "--out", str(tmp_path / "mc.csv")])
        assert res.exit_code == 0
        assert png.exists() and png.stat().st_size > 1000


class TestBenchCommand:
    def test_trivial_case_report(self, runner):
        res = runner.invoke(main, ["bench", "--cases", "s1", "--format", "jsonl"])
        assert res.exit_code == 0
        row = parse_jsonl(res.stdout)[0]
        assert row["case"] == "s1"
        assert row["eval_seconds"] < 0.1
        assert row["within_target"] is True

    def test_unknown_case(self, runner):
        res = runner.invoke(main, ["bench", "--cases", "nope"])
        assert res.exit_code == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "royroot", "cdf", "--s", "1", "--m", "0", "--n", "0",
         "--theta", "0.25"],
        capture_output=True, text=True, timeout=120,
    )
    assert res.returncode == 0
    assert "0.25" in res.stdout
