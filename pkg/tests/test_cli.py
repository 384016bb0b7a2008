"""Command-line pipeline behavior, exit codes and file formats."""

import json

import pytest

from trendgap.cli import main, series_from_api_payload

from conftest import FIXTURES


def run(*argv) -> int:
    return main(list(argv))


@pytest.fixture()
def motor_out(tmp_path):
    out = tmp_path / "out"
    code = run("diff", "--config", str(FIXTURES / "motor_config.json"), "--out", str(out))
    assert code == 0
    return out


class TestDiff:
    def test_writes_difference_csv(self, motor_out):
        text = (motor_out / "difference.csv").read_text()
        lines = text.splitlines()
        assert lines[0] == "date,value"
        assert lines[1].startswith("1980-01,")
        assert len(lines) == 1 + 372

    def test_missing_file_exits_two(self, tmp_path, capsys):
        config = tmp_path / "cfg.json"
        config.write_text(
            json.dumps(
                {
                    "series": {
                        "headline": {"path": "nope.csv"},
                        "component": {"path": "also_nope.csv"},
                    },
                    "out": str(tmp_path / "out"),
                }
            )
        )
        assert run("diff", "--config", str(config)) == 2
        err = capsys.readouterr().err
        assert "nope.csv" in err
        assert not (tmp_path / "out").exists()

    def test_identical_series_warns(self, tmp_path, capsys):
        src = FIXTURES / "cpi_all_items_sa.csv"
        code = run(
            "diff",
            "--headline", str(src), "--headline-id", "x",
            "--component", str(src), "--component-id", "x",
            "--out", str(tmp_path / "out"),
        )
        assert code == 0
        assert "identically zero" in capsys.readouterr().err


class TestFit:
    def test_prints_slopes_and_writes_model(self, motor_out, capsys):
        code = run("fit", "--config", str(FIXTURES / "motor_config.json"), "--out", str(motor_out))
        assert code == 0
        printed = capsys.readouterr().out
        assert "slope +4" in printed
        assert "slope -21" in printed
        doc = json.loads((motor_out / "trend_model.json").read_text())
        assert {"start", "end", "intercept_A", "slope_B", "r_squared", "residual_sigma"} == set(
            doc["segments"][0]
        )
        residuals = (motor_out / "residuals.csv").read_text().splitlines()
        assert residuals[0] == "date,value,predicted,residual,zone"

    def test_k_zero_single_segment(self, motor_out):
        config = {
            "segmentation": {"k": 0, "min_len": 60, "transition_halfwidth": 0},
            "out": str(motor_out),
        }
        cfg_path = motor_out / "k0.json"
        cfg_path.write_text(json.dumps(config))
        assert run("fit", "--config", str(cfg_path)) == 0
        doc = json.loads((motor_out / "trend_model.json").read_text())
        assert len(doc["segments"]) == 1
        assert doc["transitions"] == []

    def test_min_len_too_large_exits_two(self, motor_out, capsys):
        config = {
            "segmentation": {"k": 1, "min_len": 60},
            "out": str(motor_out),
        }
        cfg_path = motor_out / "short.json"
        cfg_path.write_text(json.dumps(config))
        assert run("fit", "--config", str(cfg_path), "--min-len", "400") == 2
        assert "too short" in capsys.readouterr().err


class TestForecast:
    def test_recovery_closes_at_ten_points_per_month(self, motor_out):
        assert run("fit", "--config", str(FIXTURES / "motor_config.json"), "--out", str(motor_out)) == 0
        assert run("forecast", "--config", str(FIXTURES / "motor_config.json"), "--out", str(motor_out)) == 0
        lines = (motor_out / "forecast.csv").read_text().splitlines()
        assert lines[0] == "date,predicted,low,high"
        values = [float(line.split(",")[1]) for line in lines[1:]]
        doc = json.loads((motor_out / "forecast.json").read_text())
        assert doc["mode"] == "return-to-trend+along-trend"
        # compare to the drawn recovery line: -50 at 2009-01 rising 125/7 a year
        trend_at = lambda k: -50.0 + (125.0 / 7.0) * (2 + k) / 12.0
        deviations = [v - trend_at(k) for k, v in enumerate(values[:9], start=1)]
        steps = [a - b for a, b in zip(deviations, deviations[1:])]
        assert all(abs(s - steps[0]) < 1e-9 for s in steps)
        assert 9.0 <= steps[0] <= 11.0
        assert abs(deviations[-1]) < 1e-9

    def test_horizon_zero_exits_two(self, motor_out, capsys):
        config = json.loads((FIXTURES / "motor_config.json").read_text())
        config["forecast"]["horizon"] = 0
        for role in config["series"].values():
            role["path"] = str(FIXTURES / role["path"])
        cfg_path = motor_out / "h0.json"
        cfg_path.write_text(json.dumps(config))
        assert run("forecast", "--config", str(cfg_path), "--out", str(motor_out)) == 2
        assert "horizon" in capsys.readouterr().err


class TestTranslateAndBacktest:
    @pytest.fixture()
    def crude_out(self, tmp_path):
        out = tmp_path / "crude"
        cfg = str(FIXTURES / "crude_config.json")
        for cmd in ("diff", "fit", "forecast"):
            assert run(cmd, "--config", cfg, "--out", str(out)) == 0
        return out

    def test_heuristic_prices_written(self, crude_out):
        lines = (crude_out / "forecast_prices.csv").read_text().splitlines()
        assert lines[0] == "date,price_usd,low,high"
        last = lines[-1].split(",")
        assert last[0] == "2016-01"
        assert abs(float(last[1]) - 30.0) <= 5.0

    def test_translate_with_fitted_calibration(self, crude_out):
        cfg = str(FIXTURES / "crude_config.json")
        assert run("translate", "--config", cfg, "--out", str(crude_out)) == 0
        lines = (crude_out / "translated_prices.csv").read_text().splitlines()
        assert lines[0] == "date,price_usd,low,high"
        assert abs(float(lines[-1].split(",")[1]) - 30.0) <= 5.0

    def test_backtest_reports(self, crude_out, capsys):
        cfg = str(FIXTURES / "crude_config.json")
        assert run("backtest", "--config", cfg, "--out", str(crude_out)) == 0
        lines = (crude_out / "backtest.csv").read_text().splitlines()
        assert lines[0] == "origin,n,mae,rmse,bias,hit_rate"
        assert lines[1].startswith("2009-01,12,")

    def test_origin_after_series_end_exits_two(self, crude_out, capsys):
        config = json.loads((FIXTURES / "crude_config.json").read_text())
        for role in config["series"].values():
            role["path"] = str(FIXTURES / role["path"])
        config["backtest"]["origins"] = ["2010-10"]
        cfg_path = crude_out / "late.json"
        cfg_path.write_text(json.dumps(config))
        assert run("backtest", "--config", str(cfg_path), "--out", str(crude_out)) == 2
        assert "fewer than" in capsys.readouterr().err


class TestFetchPayload:
    def test_parses_v2_payload(self):
        payload = {
            "status": "REQUEST_SUCCEEDED",
            "Results": {
                "series": [
                    {
                        "seriesID": "CUSR0000SA0",
                        "data": [
                            {"year": "2009", "period": "M13", "value": "214.0"},
                            {"year": "2009", "period": "M02", "value": "212.7"},
                            {"year": "2009", "period": "M01", "value": "211.9"},
                        ],
                    }
                ]
            },
        }
        series = series_from_api_payload(payload, "CUSR0000SA0")
        assert series.stamps == (
            series.stamps[0],
            series.stamps[0].add_months(1),
        )
        assert series.values == (211.9, 212.7)

    def test_failed_status_raises(self):
        with pytest.raises(ValueError, match="failed"):
            series_from_api_payload({"status": "REQUEST_NOT_PROCESSED"}, "X")

    def test_unknown_series_raises(self):
        payload = {"status": "REQUEST_SUCCEEDED", "Results": {"series": []}}
        with pytest.raises(ValueError, match="not in API response"):
            series_from_api_payload(payload, "X")
