"""Command-line pipeline: diff, fit, forecast, translate, backtest, fetch.

Each subcommand reads a JSON config (flags win over config values), validates
everything up front, computes its outputs in memory and only then writes
files, so a failing run leaves no partial artifacts. Exit codes: 0 success,
1 internal error, 2 invalid input or config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .backtest import BacktestReport, reports_to_csv, rolling_backtest
from .fitting import LinearSegment, TrendModel, build_trend_model, detect_breakpoints, fit_ols
from .forecast import (
    ALONG_TREND,
    PENDULUM,
    RETURN_TO_TREND,
    Forecast,
    chain_forecasts,
    endpoint_trend,
    forecast_along_trend,
    forecast_pendulum,
    forecast_return_to_trend,
    mirror_trend,
)
from .prices import (
    CRUDE_OIL_HEURISTIC,
    calibrate_price,
    extrapolate_headline,
    index_to_price,
    parse_calibration_pairs_csv,
    trailing_growth_rate,
)
from .series import (
    DifferenceSeries,
    MonthlySeries,
    MonthStamp,
    difference,
    parse_series_csv,
    series_to_csv,
)

DEFAULT_API_BASE = "https://api.bls.gov/publicAPI/v2"


class ConfigError(ValueError):
    """The run configuration is incomplete or inconsistent."""


def _read_text(path: Path) -> str:
    if not path.exists():
        raise ConfigError(f"file not found: {path}")
    return path.read_text(encoding="utf-8")


def _load_config(args) -> dict:
    if args.config is None:
        return {}
    doc = json.loads(_read_text(Path(args.config)))
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def _out_dir(args, config: dict) -> Path:
    out = args.out or config.get("out")
    if not out:
        raise ConfigError("no output directory: pass --out or set 'out' in the config")
    return Path(out)


def _stamp(token: str, what: str) -> MonthStamp:
    try:
        return MonthStamp.parse(token)
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from None


def _load_series(entry: dict, role: str, base: Path):
    if not isinstance(entry, dict) or "path" not in entry:
        raise ConfigError(f"series.{role} needs a 'path'")
    path = Path(entry["path"])
    if not path.is_absolute():
        path = base / path
    text = _read_text(path)
    series_id = entry.get("id", path.stem)
    return parse_series_csv(text, series_id, base_note=entry.get("base_note", ""))


def _write_all(outputs: dict[Path, str]) -> None:
    for path, text in outputs.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _difference_from_config(args, config: dict) -> DifferenceSeries:
    out = _out_dir(args, config)
    candidate = getattr(args, "difference_csv", None) or config.get("difference_csv")
    path = Path(candidate) if candidate else out / "difference.csv"
    text = _read_text(path)
    parsed = parse_series_csv(text, "difference")
    return DifferenceSeries("minuend", "subtrahend", parsed.observations)


# ---------------------------------------------------------------- subcommands


def cmd_diff(args) -> int:
    config = _load_config(args)
    base = Path(args.config).parent if args.config else Path.cwd()
    series_cfg = dict(config.get("series", {}))
    if args.headline:
        series_cfg["headline"] = {"path": args.headline, "id": args.headline_id}
    if args.component:
        series_cfg["component"] = {"path": args.component, "id": args.component_id}
    for role in ("headline", "component"):
        if role not in series_cfg:
            raise ConfigError(f"series.{role} missing from config and flags")
        if series_cfg[role].get("id") is None:
            series_cfg[role].pop("id", None)

    headline = _load_series(series_cfg["headline"], "headline", base)
    component = _load_series(series_cfg["component"], "component", base)
    for series in (headline, component):
        gaps = series.missing_months()
        if gaps:
            print(
                f"warning: {series.series_id} is missing {len(gaps)} months "
                f"inside its span (first: {gaps[0]})",
                file=sys.stderr,
            )
    diff = difference(headline, component)
    out = _out_dir(args, config)

    _write_all({out / "difference.csv": series_to_csv(diff)})
    if all(v == 0.0 for v in diff.values):
        print("warning: difference is identically zero", file=sys.stderr)
    print(
        f"difference {diff.minuend_id} - {diff.subtrahend_id}: "
        f"{len(diff)} months, {diff.start}..{diff.end}"
    )
    return 0


def _segmentation_params(config: dict) -> dict:
    seg = config.get("segmentation")
    if not isinstance(seg, dict):
        raise ConfigError("config needs a 'segmentation' object")
    return seg


def cmd_fit(args) -> int:
    config = _load_config(args)
    seg = _segmentation_params(config)
    diff = _difference_from_config(args, config)

    k = int(args.k if args.k is not None else seg.get("k", 1))
    min_len = int(args.min_len if args.min_len is not None else seg.get("min_len", 60))
    halfwidth = int(seg.get("transition_halfwidth", 12))
    detect_end = seg.get("detect_end")
    tail_start = seg.get("tail_start")

    fit_start = seg.get("fit_start")
    fit_end = seg.get("fit_end")
    if fit_start or fit_end:
        lo = _stamp(fit_start, "fit_start") if fit_start else diff.start
        hi = _stamp(fit_end, "fit_end") if fit_end else diff.end
        diff = diff.restrict(lo, hi)

    detect_diff = diff
    if detect_end is not None:
        detect_diff = diff.restrict(diff.start, _stamp(detect_end, "detect_end"))
    breakpoints = detect_breakpoints(detect_diff, k, min_len)
    model = build_trend_model(
        diff,
        breakpoints,
        halfwidth,
        tail_start=_stamp(tail_start, "tail_start") if tail_start else None,
    )

    out = _out_dir(args, config)
    _write_all(
        {
            out / "trend_model.json": model.to_json(),
            out / "residuals.csv": _residuals_csv(diff, model),
        }
    )
    for i, seg_fit in enumerate(model.segments):
        print(
            f"segment {i}: {seg_fit.start}..{seg_fit.end}  "
            f"slope {seg_fit.slope:+.2f}/yr  R^2 {seg_fit.r_squared:.3f}"
        )
    for w in model.transitions:
        print(f"transition: {w.start}..{w.end} ({w.duration_months} months)")
    return 0


def _residuals_csv(diff: DifferenceSeries, model: TrendModel) -> str:
    lines = ["date,value,predicted,residual,zone"]
    for stamp, value in diff.observations:
        segment = model.segment_at(stamp)
        if segment is not None:
            zone = f"trend-{model.segments.index(segment)}"
        elif model.transition_at(stamp) is not None:
            lines.append(f"{stamp},{value!r},,,transition")
            continue
        else:
            segment = model.nearest_segment(stamp)
            zone = "extrapolation"
        predicted = segment.predicted(stamp)
        lines.append(f"{stamp},{value!r},{predicted!r},{value - predicted!r},{zone}")
    return "\n".join(lines) + "\n"


def _trend_from_config(
    trend_cfg: dict, model: TrendModel | None, diff: DifferenceSeries
) -> LinearSegment:
    kind = trend_cfg.get("kind")
    if kind == "endpoint":
        s = trend_cfg["start"]
        e = trend_cfg["end"]
        return endpoint_trend(
            (_stamp(s[0], "trend.start"), float(s[1])),
            (_stamp(e[0], "trend.end"), float(e[1])),
        )
    if kind == "fit":
        window = (
            _stamp(trend_cfg["start"], "trend.start"),
            _stamp(trend_cfg["end"], "trend.end"),
        )
        return fit_ols(diff, window)
    if kind == "segment":
        if model is None:
            raise ConfigError("trend.kind 'segment' needs a fitted trend model")
        index = int(trend_cfg.get("index", -1))
        try:
            return model.segments[index]
        except IndexError:
            raise ConfigError(f"trend.index {index} out of range") from None
    if kind == "mirror":
        if model is None:
            raise ConfigError("trend.kind 'mirror' needs a fitted trend model")
        prev = model.segments[int(trend_cfg.get("segment_index", -1))]
        pivot = trend_cfg["pivot"]
        return mirror_trend(
            prev,
            (_stamp(pivot[0], "trend.pivot"), float(pivot[1])),
            int(trend_cfg.get("duration", 84)),
        )
    raise ConfigError(f"unknown trend kind {kind!r} (endpoint | fit | segment | mirror)")


def _forecast_from_config(
    fc: dict, diff: DifferenceSeries, model: TrendModel | None
) -> tuple[tuple, float, str]:
    """Build the configured forecast path; returns (path, band_sigma, mode label)."""
    mode = fc.get("mode")
    if mode not in (ALONG_TREND, RETURN_TO_TREND, PENDULUM):
        raise ConfigError(f"unknown forecast mode {mode!r}")
    origin = _stamp(fc["origin"], "forecast.origin")
    horizon = int(fc.get("horizon", 0))
    if horizon < 1:
        raise ConfigError(f"forecast.horizon must be >= 1, got {horizon}")
    trend = _trend_from_config(fc.get("trend", {"kind": "segment"}), model, diff)

    if mode == ALONG_TREND:
        f = forecast_along_trend(trend, origin, horizon)
        return f.path, f.band_sigma, f.mode

    current = (origin, diff.value_at(origin))
    if mode == RETURN_TO_TREND:
        deadline = _stamp(fc["deadline"], "forecast.deadline")
        first = forecast_return_to_trend(current, trend, deadline)
        steps_to_deadline = len(first.path)
        if horizon > steps_to_deadline:
            second = forecast_along_trend(trend, deadline, horizon - steps_to_deadline)
            path = chain_forecasts(first, second)
            return path, first.band_sigma, f"{RETURN_TO_TREND}+{ALONG_TREND}"
        if horizon < steps_to_deadline:
            raise ConfigError(
                f"forecast.horizon {horizon} ends before the deadline {deadline}"
            )
        return first.path, first.band_sigma, first.mode

    f = forecast_pendulum(
        current,
        trend,
        amplitude=float(fc["amplitude"]),
        half_period=int(fc["half_period"]),
        horizon=horizon,
    )
    return f.path, f.band_sigma, f.mode


def _calibration_from_config(cal_cfg, base: Path):
    if cal_cfg in (None, "none"):
        return None
    if cal_cfg == "heuristic" or (
        isinstance(cal_cfg, dict) and cal_cfg.get("kind") == "heuristic"
    ):
        return CRUDE_OIL_HEURISTIC
    if isinstance(cal_cfg, dict) and cal_cfg.get("kind") == "fitted":
        path = Path(cal_cfg["pairs_csv"])
        if not path.is_absolute():
            path = base / path
        pairs = parse_calibration_pairs_csv(_read_text(path))
        return calibrate_price(pairs)
    raise ConfigError(f"unknown calibration {cal_cfg!r}")


def _prices_csv(path, band_sigma: float, cal) -> str:
    lines = ["date,price_usd,low,high"]
    for stamp, value in path:
        price = index_to_price(cal, value)
        edges = sorted(
            (index_to_price(cal, value - band_sigma), index_to_price(cal, value + band_sigma))
        )
        lines.append(f"{stamp},{price!r},{edges[0]!r},{edges[1]!r}")
    return "\n".join(lines) + "\n"


def _forecast_csv(path, band_sigma: float) -> str:
    lines = ["date,predicted,low,high"]
    for stamp, value in path:
        lines.append(f"{stamp},{value!r},{value - band_sigma!r},{value + band_sigma!r}")
    return "\n".join(lines) + "\n"


def cmd_forecast(args) -> int:
    config = _load_config(args)
    base = Path(args.config).parent if args.config else Path.cwd()
    fc = config.get("forecast")
    if not isinstance(fc, dict):
        raise ConfigError("config needs a 'forecast' object")
    out = _out_dir(args, config)

    model_path = out / "trend_model.json"
    model = TrendModel.from_json(_read_text(model_path)) if model_path.exists() else None
    diff = _difference_from_config(args, config)
    path, band_sigma, mode = _forecast_from_config(fc, diff, model)

    outputs = {
        out / "forecast.csv": _forecast_csv(path, band_sigma),
        out
        / "forecast.json": json.dumps(
            {
                "mode": mode,
                "origin": fc["origin"],
                "path": [[str(s), v] for s, v in path],
                "band_sigma": band_sigma,
            },
            indent=2,
        )
        + "\n",
    }
    cal = _calibration_from_config(config.get("calibration"), base)
    if cal is not None:
        outputs[out / "forecast_prices.csv"] = _prices_csv(path, band_sigma, cal)
    _write_all(outputs)
    print(f"forecast ({mode}): {path[0][0]}..{path[-1][0]}, {len(path)} months")
    print(f"terminal value {path[-1][1]:+.2f}")
    return 0


def cmd_translate(args) -> int:
    config = _load_config(args)
    base = Path(args.config).parent if args.config else Path.cwd()
    out = _out_dir(args, config)
    tr = config.get("translate", {})

    forecast_csv = args.forecast_csv or tr.get("forecast_csv") or str(out / "forecast.csv")
    rows = _read_forecast_csv(Path(forecast_csv))
    if not rows:
        raise ConfigError(f"{forecast_csv}: no forecast rows")
    path = [(stamp, value) for stamp, value, _, _ in rows]
    band = rows[0][1] - rows[0][2]

    cal_cfg = args.calibration or tr.get("calibration") or config.get("calibration")
    cal = _calibration_from_config(cal_cfg, base)
    if cal is None:
        raise ConfigError("translate needs a calibration")

    outputs = {out / "translated_prices.csv": _prices_csv(path, band, cal)}

    headline_cfg = tr.get("headline")
    if headline_cfg:
        headline = _load_series(headline_cfg, "headline", base)
        origin = path[0][0].add_months(-1)
        rate = tr.get("annual_rate")
        if rate is None:
            rate = trailing_growth_rate(headline, origin)
        extrapolated = extrapolate_headline(headline, origin, len(path), float(rate))
        lines = ["date,component_index"]
        for (stamp, dv), (_, hv) in zip(path, extrapolated):
            lines.append(f"{stamp},{hv - dv!r}")
        outputs[out / "component_index.csv"] = "\n".join(lines) + "\n"

    _write_all(outputs)
    first, last = path[0], path[-1]
    print(
        f"prices: {first[0]} -> {index_to_price(cal, first[1]):.2f} USD, "
        f"{last[0]} -> {index_to_price(cal, last[1]):.2f} USD"
    )
    return 0


def _read_forecast_csv(path: Path):
    text = _read_text(path)
    lines = [ln.rstrip("\r") for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0] != "date,predicted,low,high":
        raise ConfigError(f"{path}: expected header 'date,predicted,low,high'")
    rows = []
    for line in lines[1:]:
        date, pred, low, high = line.split(",")
        rows.append((MonthStamp.parse(date), float(pred), float(low), float(high)))
    return rows


def cmd_backtest(args) -> int:
    config = _load_config(args)
    bt = config.get("backtest")
    if not isinstance(bt, dict):
        raise ConfigError("config needs a 'backtest' object")
    fc = bt.get("forecast") or config.get("forecast")
    if not isinstance(fc, dict):
        raise ConfigError("config needs a 'forecast' object (reused per origin)")
    diff = _difference_from_config(args, config)
    out = _out_dir(args, config)

    origins = [_stamp(o, "backtest.origins") for o in bt.get("origins", [])]
    if not origins:
        raise ConfigError("backtest.origins must list at least one origin")
    horizon = int(bt.get("horizon", 0))

    model_path = out / "trend_model.json"
    model = TrendModel.from_json(_read_text(model_path)) if model_path.exists() else None

    def forecaster(history: DifferenceSeries, origin: MonthStamp, h: int) -> Forecast:
        per_origin = dict(fc)
        per_origin["origin"] = str(origin)
        per_origin["horizon"] = h
        path, band_sigma, mode = _forecast_from_config(per_origin, history, model)
        return Forecast(mode=mode.split("+")[0], origin=origin, path=path, band_sigma=band_sigma)

    reports = rolling_backtest(diff, forecaster, origins, horizon)

    baseline_cfg = bt.get("baseline")
    baseline_reports: list[BacktestReport] = []
    if baseline_cfg:
        window = (
            _stamp(baseline_cfg["fit_start"], "baseline.fit_start"),
            _stamp(baseline_cfg["fit_end"], "baseline.fit_end"),
        )

        def baseline_forecaster(history, origin, h):
            fit_hi = min(window[1], origin)
            trend = fit_ols(history, (window[0], fit_hi))
            return forecast_along_trend(trend, origin, h)

        baseline_reports = rolling_backtest(diff, baseline_forecaster, origins, horizon)

    doc: dict = {"reports": [r.to_dict() for r in reports]}
    if baseline_reports:
        doc["baseline_reports"] = [r.to_dict() for r in baseline_reports]
    _write_all(
        {
            out / "backtest.csv": reports_to_csv(reports),
            out / "backtest.json": json.dumps(doc, indent=2) + "\n",
        }
    )

    print("origin    n   mae      rmse     bias     hit_rate")
    for r in reports:
        print(
            f"{r.origin}  {r.n:<3d} {r.mae:<8.3f} {r.rmse:<8.3f} "
            f"{r.bias:<+8.3f} {r.direction_hit_rate:.2f}"
        )
    for r in baseline_reports:
        print(f"{r.origin}  baseline mae {r.mae:.3f} (rmse {r.rmse:.3f})")
    return 0


def cmd_fetch(args) -> int:
    import requests

    base_url = os.environ.get("TRENDGAP_API_BASE", DEFAULT_API_BASE)
    payload = {
        "seriesid": [args.series_id],
        "startyear": str(args.start_year),
        "endyear": str(args.end_year),
    }
    response = requests.post(
        f"{base_url}/timeseries/data/", json=payload, timeout=args.timeout
    )
    response.raise_for_status()
    series = series_from_api_payload(response.json(), args.series_id)
    out = Path(args.out or ".")
    _write_all({out / f"{args.series_id}.csv": series_to_csv(series)})
    print(f"fetched {args.series_id}: {len(series)} months, {series.start}..{series.end}")
    return 0


def series_from_api_payload(payload: dict, series_id: str):
    """Convert a v2 timeseries JSON payload into a MonthlySeries."""
    if payload.get("status") != "REQUEST_SUCCEEDED":
        raise ConfigError(f"API request failed: {payload.get('message')}")
    for entry in payload.get("Results", {}).get("series", []):
        if entry.get("seriesID") != series_id:
            continue
        obs = []
        for row in entry.get("data", []):
            period = row.get("period", "")
            if not period.startswith("M") or period == "M13":
                continue  # annual averages are not monthly observations
            stamp = MonthStamp(int(row["year"]), int(period[1:]))
            obs.append((stamp, float(row["value"])))
        obs.sort(key=lambda o: o[0])
        return MonthlySeries(series_id, "", tuple(obs))
    raise ConfigError(f"series {series_id!r} not in API response")


# ----------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trendgap",
        description="Trend-gap analysis of price-index differences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="output directory (overrides config)")

    p = sub.add_parser("diff", help="difference two index series")
    common(p)
    p.add_argument("--headline", help="headline series CSV path")
    p.add_argument("--headline-id", default=None)
    p.add_argument("--component", help="component series CSV path")
    p.add_argument("--component-id", default=None)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("fit", help="fit trends and turning points")
    common(p)
    p.add_argument("--difference-csv", help="difference CSV (default <out>/difference.csv)")
    p.add_argument("--k", type=int, default=None, help="number of breakpoints")
    p.add_argument("--min-len", type=int, default=None, help="minimum piece length (months)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("forecast", help="forecast the difference path")
    common(p)
    p.add_argument("--difference-csv", help="difference CSV (default <out>/difference.csv)")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("translate", help="translate a forecast into prices")
    common(p)
    p.add_argument("--forecast-csv", help="forecast CSV (default <out>/forecast.csv)")
    p.add_argument(
        "--calibration",
        help="'heuristic' or omit to use the config calibration",
    )
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("backtest", help="replay forecasts against actuals")
    common(p)
    p.add_argument("--difference-csv", help="difference CSV (default <out>/difference.csv)")
    p.set_defaults(func=cmd_backtest)

    p = sub.add_parser("fetch", help="fetch a published series into CSV")
    p.add_argument("--series-id", required=True)
    p.add_argument("--start-year", type=int, required=True)
    p.add_argument("--end-year", type=int, required=True)
    p.add_argument("--out", help="output directory")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_fetch)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
