"""Score forecasts against realized observations.

A forecast is only worth keeping if it beats what it replaced: the scorer
compares a predicted path to actuals over their overlapping months, and the
rolling harness replays an origin-by-origin evaluation in which each fit
sees strictly nothing after its own origin.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

from .forecast import Forecast
from .series import DifferenceSeries, MonthStamp


class BacktestError(ValueError):
    """Invalid backtest input."""


@dataclass(frozen=True)
class BacktestReport:
    """Error metrics over the months where forecast and actuals overlap.

    ``bias`` is the mean signed error (predicted - actual);
    ``direction_hit_rate`` is the fraction of consecutive overlapping month
    pairs whose month-over-month changes agree in sign, with zero changes on
    either side excluded from the count (vacuously 1.0 when nothing counts).
    """

    n: int
    mae: float
    rmse: float
    bias: float
    direction_hit_rate: float
    origin: MonthStamp | None = None

    def to_dict(self) -> dict:
        doc = {
            "n": self.n,
            "mae": self.mae,
            "rmse": self.rmse,
            "bias": self.bias,
            "direction_hit_rate": self.direction_hit_rate,
        }
        if self.origin is not None:
            doc["origin"] = str(self.origin)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def score(forecast: Forecast, actual: DifferenceSeries) -> BacktestReport:
    """Compare a forecast path to realized values month by month."""
    overlap = [
        (stamp, pred, actual.value_at(stamp))
        for stamp, pred in forecast.path
        if actual.has(stamp)
    ]
    if not overlap:
        raise BacktestError("forecast and actuals share no months")

    errors = [pred - act for _, pred, act in overlap]
    n = len(errors)
    mae = sum(abs(e) for e in errors) / n
    rmse = math.sqrt(sum(e * e for e in errors) / n)
    bias = sum(errors) / n

    hits = counted = 0
    for (_, p0, a0), (_, p1, a1) in zip(overlap, overlap[1:]):
        dp, da = p1 - p0, a1 - a0
        if dp == 0.0 or da == 0.0:
            continue
        counted += 1
        if (dp > 0) == (da > 0):
            hits += 1
    hit_rate = hits / counted if counted else 1.0

    return BacktestReport(n=n, mae=mae, rmse=rmse, bias=bias, direction_hit_rate=hit_rate)


Forecaster = Callable[[DifferenceSeries, MonthStamp, int], Forecast]


def rolling_backtest(
    diff: DifferenceSeries,
    forecaster: Forecaster,
    origins: list[MonthStamp],
    horizon: int,
) -> list[BacktestReport]:
    """Replay a forecaster at several origins without lookahead.

    At each origin the forecaster receives only the history up to and
    including that origin, plus the origin stamp and horizon, and must return
    a :class:`Forecast`. Each report is scored against the full actuals and
    tagged with its origin.

    Parameters
    ----------
    diff : DifferenceSeries
        Realized difference series (history and actuals both come from it).
    forecaster : callable
        ``forecaster(history, origin, horizon) -> Forecast``.
    origins : list of MonthStamp
        Forecast origins; each must leave at least ``horizon`` months of
        actuals after it.
    horizon : int
        Months to forecast past each origin.
    """
    if horizon < 1:
        raise BacktestError(f"horizon must be >= 1, got {horizon}")
    reports = []
    for origin in origins:
        if not diff.has(origin):
            raise BacktestError(f"origin {origin} is not an observed month")
        if diff.end < origin.add_months(horizon):
            raise BacktestError(
                f"origin {origin} leaves fewer than {horizon} months of actuals"
            )
        history = diff.restrict(diff.start, origin)
        forecast = forecaster(history, origin, horizon)
        report = score(forecast, diff)
        reports.append(
            BacktestReport(
                n=report.n,
                mae=report.mae,
                rmse=report.rmse,
                bias=report.bias,
                direction_hit_rate=report.direction_hit_rate,
                origin=origin,
            )
        )
    return reports


def reports_to_csv(reports: list[BacktestReport]) -> str:
    """One row per origin: ``origin,n,mae,rmse,bias,hit_rate``."""
    lines = ["origin,n,mae,rmse,bias,hit_rate"]
    for r in reports:
        origin = str(r.origin) if r.origin is not None else ""
        lines.append(
            f"{origin},{r.n},{r.mae!r},{r.rmse!r},{r.bias!r},{r.direction_hit_rate!r}"
        )
    return "\n".join(lines) + "\n"


__all__ = [
    "BacktestError",
    "BacktestReport",
    "Forecaster",
    "score",
    "rolling_backtest",
    "reports_to_csv",
]
