"""Successor-trend construction and difference-series forecasting.

After a turning point the next trend can be drawn before data confirms it:
either as a mirror reflection of the finished trend or as a straight line
through two chosen anchor points. Forecasts then follow one of three
regimes: ride the trend, close the current deviation linearly by a
deadline, or swing through the trend in a pendulum overshoot.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .fitting import LinearSegment
from .series import MonthStamp, months_between

ALONG_TREND = "along-trend"
RETURN_TO_TREND = "return-to-trend"
PENDULUM = "pendulum"


class ForecastError(ValueError):
    """A forecast precondition was violated."""


@dataclass(frozen=True)
class Forecast:
    """A predicted difference path with a descriptive +/- sigma band.

    The path starts the month after ``origin`` and its stamps increase
    strictly. ``band_sigma`` is the residual sigma of the trend the forecast
    leans on; the band is descriptive, not a confidence interval.
    """

    mode: str
    origin: MonthStamp
    path: tuple[tuple[MonthStamp, float], ...]
    band_sigma: float

    def __post_init__(self):
        object.__setattr__(
            self, "path", tuple((s, float(v)) for s, v in self.path)
        )
        object.__setattr__(self, "band_sigma", float(self.band_sigma))
        if self.band_sigma < 0.0:
            raise ValueError(f"negative band_sigma {self.band_sigma}")
        if not self.path:
            raise ValueError("empty forecast path")
        expected = self.origin.add_months(1)
        if self.path[0][0] != expected:
            raise ValueError(
                f"path must start the month after origin ({expected}), "
                f"got {self.path[0][0]}"
            )
        for (a, _), (b, _) in zip(self.path, self.path[1:]):
            if b <= a:
                raise ValueError(f"path stamps not strictly increasing at {b}")

    @property
    def stamps(self) -> tuple[MonthStamp, ...]:
        return tuple(s for s, _ in self.path)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.path)

    def to_csv(self) -> str:
        """Render as ``date,predicted,low,high`` rows (low/high = value -/+ sigma)."""
        lines = ["date,predicted,low,high"]
        for stamp, value in self.path:
            lines.append(
                f"{stamp},{value!r},{value - self.band_sigma!r},{value + self.band_sigma!r}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "origin": str(self.origin),
            "path": [[str(s), v] for s, v in self.path],
            "band_sigma": self.band_sigma,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def mirror_trend(
    prev: LinearSegment, pivot: tuple[MonthStamp, float], duration: int
) -> LinearSegment:
    """Reflect a finished trend at a pivot to draw its successor.

    The new segment starts at the pivot point with the previous slope negated
    and runs for ``duration`` months. Its r-squared and residual sigma are
    inherited from the previous segment as priors, flagged synthetic.
    """
    if duration < 12:
        raise ForecastError(f"mirror duration must be >= 12 months, got {duration}")
    if prev.slope == 0.0:
        raise ForecastError("mirror of a zero-slope trend is undefined")
    stamp, value = pivot
    return LinearSegment(
        start=stamp,
        end=stamp.add_months(duration),
        intercept=float(value),
        slope=-prev.slope,
        r_squared=prev.r_squared,
        residual_sigma=prev.residual_sigma,
        synthetic=True,
    )


def endpoint_trend(
    start: tuple[MonthStamp, float], end: tuple[MonthStamp, float]
) -> LinearSegment:
    """Straight trend line through two anchor points (slope in points/year)."""
    (s0, v0), (s1, v1) = start, end
    n_months = months_between(s1, s0)
    if n_months <= 0:
        raise ForecastError(f"end anchor {s1} must come after start anchor {s0}")
    slope = (float(v1) - float(v0)) / (n_months / 12.0)
    return LinearSegment(
        start=s0,
        end=s1,
        intercept=float(v0),
        slope=slope,
        r_squared=1.0,
        residual_sigma=0.0,
        synthetic=True,
    )


def forecast_along_trend(
    trend: LinearSegment, origin: MonthStamp, horizon: int
) -> Forecast:
    """Evaluate the trend line monthly for ``horizon`` months after ``origin``."""
    if horizon < 1:
        raise ForecastError(f"horizon must be >= 1, got {horizon}")
    path = tuple(
        (stamp, trend.predicted(stamp))
        for stamp in (origin.add_months(m) for m in range(1, horizon + 1))
    )
    return Forecast(
        mode=ALONG_TREND, origin=origin, path=path, band_sigma=trend.residual_sigma
    )


def forecast_return_to_trend(
    current: tuple[MonthStamp, float], trend: LinearSegment, deadline: MonthStamp
) -> Forecast:
    """Close the current deviation in equal monthly steps, landing on the trend.

    The deviation at the origin is divided into equal parts so the path sits
    exactly on the trend line at the deadline. Callers wanting a longer
    horizon chain :func:`forecast_along_trend` from the deadline.
    """
    origin, value = current
    n = months_between(deadline, origin)
    if n < 1:
        raise ForecastError(f"deadline {deadline} must come after origin {origin}")
    deviation = float(value) - trend.predicted(origin)
    path = []
    for m in range(1, n + 1):
        stamp = origin.add_months(m)
        remaining = deviation * (1.0 - m / n)
        path.append((stamp, trend.predicted(stamp) + remaining))
    return Forecast(
        mode=RETURN_TO_TREND,
        origin=origin,
        path=tuple(path),
        band_sigma=trend.residual_sigma,
    )


def forecast_pendulum(
    current: tuple[MonthStamp, float],
    trend: LinearSegment,
    amplitude: float,
    half_period: int,
    horizon: int,
) -> Forecast:
    """Swing the deviation through the trend line in a free-pendulum overshoot.

    The deviation follows a cosine schedule: it starts at the current value,
    crosses the trend, and reaches ``amplitude`` on the far side after
    ``half_period`` months; the return half-wave then rebounds the same
    distance past the trend, and the swing repeats over longer horizons.
    """
    if amplitude <= 0.0:
        raise ForecastError(f"amplitude must be > 0, got {amplitude}")
    if half_period < 2:
        raise ForecastError(f"half_period must be >= 2 months, got {half_period}")
    if horizon < 1:
        raise ForecastError(f"horizon must be >= 1, got {horizon}")
    origin, value = current
    start_dev = float(value) - trend.predicted(origin)
    side = math.copysign(1.0, start_dev) if start_dev != 0.0 else 1.0

    def deviation(m: int) -> float:
        phase = math.pi * m / half_period
        wave = math.cos(phase)
        if m <= half_period / 2:
            # leaving the start position: scale by the observed deviation
            return wave * abs(start_dev) * side
        # past the first crossing: full swings of the target amplitude
        return wave * amplitude * side

    path = tuple(
        (origin.add_months(m), trend.predicted(origin.add_months(m)) + deviation(m))
        for m in range(1, horizon + 1)
    )
    return Forecast(
        mode=PENDULUM, origin=origin, path=tuple(path), band_sigma=trend.residual_sigma
    )


def chain_forecasts(first: Forecast, second: Forecast) -> tuple[tuple[MonthStamp, float], ...]:
    """Concatenate two forecast paths (the second must pick up where the first ends)."""
    if second.origin != first.path[-1][0]:
        raise ForecastError(
            f"second forecast must originate at {first.path[-1][0]}, "
            f"got {second.origin}"
        )
    return first.path + second.path


__all__ = [
    "ALONG_TREND",
    "RETURN_TO_TREND",
    "PENDULUM",
    "ForecastError",
    "Forecast",
    "mirror_trend",
    "endpoint_trend",
    "forecast_along_trend",
    "forecast_return_to_trend",
    "forecast_pendulum",
    "chain_forecasts",
]
