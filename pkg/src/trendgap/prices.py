"""Translate index-space paths into price statements.

Index points only become interesting once they say something about prices:
percent changes of a component index, dollars per barrel through an affine
index-to-price map, and the lead of one difference series over another.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .forecast import Forecast
from .series import DifferenceSeries, MonthlySeries, MonthStamp, months_between


class PriceError(ValueError):
    """Invalid input to a price-translation operation."""


@dataclass(frozen=True)
class PriceCalibration:
    """Affine map ``price = alpha * index + beta`` (USD per index point)."""

    alpha: float
    beta: float
    fit_r_squared: float | None
    source: str  # "heuristic" | "fitted"

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if self.fit_r_squared is not None:
            r2 = float(self.fit_r_squared)
            if not 0.0 <= r2 <= 1.0:
                raise ValueError(f"fit_r_squared {r2} outside [0, 1]")
            object.__setattr__(self, "fit_r_squared", r2)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "fit_r_squared": self.fit_r_squared,
            "source": self.source,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "PriceCalibration":
        return cls(
            alpha=doc["alpha"],
            beta=doc["beta"],
            fit_r_squared=doc.get("fit_r_squared"),
            source=doc["source"],
        )


#: The crude-oil rule of thumb: a difference of -120 index points reads as
#: $120 per barrel, i.e. price is minus the difference. Lives on the
#: difference scale, not on the component index itself.
CRUDE_OIL_HEURISTIC = PriceCalibration(alpha=-1.0, beta=0.0, fit_r_squared=None, source="heuristic")


def percent_change(index_start: float, index_end: float) -> float:
    """Percent change from one index level to another."""
    if index_start <= 0.0:
        raise PriceError(f"index_start must be positive, got {index_start}")
    return 100.0 * (index_end - index_start) / index_start


def component_index_from_difference(
    headline_path: list[tuple[MonthStamp, float]] | tuple[tuple[MonthStamp, float], ...],
    difference_path: Forecast,
) -> list[tuple[MonthStamp, float]]:
    """Recover the component index path: component = headline - difference."""
    headline = list(headline_path)
    if [s for s, _ in headline] != list(difference_path.stamps):
        raise PriceError("headline and difference paths must cover identical stamps")
    return [
        (stamp, float(hv) - dv)
        for (stamp, hv), dv in zip(headline, difference_path.values)
    ]


def extrapolate_headline(
    series: MonthlySeries, origin: MonthStamp, horizon: int, annual_rate: float
) -> list[tuple[MonthStamp, float]]:
    """Continue a headline index geometrically at a given annual percent rate."""
    if not series.has(origin):
        raise PriceError(f"origin {origin} absent from {series.series_id!r}")
    if not math.isfinite(annual_rate):
        raise PriceError(f"annual_rate must be finite, got {annual_rate}")
    base = series.value_at(origin)
    factor = 1.0 + annual_rate / 100.0
    return [
        (origin.add_months(m), base * factor ** (m / 12.0))
        for m in range(1, horizon + 1)
    ]


def trailing_growth_rate(series: MonthlySeries, origin: MonthStamp, years: int = 5) -> float:
    """Mean annual percent growth over the trailing window ending at ``origin``."""
    if not series.has(origin):
        raise PriceError(f"origin {origin} absent from {series.series_id!r}")
    back = origin.add_months(-12 * years)
    while not series.has(back) and back < origin:
        back = back.add_months(1)
    span_years = months_between(origin, back) / 12.0
    if span_years <= 0:
        raise PriceError("no trailing history to estimate growth from")
    ratio = series.value_at(origin) / series.value_at(back)
    return 100.0 * (ratio ** (1.0 / span_years) - 1.0)


def calibrate_price(pairs: list[tuple[float, float]]) -> PriceCalibration:
    """Fit ``price = alpha * index + beta`` by least squares on (index, USD) pairs."""
    xs = np.array([float(i) for i, _ in pairs])
    ys = np.array([float(p) for _, p in pairs])
    if len(xs) < 2 or np.ptp(xs) == 0.0:
        raise PriceError("need at least 2 pairs with distinct index values")
    design = np.column_stack([xs, np.ones_like(xs)])
    coef, _, _, _ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - design @ coef
    sst = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if sst == 0.0 else max(0.0, min(1.0, 1.0 - float(resid @ resid) / sst))
    return PriceCalibration(
        alpha=float(coef[0]), beta=float(coef[1]), fit_r_squared=r2, source="fitted"
    )


def index_to_price(cal: PriceCalibration, index: float) -> float:
    """Apply the affine calibration to one index value."""
    return cal.alpha * float(index) + cal.beta


def parse_calibration_pairs_csv(text: str) -> list[tuple[float, float]]:
    """Parse ``index,price_usd`` CSV content into calibration pairs."""
    lines = [ln.rstrip("\r").strip() for ln in text.split("\n")]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "index,price_usd":
        raise PriceError("expected header 'index,price_usd'")
    pairs = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise PriceError(f"line {line_no}: expected 2 fields")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise PriceError(f"line {line_no}: non-numeric pair {line!r}") from None
    if not pairs:
        raise PriceError("no calibration pairs")
    return pairs


def lead_lag(
    a: DifferenceSeries,
    b: DifferenceSeries,
    max_lag: int,
    min_overlap: int = 24,
    detrend: bool = False,
) -> tuple[int, float]:
    """Lag (in months) of ``b`` behind ``a`` that maximizes Pearson correlation.

    Correlates ``a(t)`` against ``b(t + lag)`` for every lag in
    ``[-max_lag, +max_lag]``; a positive result means ``a`` leads ``b``. Every
    tested lag must leave at least ``min_overlap`` common months. Ties are
    broken toward the smaller absolute lag. With ``detrend=True`` each
    aligned window has its own least-squares line removed first (not used for
    the raw-path comparison the trend story rests on).
    """
    if max_lag < 0:
        raise PriceError(f"max_lag must be >= 0, got {max_lag}")
    a_map = dict(a.observations)
    b_map = dict(b.observations)

    candidates: list[tuple[int, float]] = []
    for lag in sorted(range(-max_lag, max_lag + 1), key=lambda l: (abs(l), l)):
        stamps = [s for s in a_map if s.add_months(lag) in b_map]
        if len(stamps) < min_overlap:
            raise PriceError(
                f"insufficient overlap at lag {lag}: {len(stamps)} months "
                f"(need >= {min_overlap})"
            )
        stamps.sort()
        xs = np.array([a_map[s] for s in stamps])
        ys = np.array([b_map[s.add_months(lag)] for s in stamps])
        if detrend:
            xs = _detrended(stamps, xs)
            ys = _detrended(stamps, ys)
        sx, sy = xs.std(), ys.std()
        if sx == 0.0 or sy == 0.0:
            corr = 0.0
        else:
            corr = float(np.mean((xs - xs.mean()) * (ys - ys.mean())) / (sx * sy))
        candidates.append((lag, corr))

    best_lag, best_corr = candidates[0]
    for lag, corr in candidates[1:]:
        if corr > best_corr:
            best_lag, best_corr = lag, corr
    return best_lag, best_corr


def _detrended(stamps: list[MonthStamp], values: np.ndarray) -> np.ndarray:
    x = np.array([months_between(s, stamps[0]) / 12.0 for s in stamps])
    design = np.column_stack([np.ones_like(x), x])
    coef, _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    return values - design @ coef


__all__ = [
    "PriceError",
    "PriceCalibration",
    "CRUDE_OIL_HEURISTIC",
    "percent_change",
    "component_index_from_difference",
    "extrapolate_headline",
    "trailing_growth_rate",
    "calibrate_price",
    "index_to_price",
    "parse_calibration_pairs_csv",
    "lead_lag",
]
