#!/usr/bin/env python3
"""Regenerate the bundled fixture CSVs.

The fixtures are deterministic synthetic snapshots shaped like the published
index series they stand in for (see README.md in this directory). Headline
indices are smooth compounded paths; component indices are derived as
headline minus a piecewise difference path: linear trends, a noisy
transition around the 2000 turning point, and the 2008-2010 swing through
the emerging successor trend. Values are rounded to one decimal like the
published tables.

Running this script rewrites the CSVs in place and re-runs the self-check
that every number the test suite leans on still holds.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trendgap import (  # noqa: E402
    DifferenceSeries,
    MonthStamp,
    detect_breakpoints,
    endpoint_trend,
    fit_ols,
    forecast_along_trend,
    forecast_return_to_trend,
    lead_lag,
    months_between,
    score,
)

HERE = Path(__file__).resolve().parent
SEED = 20100330

# Annual December-over-December percent changes driving the smooth headline
# paths. Loosely shaped like the published history; exact values are not
# load-bearing beyond the December 1997 anchor below.
CPI_RATES = {
    1980: 12.5, 1981: 8.9, 1982: 3.8, 1983: 3.8, 1984: 3.9, 1985: 3.8,
    1986: 1.1, 1987: 4.4, 1988: 4.4, 1989: 4.6, 1990: 6.1, 1991: 3.1,
    1992: 2.9, 1993: 2.7, 1994: 2.7, 1995: 2.5, 1996: 3.3, 1997: 1.7,
    1998: 1.6, 1999: 2.7, 2000: 3.4, 2001: 1.6, 2002: 2.4, 2003: 1.9,
    2004: 3.3, 2005: 3.4, 2006: 2.5, 2007: 4.1, 2008: 0.1, 2009: 2.7,
    2010: 1.5,
}
PPI_RATES = {
    1985: -0.5, 1986: -2.3, 1987: 2.2, 1988: 4.0, 1989: 4.9, 1990: 5.7,
    1991: -0.1, 1992: 1.6, 1993: 0.2, 1994: 1.7, 1995: 2.3, 1996: 2.8,
    1997: -1.2, 1998: -0.9, 1999: 2.9, 2000: 3.6, 2001: -1.6, 2002: 1.2,
    2003: 4.0, 2004: 4.2, 2005: 5.4, 2006: 1.1, 2007: 6.2, 2008: -0.9,
    2009: 4.3, 2010: 3.8,
}

CPI_ANCHOR = (MonthStamp(1997, 12), 161.8)
PPI_START_VALUE = 103.2


def month_range(start: MonthStamp, end: MonthStamp) -> list[MonthStamp]:
    return [start.add_months(i) for i in range(months_between(end, start) + 1)]


def smooth_headline(start: MonthStamp, end: MonthStamp, rates: dict[int, float],
                    anchor: tuple[MonthStamp, float]) -> dict[MonthStamp, float]:
    """Compound monthly at each year's rate; scale so the anchor holds exactly."""
    stamps = month_range(start, end)
    log_level = {stamps[0]: 0.0}
    for prev, cur in zip(stamps, stamps[1:]):
        step = math.log(1.0 + rates[cur.year] / 100.0) / 12.0
        log_level[cur] = log_level[prev] + step
    anchor_stamp, anchor_value = anchor
    offset = math.log(anchor_value) - log_level[anchor_stamp]
    return {s: math.exp(l + offset) for s, l in log_level.items()}


def ease(frac: float) -> float:
    """Cosine ease from 0 to 1."""
    return (1.0 - math.cos(math.pi * frac)) / 2.0


# ------------------------------------------------------------------ shapes
#
# Deterministic difference paths; noise is layered on top afterwards. Both
# component stories share the same anatomy, with the crude episode leading
# the motor-fuel episode by seven months and the motor-fuel swing carrying
# the larger amplitude.

MOTOR_SUCCESSOR = endpoint_trend((MonthStamp(2009, 1), -50.0), (MonthStamp(2016, 1), 75.0))
CRUDE_SUCCESSOR = endpoint_trend((MonthStamp(2009, 6), -74.0), (MonthStamp(2016, 1), -30.0))


def motor_difference_shape(stamp: MonthStamp) -> float:
    t1_start, t1_end = MonthStamp(1980, 1), MonthStamp(1999, 6)
    tr_end = MonthStamp(2000, 12)
    t2_start = MonthStamp(2001, 1)
    dive_start, dive_end = MonthStamp(2008, 1), MonthStamp(2008, 7)
    peak = MonthStamp(2009, 2)
    descent_start, descent_end = MonthStamp(2009, 3), MonthStamp(2009, 12)

    trend1 = lambda s: -15.0 + 4.2 * months_between(s, t1_start) / 12.0
    trend2 = lambda s: 85.0 - 21.1 * months_between(s, t2_start) / 12.0

    if stamp <= t1_end:
        return trend1(stamp)
    if stamp <= tr_end:
        k = months_between(stamp, t1_end)
        n = months_between(tr_end, t1_end) + 1
        v1, v2 = trend1(t1_end), trend2(t2_start)
        return v1 + (v2 - v1) * ease(k / n) - 16.0 * math.sin(math.pi * k / n)
    if stamp < dive_start:
        return trend2(stamp)
    if stamp <= dive_end:
        k = months_between(stamp, dive_start)
        n = months_between(dive_end, dive_start)
        return trend2(stamp) - 22.0 * ease(k / n)
    if stamp <= peak:
        k = months_between(stamp, dive_end)
        n = months_between(peak, dive_end)
        bottom = trend2(dive_end) - 22.0
        return bottom + (48.0 - bottom) * ease(k / n)
    if stamp <= descent_end:
        k = months_between(stamp, descent_start)
        n = months_between(descent_end, descent_start)
        dev0 = 45.0 - MOTOR_SUCCESSOR.predicted(descent_start)
        return MOTOR_SUCCESSOR.predicted(stamp) + dev0 * (1.0 - k / n)
    return MOTOR_SUCCESSOR.predicted(stamp)


def motor_noise_sigma(stamp: MonthStamp) -> float:
    if stamp <= MonthStamp(1999, 6):
        return 6.5
    if stamp <= MonthStamp(2000, 12):
        return 6.0  # transition months are volatile on top of the dip shape
    if stamp <= MonthStamp(2007, 12):
        return 6.0
    if stamp <= MonthStamp(2009, 2):
        return 3.0
    if stamp <= MonthStamp(2009, 12):
        return 2.0
    return 2.5


def crude_difference_shape(stamp: MonthStamp) -> float:
    t1_start, t1_end = MonthStamp(1988, 1), MonthStamp(1999, 6)
    tr_end = MonthStamp(2000, 12)
    t2_start = MonthStamp(2001, 1)
    dive_start, dive_end = MonthStamp(2007, 7), MonthStamp(2008, 1)
    peak = MonthStamp(2008, 8)
    descent_start, descent_end = MonthStamp(2008, 9), MonthStamp(2009, 6)

    trend1 = lambda s: 10.0 + 2.9 * months_between(s, t1_start) / 12.0
    trend2 = lambda s: 55.0 - 17.1 * months_between(s, t2_start) / 12.0

    if stamp < t1_start:
        return 8.5
    if stamp <= t1_end:
        return trend1(stamp)
    if stamp <= tr_end:
        k = months_between(stamp, t1_end)
        n = months_between(tr_end, t1_end) + 1
        v1, v2 = trend1(t1_end), trend2(t2_start)
        return v1 + (v2 - v1) * ease(k / n) - 10.0 * math.sin(math.pi * k / n)
    if stamp < dive_start:
        return trend2(stamp)
    if stamp <= dive_end:
        k = months_between(stamp, dive_start)
        n = months_between(dive_end, dive_start)
        return trend2(stamp) - 9.0 * ease(k / n)
    if stamp <= peak:
        k = months_between(stamp, dive_end)
        n = months_between(peak, dive_end)
        bottom = trend2(dive_end) - 9.0
        return bottom + (-44.0 - bottom) * ease(k / n)
    if stamp <= descent_end:
        k = months_between(stamp, descent_start.add_months(-1))
        n = months_between(descent_end, descent_start.add_months(-1))
        dev0 = -44.0 - CRUDE_SUCCESSOR.predicted(peak)
        return CRUDE_SUCCESSOR.predicted(stamp) + dev0 * (1.0 - k / n)
    return CRUDE_SUCCESSOR.predicted(stamp)


def crude_noise_sigma(stamp: MonthStamp) -> float:
    if stamp < MonthStamp(1988, 1):
        return 3.5
    if stamp <= MonthStamp(1999, 6):
        return 3.0
    if stamp <= MonthStamp(2000, 12):
        return 6.0
    if stamp <= MonthStamp(2007, 6):
        return 5.0
    if stamp <= MonthStamp(2009, 6):
        return 2.2
    return 0.8


# --------------------------------------------------------------- assembly


def build_fixture_tables():
    rng = np.random.default_rng(SEED)

    cpi_span = (MonthStamp(1980, 1), MonthStamp(2010, 12))
    ppi_span = (MonthStamp(1985, 1), MonthStamp(2010, 12))

    cpi = {s: round(v, 1) for s, v in
           smooth_headline(*cpi_span, CPI_RATES, CPI_ANCHOR).items()}
    ppi_raw = smooth_headline(*ppi_span, PPI_RATES,
                              (MonthStamp(1985, 1), PPI_START_VALUE))
    ppi = {s: round(v, 1) for s, v in ppi_raw.items()}

    motor = {}
    for stamp in month_range(*cpi_span):
        target = motor_difference_shape(stamp) + rng.normal(0.0, motor_noise_sigma(stamp))
        motor[stamp] = round(cpi[stamp] - target, 1)

    crude = {}
    for stamp in month_range(*ppi_span):
        target = crude_difference_shape(stamp) + rng.normal(0.0, crude_noise_sigma(stamp))
        crude[stamp] = round(ppi[stamp] - target, 1)

    # Spot-price pairs on the difference scale: price is roughly minus the
    # difference, observed with sub-dollar noise.
    pair_levels = [-133.0, -120.0, -105.0, -96.5, -86.0, -79.5, -72.3, -63.0,
                   -53.3, -48.0, -44.0, -38.0, -33.0, -30.0]
    pairs = [(lvl, round(-lvl + rng.normal(0.0, 0.6), 2)) for lvl in pair_levels]

    return cpi, motor, ppi, crude, pairs


def write_series_csv(path: Path, table: dict[MonthStamp, float]) -> None:
    lines = ["date,value"]
    lines.extend(f"{stamp},{table[stamp]:.1f}" for stamp in sorted(table))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def difference_of(minuend: dict, subtrahend: dict, name: str) -> DifferenceSeries:
    obs = tuple((s, minuend[s] - subtrahend[s]) for s in sorted(set(minuend) & set(subtrahend)))
    return DifferenceSeries(f"{name}-headline", f"{name}-component", obs)


def self_check(cpi, motor, ppi, crude) -> None:
    """Verify every anchor the acceptance suite will assert. Raises on miss."""
    md = difference_of(cpi, motor, "motor")
    cd = difference_of(ppi, crude, "crude")

    def gate(label, ok, detail):
        status = "ok " if ok else "FAIL"
        print(f"  [{status}] {label}: {detail}")
        if not ok:
            raise SystemExit(f"fixture self-check failed: {label}")

    s = fit_ols(md, (MonthStamp(1980, 1), MonthStamp(1999, 6)))
    gate("motor trend 1980-1999", abs(s.slope - 4.2) <= 0.5 and s.r_squared >= 0.85,
         f"slope {s.slope:+.2f}, R2 {s.r_squared:.3f}")
    s = fit_ols(md, (MonthStamp(2001, 1), MonthStamp(2008, 6)))
    gate("motor trend 2001-2008", abs(s.slope + 21.1) <= 2.0 and s.r_squared >= 0.85,
         f"slope {s.slope:+.2f}, R2 {s.r_squared:.3f}")
    s = fit_ols(cd, (MonthStamp(1988, 1), MonthStamp(1999, 6)))
    gate("crude trend 1988-1999", abs(s.slope - 2.9) <= 0.5 and s.r_squared >= 0.85,
         f"slope {s.slope:+.2f}, R2 {s.r_squared:.3f}")
    s = fit_ols(cd, (MonthStamp(2001, 1), MonthStamp(2007, 6)))
    gate("crude trend 2001-2007", abs(s.slope + 17.1) <= 2.0 and s.r_squared >= 0.85,
         f"slope {s.slope:+.2f}, R2 {s.r_squared:.3f}")

    (bp,) = detect_breakpoints(md.restrict(MonthStamp(1980, 1), MonthStamp(2008, 6)), 1, 60)
    gate("motor turning point", MonthStamp(1999, 1) <= bp <= MonthStamp(2001, 12), str(bp))
    (bp,) = detect_breakpoints(cd.restrict(MonthStamp(1988, 1), MonthStamp(2007, 6)), 1, 60)
    gate("crude turning point", MonthStamp(1999, 1) <= bp <= MonthStamp(2001, 12), str(bp))

    origin = MonthStamp(2009, 3)
    current = (origin, md.value_at(origin))
    recovery = forecast_return_to_trend(current, MOTOR_SUCCESSOR, MonthStamp(2009, 12))
    dev0 = current[1] - MOTOR_SUCCESSOR.predicted(origin)
    step = dev0 / 9.0
    gate("recovery step", 9.0 <= step <= 11.0, f"{step:.2f} per month")
    actual = md.restrict(MonthStamp(2009, 4), MonthStamp(2009, 12))
    mae_recovery = score(recovery, actual).mae
    old_trend = fit_ols(md, (MonthStamp(2001, 1), MonthStamp(2008, 6)))
    mae_baseline = score(forecast_along_trend(old_trend, origin, 9), actual).mae
    gate("recovery beats baseline", mae_recovery < mae_baseline,
         f"mae {mae_recovery:.2f} vs {mae_baseline:.2f}")

    tail = fit_ols(cd, (MonthStamp(2009, 7), MonthStamp(2010, 12)))
    horizon = months_between(MonthStamp(2016, 1), MonthStamp(2010, 12))
    terminal = forecast_along_trend(tail, MonthStamp(2010, 12), horizon).path[-1][1]
    gate("crude level in 2016", abs(-terminal - 30.0) <= 4.0,
         f"difference {terminal:+.1f} -> {-terminal:.1f} USD/bbl")

    window = (MonthStamp(2008, 1), MonthStamp(2010, 12))
    lag, corr = lead_lag(cd.restrict(*window), md.restrict(*window), 12)
    gate("crude leads motor fuel", 6 <= lag <= 8, f"lag {lag}, corr {corr:.3f}")

    index_mar = motor[MonthStamp(2009, 3)]
    index_dec = motor[MonthStamp(2009, 12)]
    pct = 100.0 * (index_dec - index_mar) / index_mar
    gate("motor-fuel price gain", 40.0 <= pct <= 60.0,
         f"{index_mar:.1f} -> {index_dec:.1f} ({pct:+.1f}%)")


def main() -> None:
    cpi, motor, ppi, crude, pairs = build_fixture_tables()

    write_series_csv(HERE / "cpi_all_items_sa.csv", cpi)
    write_series_csv(HERE / "cpi_motor_fuel_sa.csv", motor)
    write_series_csv(HERE / "ppi_all_commodities.csv", ppi)
    write_series_csv(HERE / "ppi_crude_petroleum.csv", crude)

    lines = ["index,price_usd"]
    lines.extend(f"{idx},{price}" for idx, price in pairs)
    (HERE / "crude_price_pairs.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    print("fixture self-check:")
    self_check(cpi, motor, ppi, crude)
    print("wrote 5 fixture CSVs")


if __name__ == "__main__":
    main()
