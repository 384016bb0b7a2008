#!/usr/bin/env python3
"""Replaying the 2009 recovery call: a deviation must close onto its trend.

In March 2009 the motor-fuel gap sat far above the successor trend drawn
through (-50 in January 2009) -> (+75 in January 2016). The recovery
forecast closes that deviation in equal monthly steps by December 2009, and
a pendulum overshoot is what the swing would look like if it kept going.
"""

from pathlib import Path

from trendgap import (
    MonthStamp,
    difference,
    endpoint_trend,
    fit_ols,
    forecast_along_trend,
    forecast_pendulum,
    forecast_return_to_trend,
    mirror_trend,
    parse_series_csv,
    score,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name, series_id):
    return parse_series_csv((FIXTURES / name).read_text(), series_id)


def main():
    gap = difference(
        load("cpi_all_items_sa.csv", "CUSR0000SA0"),
        load("cpi_motor_fuel_sa.csv", "CUSR0000SETB"),
    )

    # Two ways to draw the successor trend after the 2008 turn.
    finished = fit_ols(gap, (MonthStamp(2001, 1), MonthStamp(2008, 6)))
    mirrored = mirror_trend(finished, (MonthStamp(2009, 1), -50.0), duration=84)
    drawn = endpoint_trend((MonthStamp(2009, 1), -50.0), (MonthStamp(2016, 1), 75.0))
    print(f"finished trend slope: {finished.slope:+.2f}/yr")
    print(f"mirror reflection:    {mirrored.slope:+.2f}/yr")
    print(f"drawn through anchors:{drawn.slope:+.2f}/yr  (the one used below)")

    origin = MonthStamp(2009, 3)
    value = gap.value_at(origin)
    deviation = value - drawn.predicted(origin)
    print(f"\n{origin}: gap {value:+.1f}, {deviation:+.1f} above the successor trend")

    recovery = forecast_return_to_trend((origin, value), drawn, MonthStamp(2009, 12))
    print(f"closing {deviation:.0f} points in 9 months = {deviation / 9:.1f} per month:")
    for stamp, predicted in recovery.path:
        actual = gap.value_at(stamp)
        print(f"  {stamp}: predicted {predicted:+7.1f}   actual {actual:+7.1f}")

    actual = gap.restrict(MonthStamp(2009, 4), MonthStamp(2009, 12))
    mae_recovery = score(recovery, actual).mae
    baseline = forecast_along_trend(finished, origin, 9)
    mae_baseline = score(baseline, actual).mae
    print(f"\nmae: recovery {mae_recovery:.2f} vs continued old trend {mae_baseline:.2f}")

    swing = forecast_pendulum(
        (origin, value), drawn, amplitude=abs(deviation), half_period=9, horizon=18
    )
    print(
        f"\npendulum alternative would have swung to "
        f"{min(v for _, v in swing.path):+.1f} before rebounding"
    )


if __name__ == "__main__":
    main()
