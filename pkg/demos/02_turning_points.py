#!/usr/bin/env python3
"""Finding the month where one trend ends and the opposite one begins.

Exact dynamic programming places the breakpoints that minimize the total
squared error of independent line fits; a transition window around each
break is excluded from fitting, since neither trend governs there.
"""

from pathlib import Path

from trendgap import (
    MonthStamp,
    build_trend_model,
    classify_deviation,
    detect_breakpoints,
    difference,
    parse_series_csv,
    select_breakpoint_count,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name, series_id):
    return parse_series_csv((FIXTURES / name).read_text(), series_id)


def main():
    gap = difference(
        load("cpi_all_items_sa.csv", "CUSR0000SA0"),
        load("cpi_motor_fuel_sa.csv", "CUSR0000SETB"),
    )
    # The months after mid-2008 are an unfinished transition; turning-point
    # search runs on the settled history.
    settled = gap.restrict(MonthStamp(1980, 1), MonthStamp(2008, 6))

    (turn,) = detect_breakpoints(settled, k=1, min_len=60)
    print(f"optimal single turning point: {turn}")

    k, points = select_breakpoint_count(settled, max_k=3, min_len=60)
    print(f"BIC-style convenience pick: k={k} at {[str(p) for p in points]}")

    model = build_trend_model(
        gap, [turn], transition_halfwidth=12, tail_start=MonthStamp(2008, 7)
    )
    print("\ntrend model:")
    for seg in model.segments:
        print(f"  trend {seg.start}..{seg.end}: slope {seg.slope:+6.2f}/yr, R^2 {seg.r_squared:.3f}")
    for w in model.transitions:
        print(f"  transition {w.start}..{w.end} ({w.duration_months} months)")

    print("\nwhere do individual months sit?")
    for token in ("1995-06", "2000-03", "2005-06", "2009-02"):
        stamp = MonthStamp.parse(token)
        got = classify_deviation(model, stamp, gap.value_at(stamp))
        z = "-" if got.z is None else f"{got.z:+.1f}"
        print(f"  {stamp}: {got.label:<13} z={z}")


if __name__ == "__main__":
    main()
