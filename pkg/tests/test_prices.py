"""Index-to-price translation and lead-lag estimation."""

import numpy as np
import pytest

from trendgap import (
    CRUDE_OIL_HEURISTIC,
    DifferenceSeries,
    Forecast,
    MonthlySeries,
    MonthStamp,
    PriceError,
    calibrate_price,
    component_index_from_difference,
    difference,
    extrapolate_headline,
    index_to_price,
    lead_lag,
    parse_calibration_pairs_csv,
    percent_change,
    trailing_growth_rate,
)


def make_monthly(series_id, start, values):
    origin = MonthStamp.parse(start)
    obs = tuple((origin.add_months(i), float(v)) for i, v in enumerate(values))
    return MonthlySeries(series_id, "", obs)


def make_diff(start, values, name="d"):
    origin = MonthStamp.parse(start)
    obs = tuple((origin.add_months(i), float(v)) for i, v in enumerate(values))
    return DifferenceSeries(name + "-m", name + "-s", obs)


class TestPercentChange:
    def test_motor_fuel_recovery_is_fifty_two_percent(self):
        pct = percent_change(173.0, 263.0)
        assert round(pct, 1) == 52.0
        assert pct == pytest.approx(100.0 * 90.0 / 173.0)

    def test_identity(self):
        assert percent_change(140.0, 140.0) == 0.0

    def test_fifty_percent(self):
        assert percent_change(100.0, 150.0) == pytest.approx(50.0)

    def test_non_positive_start(self):
        with pytest.raises(PriceError):
            percent_change(0.0, 100.0)

    def test_inverse_composition(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            x, y = rng.uniform(10, 400, 2)
            p1 = percent_change(x, y)
            p2 = percent_change(y, x)
            assert (1 + p1 / 100.0) * (1 + p2 / 100.0) == pytest.approx(1.0, abs=1e-9)


def make_forecast(start, values):
    origin = MonthStamp.parse(start).add_months(-1)
    path = tuple(
        (MonthStamp.parse(start).add_months(i), float(v)) for i, v in enumerate(values)
    )
    return Forecast(mode="along-trend", origin=origin, path=path, band_sigma=0.0)


class TestComponentFromDifference:
    def test_flat_headline_recovery_scenario(self):
        # difference falls from +39 by 10 points a month while the headline
        # holds at 212: the component climbs from 173 to 263 by December.
        diff_path = make_forecast("2009-04", [39.0 - 10.0 * k for k in range(1, 10)])
        headline = [(s, 212.0) for s in diff_path.stamps]
        component = component_index_from_difference(headline, diff_path)
        assert component[0][1] == pytest.approx(183.0)
        assert component[-1][0] == MonthStamp(2009, 12)
        assert component[-1][1] == pytest.approx(263.0)
        assert percent_change(173.0, component[-1][1]) == pytest.approx(52.0, abs=0.1)

    def test_zero_difference_returns_headline(self):
        diff_path = make_forecast("2010-01", [0.0] * 6)
        headline = [(s, 150.0 + i) for i, s in enumerate(diff_path.stamps)]
        component = component_index_from_difference(headline, diff_path)
        assert [v for _, v in component] == [v for _, v in headline]

    def test_random_paths_match_elementwise_oracle(self):
        rng = np.random.default_rng(23)
        hv = rng.uniform(150, 250, 12)
        dv = rng.uniform(-80, 80, 12)
        diff_path = make_forecast("2010-01", dv)
        headline = [(s, h) for s, h in zip(diff_path.stamps, hv)]
        component = component_index_from_difference(headline, diff_path)
        for (stamp, value), h, d in zip(component, hv, dv):
            assert value == h - d

    def test_stamp_mismatch_rejected(self):
        diff_path = make_forecast("2010-01", [1.0, 2.0])
        headline = [(MonthStamp(2010, 3), 100.0), (MonthStamp(2010, 4), 100.0)]
        with pytest.raises(PriceError, match="identical stamps"):
            component_index_from_difference(headline, diff_path)

    def test_re_differencing_recovers_path(self):
        rng = np.random.default_rng(29)
        dv = rng.uniform(-50, 50, 9)
        diff_path = make_forecast("2010-01", dv)
        headline = [(s, 200.0 + i) for i, s in enumerate(diff_path.stamps)]
        component = component_index_from_difference(headline, diff_path)
        head_series = MonthlySeries("h", "", tuple(headline))
        comp_series = MonthlySeries("c", "", tuple(component))
        rediff = difference(head_series, comp_series)
        for (_, value), original in zip(rediff.observations, dv):
            assert value == pytest.approx(original, rel=1e-12)


class TestExtrapolateHeadline:
    def test_zero_rate_is_flat(self):
        s = make_monthly("h", "2009-01", [212.0, 212.5, 213.0])
        path = extrapolate_headline(s, MonthStamp(2009, 3), 6, 0.0)
        assert all(v == 213.0 for _, v in path)

    def test_twelve_percent_over_a_year(self):
        s = make_monthly("h", "2009-01", [100.0])
        path = extrapolate_headline(s, MonthStamp(2009, 1), 12, 12.0)
        assert path[-1][0] == MonthStamp(2010, 1)
        assert path[-1][1] == pytest.approx(112.0, abs=1e-9)

    def test_matches_iterative_compounding_oracle(self):
        s = make_monthly("h", "2009-01", [170.0])
        rate = 7.3
        path = extrapolate_headline(s, MonthStamp(2009, 1), 24, rate)
        value = 170.0
        monthly = (1 + rate / 100.0) ** (1 / 12.0)
        for _, got in path:
            value *= monthly
            assert got == pytest.approx(value, rel=1e-9)

    def test_origin_absent(self):
        s = make_monthly("h", "2009-01", [100.0])
        with pytest.raises(PriceError, match="absent"):
            extrapolate_headline(s, MonthStamp(2010, 1), 3, 1.0)

    def test_trailing_growth_rate(self):
        values = [100.0 * 1.03 ** (i / 12.0) for i in range(72)]
        s = make_monthly("h", "2004-01", values)
        rate = trailing_growth_rate(s, MonthStamp(2009, 12), years=5)
        assert rate == pytest.approx(3.0, abs=0.01)


class TestCalibration:
    def test_exact_line(self):
        pairs = [(float(i), float(i)) for i in range(5)]
        cal = calibrate_price(pairs)
        assert cal.alpha == pytest.approx(1.0, abs=1e-12)
        assert cal.beta == pytest.approx(0.0, abs=1e-12)
        assert cal.fit_r_squared == pytest.approx(1.0)
        assert cal.source == "fitted"

    def test_heuristic_constant(self):
        assert CRUDE_OIL_HEURISTIC.source == "heuristic"
        assert CRUDE_OIL_HEURISTIC.fit_r_squared is None
        assert index_to_price(CRUDE_OIL_HEURISTIC, -120.0) == 120.0
        assert index_to_price(CRUDE_OIL_HEURISTIC, -75.0) == 75.0

    def test_noisy_pairs_match_normal_equations(self):
        rng = np.random.default_rng(31)
        xs = rng.uniform(-140, -20, 20)
        ys = -xs + rng.normal(0, 1.0, 20)
        cal = calibrate_price(list(zip(xs, ys)))
        xbar, ybar = xs.mean(), ys.mean()
        slope = np.sum((xs - xbar) * (ys - ybar)) / np.sum((xs - xbar) ** 2)
        intercept = ybar - slope * xbar
        assert cal.alpha == pytest.approx(slope, rel=1e-9)
        assert cal.beta == pytest.approx(intercept, rel=1e-9, abs=1e-9)

    def test_calibration_residuals_match_r_squared(self):
        rng = np.random.default_rng(33)
        xs = rng.uniform(-140, -20, 30)
        ys = -0.9 * xs + 4.0 + rng.normal(0, 2.0, 30)
        cal = calibrate_price(list(zip(xs, ys)))
        predicted = np.array([index_to_price(cal, x) for x in xs])
        sse = float(np.sum((ys - predicted) ** 2))
        sst = float(np.sum((ys - ys.mean()) ** 2))
        assert 1.0 - sse / sst == pytest.approx(cal.fit_r_squared, abs=1e-12)

    def test_degenerate_pairs_rejected(self):
        with pytest.raises(PriceError, match="distinct"):
            calibrate_price([(1.0, 2.0), (1.0, 3.0)])

    def test_identity_on_zero(self):
        cal = calibrate_price([(0.0, 0.0), (1.0, 1.0)])
        assert index_to_price(cal, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_pairs_csv_round_trip(self):
        text = "index,price_usd\n-120.0,119.4\n-75.0,74.8\n"
        pairs = parse_calibration_pairs_csv(text)
        assert pairs == [(-120.0, 119.4), (-75.0, 74.8)]
        with pytest.raises(PriceError, match="header"):
            parse_calibration_pairs_csv("a,b\n1,2\n")

    def test_json_fields(self):
        cal = calibrate_price([(0.0, 1.0), (2.0, 3.0)])
        doc = cal.to_dict()
        assert set(doc) == {"alpha", "beta", "fit_r_squared", "source"}


def shifted_pair(lag_months, n=60, seed=41):
    """A noisy random walk and its exact copy shifted ``lag_months`` later."""
    rng = np.random.default_rng(seed)
    walk = np.cumsum(rng.normal(0, 3.0, n + abs(lag_months)))
    start = MonthStamp(2000, 1)
    a = make_diff("2000-01", walk[:n], "a")
    b_obs = tuple(
        (start.add_months(i + lag_months), float(v)) for i, v in enumerate(walk[:n])
    )
    return a, DifferenceSeries("b-m", "b-s", b_obs)


class TestLeadLag:
    def test_exact_shift_recovered(self):
        a, b = shifted_pair(7)
        lag, corr = lead_lag(a, b, 12)
        assert lag == 7
        assert corr == pytest.approx(1.0)

    def test_self_correlation_is_zero_lag(self):
        a, _ = shifted_pair(0)
        lag, corr = lead_lag(a, a, 12)
        assert lag == 0
        assert corr == pytest.approx(1.0)

    def test_antisymmetry(self):
        a, b = shifted_pair(5)
        lag_ab, corr_ab = lead_lag(a, b, 10)
        lag_ba, corr_ba = lead_lag(b, a, 10)
        assert lag_ab == -lag_ba == 5
        assert corr_ab == pytest.approx(corr_ba, abs=1e-12)

    def test_insufficient_overlap(self):
        a, b = shifted_pair(3, n=30)
        with pytest.raises(PriceError, match="insufficient overlap"):
            lead_lag(a, b, 12)

    def test_negative_planted_lag(self):
        a, b = shifted_pair(-6)
        lag, corr = lead_lag(a, b, 12)
        assert lag == -6
        assert corr == pytest.approx(1.0)

    def test_detrended_variant_runs(self):
        a, b = shifted_pair(4)
        lag, corr = lead_lag(a, b, 8, detrend=True)
        assert lag == 4
        assert corr == pytest.approx(1.0, abs=1e-6)
