"""Series parsing, alignment, differencing and rebasing."""

import numpy as np
import pytest

from trendgap import (
    MonthlySeries,
    MonthStamp,
    ParseError,
    SeriesError,
    align,
    difference,
    months_between,
    parse_series_csv,
    rebase,
    series_to_csv,
)


def make_series(series_id, start, values):
    origin = MonthStamp.parse(start)
    obs = tuple((origin.add_months(i), float(v)) for i, v in enumerate(values))
    return MonthlySeries(series_id, "", obs)


class TestMonthStamp:
    def test_ordering_is_strict_by_year_month(self):
        stamps = [MonthStamp(2000, 12), MonthStamp(2001, 1), MonthStamp(2000, 1)]
        assert sorted(stamps) == [
            MonthStamp(2000, 1),
            MonthStamp(2000, 12),
            MonthStamp(2001, 1),
        ]
        assert MonthStamp(2000, 1) < MonthStamp(2000, 2)
        assert not MonthStamp(2000, 1) < MonthStamp(2000, 1)

    def test_fractional_time_is_monotone(self):
        stamps = [MonthStamp(1999, 11).add_months(i) for i in range(30)]
        ts = [s.t for s in stamps]
        assert all(a < b for a, b in zip(ts, ts[1:]))
        assert MonthStamp(2000, 1).t == 2000.0

    def test_month_bounds(self):
        with pytest.raises(ValueError):
            MonthStamp(2000, 0)
        with pytest.raises(ValueError):
            MonthStamp(2000, 13)

    def test_add_months_round_trip(self):
        s = MonthStamp(2009, 3)
        assert s.add_months(10) == MonthStamp(2010, 1)
        assert s.add_months(10).add_months(-10) == s
        assert months_between(s.add_months(37), s) == 37

    def test_str_and_parse(self):
        assert str(MonthStamp(2009, 3)) == "2009-03"
        assert MonthStamp.parse("2009-03") == MonthStamp(2009, 3)
        with pytest.raises(ValueError):
            MonthStamp.parse("2009-3")


class TestParseCsv:
    def test_single_row(self):
        series = parse_series_csv("date,value\n1997-12,161.8", "cpi")
        assert series.observations == ((MonthStamp(1997, 12), 161.8),)
        assert series.series_id == "cpi"

    def test_empty_body_is_an_error(self):
        with pytest.raises(ParseError, match="empty series"):
            parse_series_csv("date,value\n", "x")

    def test_rows_out_of_order_are_sorted(self):
        series = parse_series_csv("date,value\n1998-02,2.0\n1998-01,1.0", "x")
        assert series.stamps == (MonthStamp(1998, 1), MonthStamp(1998, 2))
        assert series.values == (1.0, 2.0)

    def test_crlf_and_blank_lines(self):
        series = parse_series_csv("date,value\r\n1998-01,1.0\r\n\r\n1998-02,2.0\r\n", "x")
        assert len(series) == 2

    def test_malformed_date_reports_line(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_series_csv("date,value\n1998-01,1.0\n1998-13,2.0", "x")

    def test_duplicate_month_reports_line(self):
        with pytest.raises(ParseError, match="duplicate month"):
            parse_series_csv("date,value\n1998-01,1.0\n1998-01,2.0", "x")

    def test_non_numeric_value(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_series_csv("date,value\n1998-01,abc", "x")

    def test_non_finite_value(self):
        with pytest.raises(ParseError, match="non-finite"):
            parse_series_csv("date,value\n1998-01,nan", "x")

    def test_bad_header(self):
        with pytest.raises(ParseError, match="header"):
            parse_series_csv("month,val\n1998-01,1.0", "x")

    def test_round_trip_through_csv(self):
        series = make_series("x", "2001-11", [100.0, 101.5, 99.25])
        again = parse_series_csv(series_to_csv(series), "x")
        assert again.observations == series.observations

    def test_gaps_are_permitted_but_reported(self):
        series = parse_series_csv("date,value\n1998-01,1.0\n1998-04,2.0", "x")
        assert series.missing_months() == (MonthStamp(1998, 2), MonthStamp(1998, 3))
        assert not series.is_contiguous()


class TestAlign:
    def test_partial_overlap(self):
        a = make_series("a", "1980-01", range(372))  # through 2010-12
        b = make_series("b", "1985-01", range(312))
        aa, bb = align(a, b)
        assert aa.stamps == bb.stamps
        assert aa.start == MonthStamp(1985, 1)
        assert aa.end == MonthStamp(2010, 12)

    def test_identical_coverage_is_identity(self):
        a = make_series("a", "2000-01", [1, 2, 3])
        b = make_series("b", "2000-01", [4, 5, 6])
        aa, bb = align(a, b)
        assert aa.observations == a.observations
        assert bb.observations == b.observations

    def test_disjoint_coverage_fails(self):
        a = make_series("a", "2000-01", [1, 2])
        b = make_series("b", "2005-01", [1, 2])
        with pytest.raises(SeriesError, match="no overlapping months"):
            align(a, b)

    def test_commutative_and_idempotent(self):
        rng = np.random.default_rng(7)
        a = make_series("a", "2000-01", rng.normal(100, 5, 40))
        b = make_series("b", "2001-06", rng.normal(100, 5, 40))
        ab = align(a, b)
        ba = align(b, a)
        assert ab[0].observations == ba[1].observations
        assert ab[1].observations == ba[0].observations
        again = align(*ab)
        assert again[0].observations == ab[0].observations


class TestDifference:
    def test_identical_series_gives_zero(self):
        a = make_series("a", "2000-01", [10, 20, 30])
        d = difference(a, a)
        assert all(v == 0.0 for v in d.values)

    def test_communication_start_level(self):
        cpi = make_series("cpi", "1997-12", [161.8])
        comm = make_series("communication", "1997-12", [100.0])
        d = difference(cpi, comm)
        assert d.values[0] == pytest.approx(61.8, rel=1e-12)
        assert d.minuend_id == "cpi"
        assert d.subtrahend_id == "communication"

    def test_random_pair_matches_elementwise_oracle(self):
        rng = np.random.default_rng(11)
        av = rng.normal(150, 10, 10)
        bv = rng.normal(100, 10, 10)
        a = make_series("a", "2003-05", av)
        b = make_series("b", "2003-05", bv)
        d = difference(a, b)
        for (stamp, value), x, y in zip(d.observations, av, bv):
            assert value == x - y

    def test_difference_plus_subtrahend_recovers_minuend(self):
        rng = np.random.default_rng(13)
        a = make_series("a", "1990-01", rng.normal(120, 8, 60))
        b = make_series("b", "1991-01", rng.normal(90, 8, 60))
        d = difference(a, b)
        for stamp, value in d.observations:
            recovered = value + b.value_at(stamp)
            assert recovered == pytest.approx(a.value_at(stamp), rel=1e-12)


class TestRebase:
    def test_rebase_to_current_value_is_identity(self):
        a = make_series("a", "2000-01", [100.0, 110.0, 121.0])
        anchor = MonthStamp(2000, 1)
        out = rebase(a, anchor, 100.0)
        assert out.values == a.values

    def test_linear_scaling(self):
        a = make_series("a", "2000-01", [100.0, 110.0, 121.0])
        out = rebase(a, MonthStamp(2000, 1), 200.0)
        assert out.values == pytest.approx((200.0, 220.0, 242.0), rel=1e-12)
        assert out.value_at(MonthStamp(2000, 1)) == 200.0

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        a = make_series("a", "1995-01", rng.uniform(50, 200, 24))
        anchor = MonthStamp(1995, 7)
        there = rebase(a, anchor, 500.0)
        back = rebase(there, anchor, a.value_at(anchor))
        for v0, v1 in zip(a.values, back.values):
            assert v1 == pytest.approx(v0, rel=1e-12)

    def test_ratios_are_preserved(self):
        rng = np.random.default_rng(5)
        a = make_series("a", "1995-01", rng.uniform(50, 200, 12))
        out = rebase(a, MonthStamp(1995, 3), 777.0)
        for i in range(len(a) - 1):
            before = a.values[i + 1] / a.values[i]
            after = out.values[i + 1] / out.values[i]
            assert after == pytest.approx(before, rel=1e-12)

    def test_missing_anchor(self):
        a = make_series("a", "2000-01", [1.0, 2.0])
        with pytest.raises(SeriesError, match="absent"):
            rebase(a, MonthStamp(1999, 1), 100.0)

    def test_zero_anchor_value(self):
        a = make_series("a", "2000-01", [0.0, 2.0])
        with pytest.raises(SeriesError, match="zero"):
            rebase(a, MonthStamp(2000, 1), 100.0)


class TestInvariants:
    def test_values_must_be_finite(self):
        with pytest.raises(SeriesError, match="non-finite"):
            MonthlySeries("x", "", ((MonthStamp(2000, 1), float("inf")),))

    def test_duplicate_stamps_rejected(self):
        obs = ((MonthStamp(2000, 1), 1.0), (MonthStamp(2000, 1), 2.0))
        with pytest.raises(SeriesError, match="strictly increasing"):
            MonthlySeries("x", "", obs)
