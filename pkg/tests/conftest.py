"""Shared fixture loading for the test suite."""

from pathlib import Path

import pytest

from trendgap import DifferenceSeries, MonthStamp, difference, parse_series_csv

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_series(name: str, series_id: str):
    return parse_series_csv((FIXTURES / name).read_text(encoding="utf-8"), series_id)


@pytest.fixture(scope="session")
def motor_diff() -> DifferenceSeries:
    headline = load_series("cpi_all_items_sa.csv", "CUSR0000SA0")
    component = load_series("cpi_motor_fuel_sa.csv", "CUSR0000SETB")
    return difference(headline, component)


@pytest.fixture(scope="session")
def crude_diff() -> DifferenceSeries:
    headline = load_series("ppi_all_commodities.csv", "WPU00000000")
    component = load_series("ppi_crude_petroleum.csv", "WPU0561")
    return difference(headline, component)


@pytest.fixture(scope="session")
def motor_headline():
    return load_series("cpi_all_items_sa.csv", "CUSR0000SA0")


@pytest.fixture(scope="session")
def motor_component():
    return load_series("cpi_motor_fuel_sa.csv", "CUSR0000SETB")


def stamp(token: str) -> MonthStamp:
    return MonthStamp.parse(token)
