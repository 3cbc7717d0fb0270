import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hapdc.errors import DomainError
from hapdc.solar import (
    GeoDay,
    PvConfig,
    daily_harvest_kwh,
    daily_insolation_kwh_m2,
    daylight_hours,
    solar_declination,
)
from oracles import closed_form_insolation_kwh_m2

TABLE_PV = PvConfig(8000.0, 0.4)


def test_declination_equinox_and_solstices():
    assert abs(solar_declination(81)) < 0.01
    assert solar_declination(172) == pytest.approx(0.4093, abs=1e-4)
    assert solar_declination(355) == pytest.approx(-0.4093, abs=1e-4)


@pytest.mark.parametrize("day", [0, 366, -4, 2.5])
def test_declination_rejects_bad_days(day):
    with pytest.raises(DomainError):
        solar_declination(day)


@given(st.integers(1, 365))
def test_declination_bounded(day):
    assert abs(solar_declination(day)) <= math.radians(23.45) + 1e-12


def test_geoday_validation():
    GeoDay(-90.0, 1)
    GeoDay(90.0, 365)
    with pytest.raises(DomainError):
        GeoDay(90.5, 1)
    with pytest.raises(DomainError):
        GeoDay(0.0, 366)


def test_pvconfig_validation():
    with pytest.raises(DomainError):
        PvConfig(0.0, 0.4)
    with pytest.raises(DomainError):
        PvConfig(10.0, 1.5)
    with pytest.raises(DomainError):
        PvConfig(10.0, 0.0)


def test_daylight_limits():
    assert daylight_hours(GeoDay(0, 81)) == pytest.approx(12.0, abs=0.1)
    assert daylight_hours(GeoDay(80, 355)) == 0.0
    assert daylight_hours(GeoDay(80, 172)) == 24.0


def test_polar_night_harvest_is_zero():
    assert daily_harvest_kwh(GeoDay(80, 355), TABLE_PV) == 0.0
    assert daily_harvest_kwh(GeoDay(80, 355), PvConfig(1.0, 1.0)) == 0.0


def test_equator_equinox_harvest_matches_closed_form():
    expected = closed_form_insolation_kwh_m2(0, 81) * 8000 * 0.4
    got = daily_harvest_kwh(GeoDay(0, 81), TABLE_PV)
    assert got == pytest.approx(expected, rel=1e-4)
    assert got == pytest.approx(33_275, rel=2e-3)


def test_doubling_area_doubles_exactly():
    geo = GeoDay(33.0, 140)
    one = daily_harvest_kwh(geo, PvConfig(8000.0, 0.4))
    two = daily_harvest_kwh(geo, PvConfig(16000.0, 0.4))
    assert two == 2 * one


def test_transmittance_scales_harvest():
    geo = GeoDay(10.0, 200)
    full = daily_harvest_kwh(geo, TABLE_PV)
    half = daily_harvest_kwh(geo, PvConfig(8000.0, 0.4, transmittance=0.5))
    assert half == pytest.approx(0.5 * full, rel=1e-12)


@given(st.floats(-90, 90), st.integers(1, 365))
@settings(max_examples=60)
def test_harvest_non_negative(lat, day):
    assert daily_harvest_kwh(GeoDay(lat, day), TABLE_PV) >= 0.0


@given(st.floats(-85, 85), st.integers(1, 365), st.floats(0.05, 1.0))
@settings(max_examples=40)
def test_harvest_linear_in_efficiency(lat, day, eff):
    geo = GeoDay(lat, day)
    ref = daily_harvest_kwh(geo, PvConfig(100.0, 1.0))
    assert daily_harvest_kwh(geo, PvConfig(100.0, eff)) == pytest.approx(eff * ref, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("lat", range(-60, 61, 5))
def test_numeric_integral_matches_closed_form_all_days(lat):
    worst = 0.0
    for day in range(1, 366):
        exact = closed_form_insolation_kwh_m2(lat, day)
        got = daily_insolation_kwh_m2(GeoDay(float(lat), day))
        worst = max(worst, abs(got - exact) / exact)
    assert worst < 0.005


@pytest.mark.parametrize("lat", [25.0, 35.0, 50.0, 65.0])
def test_northern_june_beats_december(lat):
    june = daily_harvest_kwh(GeoDay(lat, 172), TABLE_PV)
    dec = daily_harvest_kwh(GeoDay(lat, 355), TABLE_PV)
    assert june >= dec


@pytest.mark.parametrize("lat", [0.0, 15.0, 40.0, 66.0])
def test_hemisphere_symmetry(lat):
    north = daily_harvest_kwh(GeoDay(lat, 172), TABLE_PV)
    south = daily_harvest_kwh(GeoDay(-lat, 355), TABLE_PV)
    assert north == pytest.approx(south, rel=1e-3)
