"""Solar geometry and daily PV harvest above the cloud layer.

Irradiance is the extraterrestrial clear-sky value projected on a horizontal
surface; an optional transmittance scales it when a lossy atmosphere is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from hapdc.errors import DomainError

SOLAR_CONSTANT_W_M2 = 1361.0
MAX_DECLINATION_DEG = 23.45
DAYS_PER_YEAR = 365
SECONDS_PER_DAY = 86400.0
MAX_STEP_S = 60.0


def _check_day(day_of_year) -> int:
    if isinstance(day_of_year, bool) or int(day_of_year) != day_of_year:
        raise DomainError(f"day_of_year must be an integer, got {day_of_year!r}")
    day = int(day_of_year)
    if not 1 <= day <= DAYS_PER_YEAR:
        raise DomainError(f"day_of_year must lie in [1, {DAYS_PER_YEAR}], got {day}")
    return day


@dataclass(frozen=True)
class GeoDay:
    latitude_deg: float
    day_of_year: int

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise DomainError(
                f"GeoDay.latitude_deg must lie in [-90, 90], got {self.latitude_deg}"
            )
        object.__setattr__(self, "day_of_year", _check_day(self.day_of_year))

    @property
    def latitude_rad(self) -> float:
        return math.radians(self.latitude_deg)


@dataclass(frozen=True)
class PvConfig:
    area_m2: float = 8000.0
    efficiency: float = 0.4
    transmittance: float = 1.0

    def __post_init__(self):
        if not self.area_m2 > 0:
            raise DomainError(f"PvConfig.area_m2 must be > 0, got {self.area_m2}")
        if not 0 < self.efficiency <= 1:
            raise DomainError(
                f"PvConfig.efficiency must lie in (0, 1], got {self.efficiency}"
            )
        if not 0 <= self.transmittance <= 1:
            raise DomainError(
                f"PvConfig.transmittance must lie in [0, 1], got {self.transmittance}"
            )


def solar_declination(day_of_year: int) -> float:
    """Declination in radians (Cooper's approximation)."""
    day = _check_day(day_of_year)
    return math.radians(MAX_DECLINATION_DEG) * math.sin(
        2.0 * math.pi * (284 + day) / DAYS_PER_YEAR
    )


def sunset_hour_angle(geo: GeoDay) -> float:
    """Sunset hour angle in radians, clamped for polar day and night."""
    delta = solar_declination(geo.day_of_year)
    x = -math.tan(geo.latitude_rad) * math.tan(delta)
    return math.acos(min(1.0, max(-1.0, x)))


def daylight_hours(geo: GeoDay) -> float:
    return 24.0 * sunset_hour_angle(geo) / math.pi


@lru_cache(maxsize=8192)
def daily_insolation_kwh_m2(geo: GeoDay, transmittance: float = 1.0) -> float:
    """Horizontal-surface insolation over one day, by trapezoid in time.

    The daylight window [-omega_s, omega_s] is split into equal steps no longer
    than one minute.
    """
    omega_s = sunset_hour_angle(geo)
    if omega_s == 0.0:
        return 0.0
    daylight_s = SECONDS_PER_DAY * omega_s / math.pi
    n_steps = max(2, math.ceil(daylight_s / MAX_STEP_S))
    omega = np.linspace(-omega_s, omega_s, n_steps + 1)

    phi = geo.latitude_rad
    delta = solar_declination(geo.day_of_year)
    cos_zenith = math.sin(phi) * math.sin(delta) + math.cos(phi) * math.cos(
        delta
    ) * np.cos(omega)
    irradiance = SOLAR_CONSTANT_W_M2 * transmittance * np.maximum(cos_zenith, 0.0)

    dt = daylight_s / n_steps
    joules = dt * (irradiance.sum() - 0.5 * (irradiance[0] + irradiance[-1]))
    return float(joules) / 3.6e6


def daily_harvest_kwh(geo: GeoDay, pv: PvConfig) -> float:
    """Electrical energy harvested by the PV surface in one day [kWh]."""
    per_m2 = daily_insolation_kwh_m2(geo, pv.transmittance)
    return per_m2 * pv.area_m2 * pv.efficiency
