"""Lumped RC server temperature model and cooling overhead."""

from __future__ import annotations

from dataclasses import dataclass

from hapdc.errors import DomainError, StabilityError

KELVIN = 273.15
# stratospheric ambient band is -50..-15 degC; at or below the warm end no chiller runs
FREE_COOLING_AMBIENT_C = -15.0
# recommended inlet envelope for terrestrial rooms
ASHRAE_BAND_C = (18.0, 26.0)


@dataclass(frozen=True)
class ThermalParams:
    supply_temp_k: float = 299.15
    server_init_k: float = 310.0
    cpu_init_k: float = 318.0
    resistance_k_per_w: float = 0.34
    capacity_j_per_k: float = 340.0
    cooling_overhead: float = 40.0 / 56.0
    cpu_limit_k: float = 358.0

    def __post_init__(self):
        for name in ("supply_temp_k", "server_init_k", "cpu_init_k", "cpu_limit_k"):
            if not getattr(self, name) > 0:
                raise DomainError(f"ThermalParams.{name} must be > 0 K")
        if not self.resistance_k_per_w > 0:
            raise DomainError("ThermalParams.resistance_k_per_w must be > 0")
        if not self.capacity_j_per_k > 0:
            raise DomainError("ThermalParams.capacity_j_per_k must be > 0")
        if not self.cooling_overhead >= 0:
            raise DomainError("ThermalParams.cooling_overhead must be >= 0")

    @property
    def time_constant_s(self) -> float:
        return self.resistance_k_per_w * self.capacity_j_per_k


def temp_step(t_k: float, power_w: float, p: ThermalParams, dt_s: float) -> float:
    """One explicit-Euler step of C dT/dt = P - (T - T_supply) / R."""
    if not dt_s > 0:
        raise DomainError("dt_s must be > 0")
    if dt_s >= p.time_constant_s:
        raise StabilityError(
            f"dt_s={dt_s} must be below R*C={p.time_constant_s} for a stable step"
        )
    flow = power_w - (t_k - p.supply_temp_k) / p.resistance_k_per_w
    return t_k + dt_s * flow / p.capacity_j_per_k


def simulate_temperature(t0_k, power_w, p: ThermalParams, dt_s, duration_s):
    """Temperature after holding ``power_w`` for ``duration_s`` seconds."""
    t = t0_k
    n = int(round(duration_s / dt_s))
    for _ in range(n):
        t = temp_step(t, power_w, p, dt_s)
    return t


def steady_state_temp(power_w: float, p: ThermalParams) -> float:
    if power_w < 0:
        raise DomainError("power_w must be >= 0")
    return p.supply_temp_k + p.resistance_k_per_w * power_w


def within_cpu_limit(power_w: float, p: ThermalParams) -> bool:
    return steady_state_temp(power_w, p) <= p.cpu_limit_k


def cooling_energy(compute_energy_kwh: float, p: ThermalParams) -> float:
    if compute_energy_kwh < 0:
        raise DomainError("compute_energy_kwh must be >= 0")
    return p.cooling_overhead * compute_energy_kwh


def cooling_overhead_at(ambient_c: float, p: ThermalParams) -> float:
    """Overhead ratio that applies for a given outside air temperature."""
    if ambient_c <= FREE_COOLING_AMBIENT_C:
        return 0.0
    return p.cooling_overhead
