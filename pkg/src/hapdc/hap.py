"""HAP platform: payload, propulsion, batteries and the daily flying condition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from hapdc.errors import DomainError
from hapdc.solar import GeoDay, PvConfig, daily_harvest_kwh, daylight_hours
from hapdc.workload import ServerSpec, WorkloadSpec, server_power, task_service_rate

HOURS_PER_DAY = 24.0


@dataclass(frozen=True)
class HapConfig:
    max_payload_kg: float = 450.0
    pv: PvConfig = field(default_factory=PvConfig)
    propeller_efficiency: float = 0.8
    battery_kwh_per_kg: float = 2.0
    battery_mass_kg: float = 0.0
    drag_area_m2: float = 50.0
    wind_speed_mps: float = 10.0
    air_density_kg_m3: float = 0.0889
    depth_of_discharge: float = 0.9
    # scales the ideal harvest to reach energy-bound regimes
    harvest_derating: float = 1.0
    comm_power_w: float = 200.0
    battery_counts_against_payload: bool = True
    max_queue_utilization: float = 0.99

    def __post_init__(self):
        if not self.max_payload_kg > 0:
            raise DomainError("HapConfig.max_payload_kg must be > 0")
        if not 0 < self.propeller_efficiency <= 1:
            raise DomainError("HapConfig.propeller_efficiency must lie in (0, 1]")
        if not self.battery_kwh_per_kg > 0:
            raise DomainError("HapConfig.battery_kwh_per_kg must be > 0")
        if not self.battery_mass_kg >= 0:
            raise DomainError("HapConfig.battery_mass_kg must be >= 0")
        for name in ("drag_area_m2", "wind_speed_mps", "air_density_kg_m3", "comm_power_w"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"HapConfig.{name} must be >= 0")
        if not 0 < self.depth_of_discharge <= 1:
            raise DomainError("HapConfig.depth_of_discharge must lie in (0, 1]")
        if not 0 <= self.harvest_derating <= 1:
            raise DomainError("HapConfig.harvest_derating must lie in [0, 1]")
        if not 0 < self.max_queue_utilization < 1:
            raise DomainError("HapConfig.max_queue_utilization must lie in (0, 1)")


@dataclass(frozen=True)
class FlyingConditionResult:
    feasible: bool
    max_utilization: float
    max_arrival_rate: float
    energy_margin_kwh: float
    harvest_kwh: float = 0.0
    consumption_kwh: float = 0.0


def max_servers(cfg: HapConfig, server: ServerSpec) -> int:
    battery = cfg.battery_mass_kg if cfg.battery_counts_against_payload else 0.0
    room = cfg.max_payload_kg - battery
    if room <= 0:
        return 0
    return math.floor(room / server.mass_kg)


def propulsion_power_w(cfg: HapConfig) -> float:
    """Station-keeping power against a steady head wind [W]."""
    drag_power = 0.5 * cfg.air_density_kg_m3 * cfg.drag_area_m2 * cfg.wind_speed_mps**3
    return drag_power / cfg.propeller_efficiency


def usable_harvest_kwh(cfg: HapConfig, geo: GeoDay) -> float:
    return daily_harvest_kwh(geo, cfg.pv) * cfg.harvest_derating


def daily_consumption_kwh(cfg, n_servers, server, rho, link_energy_w) -> float:
    watts = propulsion_power_w(cfg) + n_servers * server_power(server, rho) + link_energy_w
    return HOURS_PER_DAY * watts / 1000.0


def flying_condition(
    cfg: HapConfig,
    geo: GeoDay,
    n_servers: int,
    server: ServerSpec,
    workload: WorkloadSpec,
    link_energy_w: float | None = None,
) -> FlyingConditionResult:
    """Largest per-server utilization the daily energy budget sustains.

    Solves harvest = 24 h * (propulsion + n * P(rho) + comm) for rho; the
    platform is feasible iff the harvest covers the all-idle baseline.
    """
    if n_servers < 0:
        raise DomainError("n_servers must be >= 0")
    cap = max_servers(cfg, server)
    if n_servers > cap:
        raise DomainError(f"n_servers={n_servers} exceeds payload cap of {cap}")
    comm_w = cfg.comm_power_w if link_energy_w is None else link_energy_w

    harvest = usable_harvest_kwh(cfg, geo)
    baseline = daily_consumption_kwh(cfg, n_servers, server, 0.0, comm_w)
    if harvest < baseline:
        return FlyingConditionResult(False, 0.0, 0.0, harvest - baseline, harvest, baseline)
    if n_servers == 0:
        return FlyingConditionResult(True, 0.0, 0.0, harvest - baseline, harvest, baseline)

    dynamic_w = (1.0 - server.idle_fraction) * server.peak_power_w
    spare_w = (harvest - baseline) * 1000.0 / HOURS_PER_DAY
    if dynamic_w == 0.0:
        rho = 1.0
    else:
        rho = min(1.0, spare_w / (n_servers * dynamic_w))
    used = daily_consumption_kwh(cfg, n_servers, server, rho, comm_w)

    queue_rho = min(rho, cfg.max_queue_utilization)
    rate = n_servers * queue_rho * task_service_rate(workload, server)
    # unclamped solutions balance exactly; drop round-off below zero
    return FlyingConditionResult(True, rho, rate, max(0.0, harvest - used), harvest, used)


def battery_capacity_kwh(cfg: HapConfig) -> float:
    return cfg.battery_mass_kg * cfg.battery_kwh_per_kg * cfg.depth_of_discharge


def night_energy_kwh(geo: GeoDay, total_night_power_w: float) -> float:
    night = HOURS_PER_DAY - daylight_hours(geo)
    return total_night_power_w * night / 1000.0


def battery_night_feasible(cfg: HapConfig, geo: GeoDay, total_night_power_w: float) -> bool:
    return night_energy_kwh(geo, total_night_power_w) <= battery_capacity_kwh(cfg)


def required_battery_mass_kg(cfg: HapConfig, night_energy: float) -> float:
    return night_energy / (cfg.battery_kwh_per_kg * cfg.depth_of_discharge)
