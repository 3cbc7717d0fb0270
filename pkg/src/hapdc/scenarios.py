"""Deployment scenarios: dispatch, electricity cost, savings and delays."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Sequence

from hapdc import link as link_model
from hapdc.errors import DomainError, InfeasibleError
from hapdc.hap import FlyingConditionResult, HapConfig, flying_condition
from hapdc.solar import DAYS_PER_YEAR, GeoDay
from hapdc.thermal import ThermalParams, cooling_energy
from hapdc.workload import (
    ServerSpec,
    WorkloadSpec,
    mm1_sojourn,
    server_power,
    task_service_rate,
)

SECONDS_PER_DAY = 86400.0


class ScenarioKind(str, enum.Enum):
    TERRESTRIAL_ONLY = "terrestrial"
    SINGLE_HAP = "single-hap"
    MULTI_HAP = "multi-hap"


class Control(str, enum.Enum):
    CENTRALIZED = "centralized"
    DISTRIBUTED = "distributed"


class OfferedPolicy(str, enum.Enum):
    MAX_RATE = "max_rate"
    FIXED = "fixed"


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind = ScenarioKind.SINGLE_HAP
    hap_count: int = 1
    airborne_servers_per_hap: int = 40
    terrestrial_servers: int = 190
    control: Control = Control.CENTRALIZED
    # terrestrial utilization kept on the ground at the max-rate evaluation point
    terrestrial_load_fraction: float = 0.05
    controller_response_s: float = 5e-3
    coordination_overhead_s: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        object.__setattr__(self, "control", Control(self.control))
        if self.kind is ScenarioKind.TERRESTRIAL_ONLY:
            object.__setattr__(self, "hap_count", 0)
        elif self.hap_count < 1:
            raise DomainError("Scenario.hap_count must be >= 1 for HAP scenarios")
        elif self.kind is ScenarioKind.SINGLE_HAP and self.hap_count != 1:
            raise DomainError("Scenario.hap_count must be 1 for single-hap")
        if self.airborne_servers_per_hap < 0 or self.terrestrial_servers < 0:
            raise DomainError("Scenario server counts must be >= 0")
        if not 0 <= self.terrestrial_load_fraction < 1:
            raise DomainError("Scenario.terrestrial_load_fraction must lie in [0, 1)")
        if self.controller_response_s < 0 or self.coordination_overhead_s < 0:
            raise DomainError("Scenario control overheads must be >= 0")

    @classmethod
    def with_haps(cls, hap_count: int, **kwargs) -> "Scenario":
        if hap_count == 0:
            kind = ScenarioKind.TERRESTRIAL_ONLY
        elif hap_count == 1:
            kind = ScenarioKind.SINGLE_HAP
        else:
            kind = ScenarioKind.MULTI_HAP
        return cls(kind=kind, hap_count=hap_count, **kwargs)

    @property
    def label(self) -> str:
        if self.kind is ScenarioKind.TERRESTRIAL_ONLY:
            return "terrestrial"
        return f"{self.hap_count}-hap"

    @property
    def relay_hops(self) -> int:
        if self.kind is ScenarioKind.MULTI_HAP:
            return link_model.chain_hops(self.hap_count)
        return 0

    def terrestrial_baseline(self) -> "Scenario":
        return replace(self, kind=ScenarioKind.TERRESTRIAL_ONLY, hap_count=0)


@dataclass(frozen=True)
class CostModel:
    electricity_price_per_kwh: float = 0.12
    include_transmission_cost: bool = True

    def __post_init__(self):
        if self.electricity_price_per_kwh < 0:
            raise DomainError("CostModel.electricity_price_per_kwh must be >= 0")


@dataclass(frozen=True)
class SystemModel:
    """Everything but the scenario, the day and the offered load."""

    hap: HapConfig = field(default_factory=HapConfig)
    server: ServerSpec = field(default_factory=ServerSpec)
    link: link_model.LinkConfig = field(default_factory=link_model.LinkConfig)
    thermal: ThermalParams = field(default_factory=ThermalParams)
    cost: CostModel = field(default_factory=CostModel)


@dataclass(frozen=True)
class DispatchSplit:
    hap_rates: tuple[float, ...]
    terrestrial_rate: float
    feasible: bool
    outage: bool = False

    @property
    def hap_total(self) -> float:
        return sum(self.hap_rates)


@dataclass(frozen=True)
class EnergyBreakdown:
    terrestrial_compute_kwh: float
    cooling_kwh: float
    transmission_kwh: float

    @property
    def total_kwh(self) -> float:
        return self.terrestrial_compute_kwh + self.cooling_kwh + self.transmission_kwh


@dataclass(frozen=True)
class Delays:
    queuing_s: float
    rtt_s: float
    relay_s: float
    control_s: float = 0.0


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    geo: GeoDay
    offered_rate: float
    cost_per_day: float
    energy_breakdown: EnergyBreakdown
    dispatched: DispatchSplit
    delays: Delays
    outage: bool
    feasible: bool
    flying: FlyingConditionResult | None = None


def hap_rate_limit(per_hap_limit: FlyingConditionResult, task_size_bits, link) -> float:
    """Admissible per-HAP rate: flying condition and link capacity."""
    return min(per_hap_limit.max_arrival_rate,
               link_model.max_link_arrival_rate(task_size_bits, link))


def dispatch(
    offered: WorkloadSpec,
    sc: Scenario,
    per_hap_limit: FlyingConditionResult | None,
    link: link_model.LinkConfig,
    server: ServerSpec,
) -> DispatchSplit:
    """Fill the HAPs first, send the remainder to the terrestrial fleet."""
    lam = offered.arrival_rate
    k = sc.hap_count
    if k == 0 or per_hap_limit is None or not per_hap_limit.feasible:
        rates = (0.0,) * k
        outage = False
    else:
        energy_cap = per_hap_limit.max_arrival_rate
        cap = hap_rate_limit(per_hap_limit, offered.task_size_bits, link)
        want = min(lam, k * energy_cap)
        outage = want > k * cap
        share = min(lam, k * cap)
        if sc.control is Control.CENTRALIZED:
            # controller HAP assigns in index order
            left = share
            filled = []
            for _ in range(k):
                take = min(cap, left)
                filled.append(take)
                left -= take
            rates = tuple(filled)
        else:
            rates = (share / k,) * k
    terrestrial = max(0.0, lam - sum(rates))

    feasible = True
    if terrestrial > 0:
        if sc.terrestrial_servers == 0:
            feasible = False
        else:
            per_server = terrestrial / sc.terrestrial_servers
            feasible = per_server < task_service_rate(offered, server)
    return DispatchSplit(rates, terrestrial, feasible, outage)


def _flying_limit(sc, geo, offered, system) -> FlyingConditionResult | None:
    if sc.kind is ScenarioKind.TERRESTRIAL_ONLY:
        return None
    return flying_condition(
        system.hap, geo, sc.airborne_servers_per_hap, system.server, offered
    )


def max_rate_offered(sc: Scenario, geo: GeoDay, workload: WorkloadSpec, system: SystemModel) -> float:
    """All HAP admissible rates plus the terrestrial share kept on the ground."""
    mu = task_service_rate(workload, system.server)
    ground = sc.terrestrial_load_fraction * sc.terrestrial_servers * mu
    limit = _flying_limit(sc, geo, workload, system)
    if limit is None or not limit.feasible:
        return ground
    return sc.hap_count * hap_rate_limit(limit, workload.task_size_bits, system.link) + ground


def _control_delay(sc: Scenario) -> float:
    if sc.kind is not ScenarioKind.MULTI_HAP:
        return 0.0
    if sc.control is Control.CENTRALIZED:
        return sc.controller_response_s
    return sc.coordination_overhead_s * (sc.hap_count - 1)


def electricity_cost(
    sc: Scenario, geo: GeoDay, offered: WorkloadSpec, system: SystemModel
) -> ScenarioResult:
    limit = _flying_limit(sc, geo, offered, system)
    split = dispatch(offered, sc, limit, system.link, system.server)
    if not split.feasible:
        raise InfeasibleError(
            f"{sc.label}: terrestrial remainder {split.terrestrial_rate:.6g} tasks/s "
            f"exceeds the stability limit of {sc.terrestrial_servers} servers"
        )

    server = system.server
    n_t = sc.terrestrial_servers
    per_server = offered.with_rate(split.terrestrial_rate / n_t) if n_t else None
    if n_t:
        rho_t = per_server.arrival_rate / task_service_rate(offered, server)
        compute_kwh = n_t * server_power(server, rho_t) * 24.0 / 1000.0
    else:
        compute_kwh = 0.0
    cool_kwh = cooling_energy(compute_kwh, system.thermal)

    tx_kwh = 0.0
    if system.cost.include_transmission_cost and split.hap_total > 0:
        busy_s_per_task = offered.task_size_bits / link_model.capacity_bps(system.link)
        tx_kwh = (system.link.tx_power_w * busy_s_per_task * split.hap_total
                  * SECONDS_PER_DAY / 3.6e6)

    breakdown = EnergyBreakdown(compute_kwh, cool_kwh, tx_kwh)
    cost = system.cost.electricity_price_per_kwh * breakdown.total_kwh

    queuing = mm1_sojourn(per_server, server) if per_server and split.terrestrial_rate > 0 else 0.0
    offloaded = split.hap_total > 0
    delays = Delays(
        queuing_s=queuing,
        rtt_s=link_model.transmission_rtt(offered.task_size_bits, system.link) if offloaded else 0.0,
        relay_s=(link_model.relay_delay(offered.task_size_bits, sc.relay_hops, system.link)
                 if offloaded else 0.0),
        control_s=_control_delay(sc) if offloaded else 0.0,
    )
    feasible = limit is None or limit.feasible
    return ScenarioResult(sc, geo, offered.arrival_rate, cost, breakdown, split,
                          delays, split.outage, feasible, limit)


def savings_percent(
    sc: Scenario, baseline: Scenario, geo: GeoDay, offered: WorkloadSpec, system: SystemModel
) -> float:
    if baseline.kind is not ScenarioKind.TERRESTRIAL_ONLY:
        raise DomainError("savings baseline must be a terrestrial-only scenario")
    base = electricity_cost(baseline, geo, offered, system).cost_per_day
    ours = electricity_cost(sc, geo, offered, system).cost_per_day
    return _savings(base, ours)


def _savings(base_cost: float, cost: float) -> float:
    if base_cost == 0:
        raise DomainError("baseline cost is zero; savings undefined")
    return 100.0 * (base_cost - cost) / base_cost


@dataclass(frozen=True)
class DayCost:
    day: int
    cost: float
    savings_pct: float
    feasible: bool
    offered_rate: float


def evaluate_day(day, sc, lat, workload, system, policy, fixed_rate=None) -> DayCost:
    geo = GeoDay(lat, day)
    if OfferedPolicy(policy) is OfferedPolicy.MAX_RATE:
        rate = max_rate_offered(sc, geo, workload, system)
    else:
        if fixed_rate is None:
            raise DomainError("fixed offered policy needs fixed_rate")
        rate = fixed_rate
    offered = workload.with_rate(rate)
    result = electricity_cost(sc, geo, offered, system)
    base = electricity_cost(sc.terrestrial_baseline(), geo, offered, system)
    return DayCost(day, result.cost_per_day, _savings(base.cost_per_day, result.cost_per_day),
                   result.feasible, rate)


def sweep_days(
    sc: Scenario,
    lat: float,
    workload: WorkloadSpec,
    system: SystemModel,
    policy: OfferedPolicy | str = OfferedPolicy.MAX_RATE,
    fixed_rate: float | None = None,
    days: Sequence[int] | None = None,
    jobs: int = 1,
) -> list[DayCost]:
    """Cost and savings for each day, in day order; infeasible days are kept."""
    GeoDay(lat, 1)
    day_list = list(range(1, DAYS_PER_YEAR + 1)) if days is None else sorted(days)
    fn = partial(evaluate_day, sc=sc, lat=lat, workload=workload, system=system,
                 policy=OfferedPolicy(policy), fixed_rate=fixed_rate)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, day_list, chunksize=16))
    return [fn(day) for day in day_list]


@dataclass(frozen=True)
class DelayRow:
    arrival_rate: float
    task_class: str
    queuing_s: float
    rtt_s: float
    relay_s: float


def utilization_grid(n_points: int, max_utilization: float) -> list[float]:
    if n_points < 2:
        raise DomainError("delay grid needs at least 2 points")
    if not 0 < max_utilization < 1:
        raise DomainError("max_utilization must lie in (0, 1)")
    return [max_utilization * i / (n_points - 1) for i in range(n_points)]


def delay_report(
    sc: Scenario,
    workloads: Sequence[WorkloadSpec],
    rho_grid: Sequence[float],
    system: SystemModel,
) -> list[DelayRow]:
    """Terrestrial queuing against offload RTT and relaying, per task class.

    Arrival rates are aggregate rates over the terrestrial fleet, built from
    per-server utilizations in ``rho_grid``.
    """
    n_t = sc.terrestrial_servers
    if n_t < 1:
        raise DomainError("delay report needs at least one terrestrial server")
    rows = []
    for w in workloads:
        mu = task_service_rate(w, system.server)
        rtt = link_model.transmission_rtt(w.task_size_bits, system.link)
        relay = link_model.relay_delay(w.task_size_bits, sc.relay_hops, system.link)
        for rho in rho_grid:
            lam = rho * mu * n_t
            queuing = mm1_sojourn(w.with_rate(lam / n_t), system.server)
            rows.append(DelayRow(lam, w.task_class.value, queuing, rtt, relay))
    return rows
