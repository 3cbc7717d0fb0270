"""Server capacity, task streams, power draw and queuing delay."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np

from hapdc.errors import DomainError, UnstableQueueError

UNDER_UTILIZED_BELOW = 0.70
OVER_UTILIZED_FROM = 0.95

SHORT_TASK_MI = 50.0
LONG_TASK_MI = 500.0


class TaskClass(str, enum.Enum):
    SHORT = "short"
    LONG = "long"


class UtilizationBand(str, enum.Enum):
    UNDER = "under"
    EFFECTIVE = "effective"
    OVER = "over"


@dataclass(frozen=True)
class ServerSpec:
    service_rate_mips: float = 10_000.0
    peak_power_w: float = 200.0
    idle_fraction: float = 0.6
    mass_kg: float = 11.0

    def __post_init__(self):
        for name in ("service_rate_mips", "peak_power_w", "mass_kg"):
            if not getattr(self, name) > 0:
                raise DomainError(f"ServerSpec.{name} must be > 0")
        if not 0 <= self.idle_fraction <= 1:
            raise DomainError("ServerSpec.idle_fraction must lie in [0, 1]")

    @property
    def idle_power_w(self) -> float:
        return self.idle_fraction * self.peak_power_w


@dataclass(frozen=True)
class WorkloadSpec:
    arrival_rate: float
    mean_task_length_mi: float
    task_size_bits: float
    task_class: TaskClass = TaskClass.SHORT

    def __post_init__(self):
        if not self.arrival_rate >= 0:
            raise DomainError("WorkloadSpec.arrival_rate must be >= 0")
        if not self.mean_task_length_mi > 0:
            raise DomainError("WorkloadSpec.mean_task_length_mi must be > 0")
        if not self.task_size_bits > 0:
            raise DomainError("WorkloadSpec.task_size_bits must be > 0")
        object.__setattr__(self, "task_class", TaskClass(self.task_class))

    def with_rate(self, arrival_rate: float) -> "WorkloadSpec":
        return WorkloadSpec(
            arrival_rate, self.mean_task_length_mi, self.task_size_bits, self.task_class
        )


def task_service_rate(w: WorkloadSpec, s: ServerSpec) -> float:
    """Tasks per second one server completes when busy."""
    return s.service_rate_mips / w.mean_task_length_mi


def utilization(w: WorkloadSpec, s: ServerSpec) -> float:
    return w.arrival_rate * w.mean_task_length_mi / s.service_rate_mips


def classify_utilization(rho: float) -> UtilizationBand:
    if rho < 0:
        raise DomainError(f"utilization must be >= 0, got {rho}")
    if rho < UNDER_UTILIZED_BELOW:
        return UtilizationBand.UNDER
    if rho < OVER_UTILIZED_FROM:
        return UtilizationBand.EFFECTIVE
    return UtilizationBand.OVER


def server_power(s: ServerSpec, rho: float) -> float:
    """Linear idle-to-peak power model [W]."""
    if not 0 <= rho <= 1:
        raise DomainError(f"server_power needs utilization in [0, 1], got {rho}")
    return s.idle_power_w + (1.0 - s.idle_fraction) * s.peak_power_w * rho


def mm1_sojourn(w: WorkloadSpec, s: ServerSpec) -> float:
    """Mean M/M/1 time in system (wait + service) [s]."""
    mu = task_service_rate(w, s)
    lam = w.arrival_rate
    if lam >= mu:
        raise UnstableQueueError(
            f"arrival rate {lam} >= per-task service rate {mu}: queue is unbounded"
        )
    return 1.0 / (mu - lam)


def des_oracle(
    w: WorkloadSpec,
    s: ServerSpec,
    n_tasks: int,
    seed: int,
    max_queue_length: int = 1_000_000,
) -> float:
    """Empirical mean sojourn of a single-server FIFO queue.

    Event-by-event simulation of Poisson arrivals and exponential service.
    Departures still pending when a task arrives form the queue, whose length
    is guarded by ``max_queue_length``.
    """
    if n_tasks < 1:
        raise DomainError("n_tasks must be >= 1")
    mu = task_service_rate(w, s)
    lam = w.arrival_rate
    if lam >= mu:
        raise UnstableQueueError(f"arrival rate {lam} >= service rate {mu}")

    rng = np.random.default_rng(seed)
    service = rng.exponential(1.0 / mu, size=n_tasks)
    if lam > 0:
        arrivals = np.cumsum(rng.exponential(1.0 / lam, size=n_tasks))
    else:
        # no contention: every task finds an empty system
        return float(service.mean())

    pending = deque()
    last_departure = 0.0
    total = 0.0
    for t_arr, t_srv in zip(arrivals.tolist(), service.tolist()):
        while pending and pending[0] <= t_arr:
            pending.popleft()
        if len(pending) >= max_queue_length:
            raise UnstableQueueError(
                f"queue length exceeded guard of {max_queue_length} tasks"
            )
        start = t_arr if t_arr > last_departure else last_departure
        last_departure = start + t_srv
        pending.append(last_departure)
        total += last_departure - t_arr
    return total / n_tasks
