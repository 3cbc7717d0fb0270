"""Ground-to-HAP and inter-HAP wireless links.

The channel is a deterministic line-of-sight AWGN link with zero-forcing
spatial multiplexing: ``tx_antennas`` streams share the transmit power and
each enjoys an array gain of ``rx_antennas - tx_antennas + 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from hapdc.errors import DomainError

SPEED_OF_LIGHT = 2.998e8
THERMAL_NOISE_DBM_HZ = -174.0


class LinkState(str, enum.Enum):
    OK = "ok"
    OUTAGE = "outage"


@dataclass(frozen=True)
class LinkConfig:
    carrier_hz: float = 31e9
    bandwidth_hz: float = 100e6
    tx_antennas: int = 2
    rx_antennas: int = 16
    tx_power_dbm: float = 33.0
    noise_figure_db: float = 5.0
    distance_m: float = 20_000.0
    per_hop_distance_m: float = 100_000.0

    def __post_init__(self):
        for name in ("carrier_hz", "bandwidth_hz", "distance_m", "per_hop_distance_m"):
            if not getattr(self, name) > 0:
                raise DomainError(f"LinkConfig.{name} must be > 0")
        if not 1 <= self.tx_antennas <= self.rx_antennas:
            raise DomainError(
                "LinkConfig needs rx_antennas >= tx_antennas >= 1, got "
                f"tx={self.tx_antennas} rx={self.rx_antennas}"
            )

    @property
    def tx_power_w(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0) / 1000.0


def fspl_db(distance_m: float, carrier_hz: float) -> float:
    if distance_m <= 0 or carrier_hz <= 0:
        raise DomainError("fspl_db needs positive distance and frequency")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * carrier_hz / SPEED_OF_LIGHT)


def noise_power_dbm(cfg: LinkConfig) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(cfg.bandwidth_hz) + cfg.noise_figure_db


def stream_snr(cfg: LinkConfig, distance_m: float | None = None) -> float:
    """Linear post-combining SNR of one spatial stream."""
    d = cfg.distance_m if distance_m is None else distance_m
    per_stream_dbm = cfg.tx_power_dbm - 10.0 * math.log10(cfg.tx_antennas)
    snr_db = per_stream_dbm - fspl_db(d, cfg.carrier_hz) - noise_power_dbm(cfg)
    zf_gain = cfg.rx_antennas - cfg.tx_antennas + 1
    return 10.0 ** (snr_db / 10.0) * zf_gain


def capacity_bps(cfg: LinkConfig, distance_m: float | None = None) -> float:
    return cfg.tx_antennas * cfg.bandwidth_hz * math.log2(1.0 + stream_snr(cfg, distance_m))


def inter_hap_capacity_bps(cfg: LinkConfig) -> float:
    return capacity_bps(cfg, cfg.per_hop_distance_m)


def transmission_rtt(bits: float, cfg: LinkConfig) -> float:
    """Symmetric up/down serialization plus propagation [s]."""
    if bits < 0:
        raise DomainError("bits must be >= 0")
    return 2.0 * (bits / capacity_bps(cfg) + cfg.distance_m / SPEED_OF_LIGHT)


def relay_delay(bits: float, hops: int, cfg: LinkConfig) -> float:
    """Store-and-forward delay across ``hops`` inter-HAP links [s]."""
    if hops < 0:
        raise DomainError("hops must be >= 0")
    if bits < 0:
        raise DomainError("bits must be >= 0")
    if hops == 0:
        return 0.0
    per_hop = bits / inter_hap_capacity_bps(cfg) + cfg.per_hop_distance_m / SPEED_OF_LIGHT
    return hops * per_hop


def chain_hops(hap_count: int) -> int:
    """A chain of k HAPs has k - 1 relay hops."""
    if hap_count < 1:
        raise DomainError("hap_count must be >= 1")
    return hap_count - 1


def outage_check(offered_bps: float, cfg: LinkConfig) -> LinkState:
    if offered_bps < 0:
        raise DomainError("offered_bps must be >= 0")
    return LinkState.OUTAGE if offered_bps > capacity_bps(cfg) else LinkState.OK


def max_link_arrival_rate(task_size_bits: float, cfg: LinkConfig) -> float:
    """Largest task rate the ground link carries without outage."""
    return capacity_bps(cfg) / task_size_bits
