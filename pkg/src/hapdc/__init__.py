"""Hybrid terrestrial / stratospheric data center simulator."""

from hapdc.errors import (
    ConfigError,
    DomainError,
    HapdcError,
    InfeasibleError,
    StabilityError,
    UnstableQueueError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "HapdcError",
    "InfeasibleError",
    "StabilityError",
    "UnstableQueueError",
]
