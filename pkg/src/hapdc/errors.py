"""Exception hierarchy shared by every model."""


class HapdcError(Exception):
    pass


class DomainError(HapdcError, ValueError):
    """An argument lies outside the domain of the model."""


class UnstableQueueError(HapdcError):
    """Arrival rate reaches or exceeds the service rate."""


class StabilityError(HapdcError):
    """Explicit integration step is too large for the RC time constant."""


class InfeasibleError(HapdcError):
    """A required computation has no feasible operating point."""


class ConfigError(HapdcError):
    pass
