"""Run configuration: YAML loading, validation, overrides and dumping.

Every section maps one-to-one onto a model dataclass. Omitted keys take the
defaults of that dataclass; unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from hapdc.errors import ConfigError, DomainError
from hapdc.hap import HapConfig
from hapdc.link import LinkConfig
from hapdc.scenarios import CostModel, OfferedPolicy, Scenario, SystemModel
from hapdc.solar import DAYS_PER_YEAR, GeoDay, PvConfig
from hapdc.thermal import ThermalParams
from hapdc.workload import LONG_TASK_MI, SHORT_TASK_MI, ServerSpec, TaskClass, WorkloadSpec


@dataclass(frozen=True)
class WorkloadConfig:
    arrival_rate: float = 0.0
    task_class: TaskClass = TaskClass.SHORT
    short_length_mi: float = SHORT_TASK_MI
    long_length_mi: float = LONG_TASK_MI
    short_task_bits: float = 4_000.0
    long_task_bits: float = 1_500_000.0

    def __post_init__(self):
        object.__setattr__(self, "task_class", TaskClass(self.task_class))
        # validates lengths, sizes and rate
        self.spec(TaskClass.SHORT)
        self.spec(TaskClass.LONG)

    def spec(self, task_class: TaskClass | str | None = None, arrival_rate=None) -> WorkloadSpec:
        cls = self.task_class if task_class is None else TaskClass(task_class)
        rate = self.arrival_rate if arrival_rate is None else arrival_rate
        if cls is TaskClass.SHORT:
            return WorkloadSpec(rate, self.short_length_mi, self.short_task_bits, cls)
        return WorkloadSpec(rate, self.long_length_mi, self.long_task_bits, cls)


@dataclass(frozen=True)
class SweepConfig:
    first_day: int = 1
    last_day: int = DAYS_PER_YEAR
    server_counts: tuple[int, ...] = ()
    hap_counts: tuple[int, ...] = (0, 1, 4)
    policy: OfferedPolicy = OfferedPolicy.MAX_RATE
    fixed_arrival_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "policy", OfferedPolicy(self.policy))
        object.__setattr__(self, "server_counts", tuple(int(n) for n in self.server_counts))
        object.__setattr__(self, "hap_counts", tuple(int(n) for n in self.hap_counts))
        if not 1 <= self.first_day <= self.last_day <= DAYS_PER_YEAR:
            raise DomainError(
                f"SweepConfig needs 1 <= first_day <= last_day <= {DAYS_PER_YEAR}"
            )
        if any(n < 0 for n in self.server_counts + self.hap_counts):
            raise DomainError("SweepConfig counts must be >= 0")
        if self.fixed_arrival_rate < 0:
            raise DomainError("SweepConfig.fixed_arrival_rate must be >= 0")

    @property
    def days(self) -> list[int]:
        return list(range(self.first_day, self.last_day + 1))


@dataclass(frozen=True)
class DelayConfig:
    n_points: int = 50
    max_utilization: float = 0.99
    # > 0 cross-checks every analytic queuing value against the event simulation
    des_tasks: int = 0

    def __post_init__(self):
        if self.n_points < 2:
            raise DomainError("DelayConfig.n_points must be >= 2")
        if not 0 < self.max_utilization < 1:
            raise DomainError("DelayConfig.max_utilization must lie in (0, 1)")
        if self.des_tasks < 0:
            raise DomainError("DelayConfig.des_tasks must be >= 0")


@dataclass(frozen=True)
class RunConfig:
    geo: GeoDay = field(default_factory=lambda: GeoDay(0.0, 172))
    pv: PvConfig = field(default_factory=PvConfig)
    hap: HapConfig = field(default_factory=HapConfig)
    server: ServerSpec = field(default_factory=ServerSpec)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    link: LinkConfig = field(default_factory=LinkConfig)
    thermal: ThermalParams = field(default_factory=ThermalParams)
    scenario: Scenario = field(default_factory=Scenario)
    cost: CostModel = field(default_factory=CostModel)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    delay: DelayConfig = field(default_factory=DelayConfig)
    seed: int = 0

    @property
    def system(self) -> SystemModel:
        return SystemModel(self.hap, self.server, self.link, self.thermal, self.cost)

    @property
    def server_counts(self) -> tuple[int, ...]:
        return self.sweep.server_counts or (self.scenario.airborne_servers_per_hap,)


# sections whose dataclass field differs from the YAML layout
_SECTION_TYPES = {
    "geo": GeoDay,
    "pv": PvConfig,
    "hap": HapConfig,
    "server": ServerSpec,
    "workload": WorkloadConfig,
    "link": LinkConfig,
    "thermal": ThermalParams,
    "scenario": Scenario,
    "cost": CostModel,
    "sweep": SweepConfig,
    "delay": DelayConfig,
}
_GEO_DEFAULTS = {"latitude_deg": 0.0, "day_of_year": 172}


def _coerce(section: str, name: str, default: Any, value: Any) -> Any:
    where = f"{section}.{name}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"validation error: {where} must be a boolean, got {value!r}")
        return value
    if isinstance(default, enum.Enum):
        try:
            return type(default)(value)
        except ValueError:
            choices = ", ".join(m.value for m in type(default))
            raise ConfigError(f"validation error: {where} must be one of {choices}") from None
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"validation error: {where} must be an integer, got {value!r}")
        return int(value)
    if isinstance(default, float):
        # YAML 1.1 reads exponent forms without a dot, such as 1e9, as strings
        if isinstance(value, str):
            try:
                value = float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"validation error: {where} must be a number, got {value!r}")
        return float(value)
    if isinstance(default, tuple):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"validation error: {where} must be a list, got {value!r}")
        return tuple(value)
    return value


def _field_defaults(cls) -> dict[str, Any]:
    out = {}
    for f in fields(cls):
        if f.default is not dataclasses.MISSING:
            out[f.name] = f.default
        elif f.default_factory is not dataclasses.MISSING:
            out[f.name] = f.default_factory()
    return out


def _build_section(section: str, raw: Any):
    cls = _SECTION_TYPES[section]
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"validation error: section [{section}] must be a mapping")
    defaults = _GEO_DEFAULTS if cls is GeoDay else _field_defaults(cls)
    if cls is HapConfig:
        defaults = {k: v for k, v in defaults.items() if k != "pv"}
    unknown = sorted(set(raw) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    kwargs = {k: _coerce(section, k, defaults[k], v) for k, v in raw.items()}
    return cls, kwargs


def from_dict(data: dict | None) -> RunConfig:
    data = {} if data is None else data
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping of sections")
    unknown = sorted(set(data) - set(_SECTION_TYPES) - {"seed"})
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(unknown)}")

    built = {}
    try:
        for section in _SECTION_TYPES:
            cls, kwargs = _build_section(section, data.get(section))
            if cls is HapConfig:
                kwargs["pv"] = built["pv"]
            if cls is GeoDay:
                kwargs = {**_GEO_DEFAULTS, **kwargs}
            built[section] = cls(**kwargs)
    except DomainError as exc:
        raise ConfigError(f"validation error: {exc}") from None
    seed = _coerce("seed", "seed", 0, data.get("seed", 0))
    return RunConfig(seed=seed, **built)


def _parse_yaml(text: str, source: str = "<string>"):
    try:
        return yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        if mark is not None:
            where = f"line {mark.line + 1}, column {mark.column + 1}"
        else:
            where = "unknown position"
        raise ConfigError(f"parse error in {source} at {where}: {exc.problem}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"parse error in {source}: {exc}") from None


def loads_config(text: str, overrides=()) -> RunConfig:
    data = _parse_yaml(text) or {}
    return from_dict(apply_overrides(data, overrides))


def load_config(path: str | Path | None, overrides=()) -> RunConfig:
    if path is None:
        return from_dict(apply_overrides({}, overrides))
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    data = _parse_yaml(text, str(path)) or {}
    return from_dict(apply_overrides(data, overrides))


def apply_overrides(data: dict, overrides) -> dict:
    """Apply ``section.key=value`` strings; values are parsed as YAML scalars."""
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping of sections")
    data = {k: (dict(v) if isinstance(v, dict) else v) for k, v in data.items()}
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override {item!r} is not of the form KEY=VALUE")
        value = _parse_yaml(raw, f"--set {key}")
        parts = key.strip().split(".")
        if len(parts) == 1:
            data[parts[0]] = value
        elif len(parts) == 2:
            section = data.setdefault(parts[0], {})
            if section is None:
                section = data[parts[0]] = {}
            if not isinstance(section, dict):
                raise ConfigError(f"override {item!r}: [{parts[0]}] is not a section")
            section[parts[1]] = value
        else:
            raise ConfigError(f"override key {key!r} must be KEY or SECTION.KEY")
    return data


def _plain(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


def to_dict(cfg: RunConfig) -> dict:
    out = {}
    for section in _SECTION_TYPES:
        obj = getattr(cfg, section)
        out[section] = {
            f.name: _plain(getattr(obj, f.name))
            for f in fields(obj)
            if f.name != "pv" or section != "hap"
        }
    out["seed"] = cfg.seed
    return out


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(to_dict(cfg), sort_keys=False)


def bundled_config_path(name: str) -> Path:
    """Path to a shipped config such as ``reference`` or ``flying_profile``."""
    ref = resources.files("hapdc") / "configs" / f"{name}.yaml"
    return Path(str(ref))
