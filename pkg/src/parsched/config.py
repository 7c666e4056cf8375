"""Run configuration: dataclass defaults overlaid with a TOML file.

Every tunable constant of the model has a key; see ``configs/default.toml``
for the annotated full set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .energy import EnergyConfig
from .model import DWELL_TABLE, DwellTemplate, WorkingMode, default_amplitude
from .priority import BALANCED, PriorityConfig
from .scenario import ScenarioConfig, WaitMode
from .scheduler import Policy, SchedulerConfig

CONFIG_ENV = "PARSCHED_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    precision_from: int = 0
    precision_to: int = 200
    precision_step: int = 40
    reps: int = 20
    seed0: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.precision_step <= 0 or self.precision_to < self.precision_from:
            raise ValueError("sweep bounds must be ordered with a positive step")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")

    @property
    def loads(self) -> Tuple[int, ...]:
        return tuple(range(self.precision_from, self.precision_to + 1, self.precision_step))


FULL_GRID = SweepConfig(precision_from=0, precision_to=200, precision_step=10, reps=100)


@dataclass(frozen=True)
class RunConfig:
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    policies: Tuple[Policy, ...] = tuple(Policy)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    k: float = 0.5
    output_dir: str = "results"


def _table(raw: Mapping[str, Any]) -> Dict[str, DwellTemplate]:
    out = {}
    for name, row in raw.items():
        try:
            mode = WorkingMode(name)
        except ValueError:
            raise ConfigError(f"unknown mode in [table]: {name}") from None
        (t_x, t_w, t_r), window, rate = DWELL_TABLE[mode]
        out[name] = DwellTemplate(
            t_x=float(row.get("t_x", t_x)),
            t_w=float(row.get("t_w", t_w)),
            t_r=float(row.get("t_r", t_r)),
            l=float(row.get("window", window)),
            revisit_interval=1000.0 / float(row.get("rate_hz", rate)),
            amplitude=float(row.get("amplitude", default_amplitude(mode))),
        )
    return out


def _pick(section: Mapping[str, Any], allowed: Tuple[str, ...], where: str) -> Dict[str, Any]:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in [{where}]: {', '.join(sorted(unknown))}")
    return dict(section)


def from_mapping(data: Mapping[str, Any], base: Optional[RunConfig] = None) -> RunConfig:
    cfg = base or RunConfig()
    try:
        sched = _pick(data.get("scheduler", {}), ("si", "dt", "revisit", "release_at_request"),
                      "scheduler")
        energy = replace(cfg.scheduler.energy, **_pick(data.get("energy", {}), ("tau", "p_max"),
                                                       "energy"))
        prio_raw = _pick(data.get("priority", {}), ("eta", "a", "b"), "priority")
        if "eta" in prio_raw and prio_raw["eta"] != BALANCED:
            prio_raw["eta"] = float(prio_raw["eta"])
        priority = replace(cfg.scheduler.priority, **prio_raw)
        scheduler = replace(cfg.scheduler, energy=energy, priority=priority, **sched)

        scen = dict(data.get("scenario", {}))
        table = data.get("table")
        scen = _pick(scen, ("horizon_ms", "n_general_tracking", "n_precision_tracking",
                            "verify_rate_hz", "false_alarm_ratio", "range_km_bounds",
                            "wait_mode", "seed", "search"), "scenario")
        if "wait_mode" in scen:
            scen["wait_mode"] = WaitMode(scen["wait_mode"])
        if "range_km_bounds" in scen:
            scen["range_km_bounds"] = tuple(float(v) for v in scen["range_km_bounds"])
        if table:
            scen["templates"] = _table(table)
        scenario = replace(cfg.scenario, **scen)

        sweep_raw = _pick(data.get("sweep", {}), ("precision_from", "precision_to",
                                                  "precision_step", "reps", "seed0", "workers",
                                                  "policies"), "sweep")
        policies = cfg.policies
        if "policies" in sweep_raw:
            policies = tuple(Policy(p) for p in sweep_raw.pop("policies"))
        sweep = replace(cfg.sweep, **sweep_raw)
        metrics = _pick(data.get("metrics", {}), ("k",), "metrics")
        output = _pick(data.get("output", {}), ("dir",), "output")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return replace(cfg, scheduler=scheduler, scenario=scenario, policies=policies, sweep=sweep,
                   k=float(metrics.get("k", cfg.k)), output_dir=output.get("dir", cfg.output_dir))


def load_config(path: Union[str, Path, None] = None) -> RunConfig:
    """Load ``path``, else ``$PARSCHED_CONFIG``, else the built-in defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc
    return from_mapping(data)
