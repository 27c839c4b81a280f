"""Run configuration: `key = value` text files with '#' comments."""

import os
from dataclasses import dataclass, field

from .cases import list_cases
from .errors import ConfigError
from .schemes import SchemeConfig

WORKERS_ENV = "FSLP_NUM_WORKERS"


@dataclass
class RunConfig:
    case: str = None
    scheme: str = "fslp"
    order: int = 1
    c_cfl: float = None
    k_impedance: float = 1.1
    theta_policy: str = "all_regime"
    theta_value: float = 1.0
    time_integrator: str = "hancock"
    nx: int = None
    ny: int = None
    mach: float = None
    t_end: float = None
    snapshots: tuple = ()
    output_dir: str = "."
    formats: tuple = ("csv",)
    diagnostics: bool = False
    seed: int = 0
    workers: int = field(default_factory=lambda: int(os.environ.get(WORKERS_ENV, "1")))

    def scheme_config(self):
        return SchemeConfig(
            scheme=self.scheme,
            order=self.order,
            c_cfl=self.c_cfl,
            k_impedance=self.k_impedance,
            theta_policy=self.theta_policy,
            theta_value=self.theta_value,
            time_integrator=self.time_integrator,
        )

    @property
    def resolution(self):
        if self.nx is None:
            return None
        if self.ny is not None:
            return (self.nx, self.ny)
        return self.nx


_PARSERS = {
    "case": str,
    "scheme": str,
    "order": int,
    "c_cfl": float,
    "k_impedance": float,
    "theta_policy": str,
    "theta_value": float,
    "time_integrator": str,
    "nx": int,
    "ny": int,
    "mach": float,
    "t_end": float,
    "snapshots": lambda s: tuple(float(v) for v in s.split(",") if v.strip()),
    "output_dir": str,
    "formats": lambda s: tuple(v.strip() for v in s.split(",") if v.strip()),
    "diagnostics": lambda s: s.lower() in ("1", "true", "on", "yes"),
    "seed": int,
}


def parse_config(text, overrides=()):
    """Parse config text plus optional `key=value` override strings.

    Raises ConfigError with the offending line number on unknown keys, unknown
    cases, malformed values or invalid scheme combinations.
    """
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        _apply(cfg, line, f"line {lineno}")
    for n, ov in enumerate(overrides, start=1):
        _apply(cfg, ov, f"override {n}")
    _validate(cfg)
    return cfg


def _apply(cfg, line, where):
    if "=" not in line:
        raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
    key, _, value = line.partition("=")
    key, value = key.strip(), value.strip()
    if key not in _PARSERS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    try:
        setattr(cfg, key, _PARSERS[key](value))
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from None


def _validate(cfg):
    if cfg.case is None:
        raise ConfigError("missing required key 'case'")
    if cfg.case not in list_cases():
        raise ConfigError(f"unknown case {cfg.case!r}; known: {', '.join(list_cases())}")
    try:
        cfg.scheme_config()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for fmt in cfg.formats:
        if fmt not in ("csv", "vtk-legacy"):
            raise ConfigError(f"unknown output format {fmt!r}")
    if cfg.nx is not None and cfg.nx <= 0:
        raise ConfigError("nx must be positive")
