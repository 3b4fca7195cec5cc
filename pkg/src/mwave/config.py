"""Run configuration: flat key=value files, canonical form and hashing."""
from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

COMMANDS = ("kernel", "validate", "cwt", "reconstruct", "holder", "localize", "accept")

# acceptance / validation tolerances; overridable as tol.<name>=value
DEFAULT_TOLERANCES = {
    "torus_diagonal": 1e-4,
    "theta_duality": 1e-10,
    "gt_approx": 1e-3,
    "ht_approx": 1.2e-3,
    "spot_value": 0.02,
    "heat_trace_small": 1e-6,
    "heat_trace_large": 1e-3,
    "calderon": 1e-9,
    "calderon_mode": 1e-8,
    "calderon_field": 1e-6,
    "reconstruction": 2e-4,
    "reconstruction_target": 1e-4,
    "holder_alpha": 0.05,
    "holder_r2": 0.99,
    "localization": 10.0,
    "gegenbauer": 1e-10,
    "pole_fd": 1e-6,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "accept"
    manifold: Optional[str] = None
    symbol: str = "mexican:1"
    t: Optional[str] = None
    theta: Optional[str] = None
    x: Optional[str] = None
    point: Optional[str] = None
    grid: Optional[int] = None
    L_max: Optional[int] = None
    n: int = 2
    report: Optional[str] = None
    target: Optional[str] = None
    form: str = "differentiated"
    samples: int = 2048
    field: Optional[str] = None
    test_field: Optional[str] = None
    bandlimit: int = 256
    eta: Optional[float] = None
    L: Optional[float] = None
    J: int = 2
    target_error: float = 1e-4
    t_min: Optional[float] = None
    t_max: Optional[float] = None
    nodes_per_decade: int = 400
    scales: int = 21
    N: int = 3
    resolution: Optional[int] = None
    output: Optional[str] = None
    tolerances: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    @property
    def all_tolerances(self) -> dict:
        return {k: self.tol(k) for k in DEFAULT_TOLERANCES}

    # -- flat key=value form -------------------------------------------------

    @classmethod
    def field_names(cls) -> set:
        return {f.name for f in fields(cls)} - {"tolerances"}

    @classmethod
    def from_mapping(cls, items: dict) -> "RunConfig":
        kwargs: dict = {}
        tols: dict = {}
        types = {f.name: f.type for f in fields(cls)}
        for key, raw in items.items():
            key = key.strip().replace("-", "_")
            if key.startswith("tol."):
                tols[key[4:]] = float(raw)
                continue
            if key not in cls.field_names():
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(types[key], raw)
        return cls(tolerances=tols, **kwargs)

    @classmethod
    def from_string(cls, text: str) -> "RunConfig":
        items = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value")
            k, v = line.split("=", 1)
            items[k.strip()] = v.strip()
        return cls.from_mapping(items)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        return cls.from_string(Path(path).read_text())

    def to_string(self) -> str:
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            if f.name == "tolerances":
                continue
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name}={_render(v)}")
        for k in sorted(self.tolerances):
            lines.append(f"tol.{k}={_render(float(self.tolerances[k]))}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_string().encode()).hexdigest()[:16]


def _render(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _coerce(typ, raw):
    if raw is None:
        return None
    typ = str(typ)
    if isinstance(raw, str) and raw.strip() in ("", "None"):
        return None
    if "int" in typ:
        return int(raw)
    if "float" in typ:
        return float(raw)
    return str(raw)
