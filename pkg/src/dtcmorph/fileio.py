"""Run configuration, CSV emission and the run manifest.

Data files are comma-separated text with a header row; floats are written
with repr(), the shortest digit string that round-trips. Every numeric value
is checked finite before anything touches disk. Each run emits one JSON
manifest listing the resolved configuration, seed provenance, the unit
convention and a sha256 digest per data file; timestamps live only there, so
data files are byte-identical across reruns.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime, timezone
from pathlib import Path

from .errors import ValidationError
from .hamiltonians import ModelParams, default_params

TOOL_NAME = "dtcmorph"
TOOL_VERSION = "0.1.0"
UNIT_CONVENTION = {"hbar": 1.0, "default_period": 1.0}

_MODEL_OVERRIDE_FIELDS = ("t1", "t2", "t3", "g", "j0", "mu", "jxy", "w")


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved inputs of one CLI run; round-trips losslessly through JSON."""

    n_sites: int = 8
    lambdas: tuple | None = None
    realizations: int | None = None
    periods: int | None = None
    master_seed: int = 12345
    bins: int = 20
    initial_config: int = 0
    workers: int | None = None
    out_format: str = "csv"
    t1: float | None = None
    t2: float | None = None
    t3: float | None = None
    g: float | None = None
    j0: float | None = None
    mu: float | None = None
    jxy: float | None = None
    w: float | None = None

    def __post_init__(self):
        if self.lambdas is not None:
            object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if self.out_format != "csv":
            raise ConfigError(f"unsupported output format {self.out_format!r}")

    def params_for(self, lam: float) -> ModelParams:
        """Model parameters at one deformation value, with any overrides applied."""
        base = default_params(self.n_sites, lam)
        overrides = {
            name: getattr(self, name)
            for name in _MODEL_OVERRIDE_FIELDS
            if getattr(self, name) is not None
        }
        return replace(base, **overrides) if overrides else base

    def to_dict(self) -> dict:
        data = asdict(self)
        if data["lambdas"] is not None:
            data["lambdas"] = list(data["lambdas"])
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return cls.from_dict(data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def format_value(value, context: str = "") -> str:
    """Render one CSV cell; rejects non-finite numbers."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int,)) or hasattr(value, "__index__"):
        return str(int(value))
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"non-finite value in output{context and f' ({context})'}")
    return repr(value)


@dataclass
class EmittedFile:
    name: str
    sha256: str
    rows: int


def write_csv(out_dir: Path, name: str, header, rows) -> EmittedFile:
    """Write one CSV table and return its digest record."""
    lines = [",".join(header)]
    count = 0
    for row in rows:
        lines.append(",".join(format_value(v, context=name) for v in row))
        count += 1
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    digest = hashlib.sha256(payload).hexdigest()
    path = Path(out_dir) / name
    try:
        path.write_bytes(payload)
    except OSError as exc:
        raise OSError(f"cannot write output file {path}: {exc}") from exc
    return EmittedFile(name=name, sha256=digest, rows=count)


def write_manifest(
    out_dir: Path,
    command: str,
    config: RunConfig,
    cell_seeds,
    files,
    workers: int,
    extra: dict | None = None,
) -> Path:
    """Emit manifest.json; it alone suffices to reproduce the run."""
    payload = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "units": UNIT_CONVENTION,
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "cell_seeds": cell_seeds,
        "workers": workers,
        "files": [asdict(f) for f in files],
    }
    if extra:
        payload.update(extra)
    path = Path(out_dir) / "manifest.json"
    try:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write manifest {path}: {exc}") from exc
    return path
