"""Tolerance policy shared by every check, and the configuration of a CLI run."""

from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path

import toml

from .command_errors import ConfigError


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances used for all comparisons.

    One shared default instance (DEFAULT_TOLERANCES) is used unless a caller passes
    its own. Attributes:
    - eq_abs: absolute equality tolerance, multiplied by the operand scale
    - bound_slack: relative slack for inequality checks
    - rank_tol: singular values below rank_tol * sigma_max count as zero
    - invert_floor: sigma_min must exceed invert_floor * sigma_max for an operator
      to count as boundedly invertible
    """

    eq_abs: float = 1e-10
    bound_slack: float = 1e-9
    rank_tol: float = 1e-12
    invert_floor: float = 1e-10

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(f"Tolerance {field.name} must be positive, got {value!r}.")

    def equal_within(self, residual, scale=1.0):
        """True if residual is zero up to eq_abs at the given operand scale."""
        return residual <= self.eq_abs * max(scale, 1.0)

    def within_bound(self, lhs, rhs, scale=1.0):
        """True if lhs <= rhs, allowing bound_slack relative and absolute slack."""
        return lhs <= rhs * (1 + self.bound_slack) + self.bound_slack * scale

    def singular_floor(self, sigma_max):
        return self.invert_floor * sigma_max

    def rank_floor(self, sigma_max):
        return self.rank_tol * sigma_max

    def with_overrides(self, **overrides):
        """Return a copy with the non-None overrides applied."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"Unknown tolerance setting(s): {', '.join(sorted(unknown))}.")
        return replace(self, **overrides)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOLERANCES = ToleranceConfig()


def load_tolerances(path, base=DEFAULT_TOLERANCES):
    """Read a [tolerances] table from a TOML file and apply it on top of base."""
    path = Path(path)
    try:
        data = toml.loads(path.read_text())
    except OSError as e:
        raise ConfigError(f"Could not read tolerance file {path}: {e}")
    except toml.TomlDecodeError as e:
        raise ConfigError(f"Tolerance file {path} is not valid TOML: {e}")

    table = data.get("tolerances", {})
    if not isinstance(table, dict):
        raise ConfigError(f"[tolerances] in {path} must be a table.")
    for key, value in table.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"Tolerance {key} in {path} must be a number, got {value!r}.")
    return base.with_overrides(**{k: float(v) for k, v in table.items()})


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI run depends on; equal configs give identical reports."""

    command: str
    inputs: tuple = ()
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES
    suite: str = None
    dims: tuple = (2, 8)
    counts: tuple = (2, 16)
    draws: int = 100
    seed: int = 0
    replay: int = None
    actions: tuple = ()
    vector: tuple = None
    out_path: Path = None
    output_format: OutputFormat = OutputFormat.JSON

    def __post_init__(self):
        if isinstance(self.draws, bool) or not isinstance(self.draws, int) or self.draws < 1:
            raise ConfigError(f"draws must be a positive integer, got {self.draws!r}.")
        if self.replay is not None and self.replay < 0:
            raise ConfigError(f"replay must be a draw index >= 0, got {self.replay}.")
        for name in ("dims", "counts"):
            low, high = getattr(self, name)
            if not 1 <= low <= high:
                raise ConfigError(f"{name} must satisfy 1 <= low <= high, got {(low, high)}.")
        object.__setattr__(self, "output_format", OutputFormat(self.output_format))
