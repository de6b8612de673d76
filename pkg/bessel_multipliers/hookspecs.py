"""Hook specifications for check-suite plugins, and the types they exchange.

A plugin module implements bm_get_check_suites() with the marker exported as
bessel_multipliers.hookimpl. Plugins outside this package are found through the
"bessel_multipliers" entry point group.
"""

from dataclasses import dataclass, field

import pluggy

from .certificates import Status
from .command_errors import ConfigError


hookspec = pluggy.HookspecMarker("bessel_multipliers")


@hookspec
def bm_get_check_suites():
    """Return a list of CheckSuite instances."""


@dataclass(frozen=True)
class SweepShape:
    """Inclusive ranges for the dimension d and the sequence length n of a draw."""

    dims: tuple = (2, 8)
    counts: tuple = (2, 16)

    def __post_init__(self):
        for name in ("dims", "counts"):
            low, high = getattr(self, name)
            if not 1 <= low <= high:
                raise ConfigError(f"Range {name} must satisfy 1 <= low <= high, got {(low, high)}.")

    def dim(self, rng, minimum=1):
        low, high = self.dims
        return int(rng.integers(max(low, minimum), max(high, minimum) + 1))

    def count(self, rng, minimum=1):
        low, high = self.counts
        return int(rng.integers(max(low, minimum), max(high, minimum) + 1))


@dataclass(frozen=True)
class DrawOutcome:
    """Result of one random draw of a suite.

    margins holds the relative margin of each checked claim; negative is violated.
    """

    status: Status
    margins: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def worst_margin(self):
        return min(self.margins.values()) if self.margins else None


@dataclass(frozen=True)
class CheckSuite:
    """A named randomized check: draw(rng, shape, tolerances) -> DrawOutcome."""

    name: str
    description: str
    draw: object
