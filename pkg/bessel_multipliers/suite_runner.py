"""Run a check suite over a sweep of random draws and aggregate the outcomes.

Notes:
- Draw i uses the generator derived from (seed, i) alone, so --replay i repeats
  exactly that draw.
- Draws run in index order, in one process; reports are byte-identical for equal
  run configs.
"""

import csv
import io
import logging
from dataclasses import dataclass, field

import pluggy

from . import cli_messages
from . import hookspecs
from . import suites
from .certificates import Status, to_plain
from .command_errors import ConfigError, MultiplierError, PreconditionError, SingularMatrixError
from .hookspecs import DrawOutcome, SweepShape
from .io_formats import dumps
from .random_instances import draw_rng
from .run_utils import write_output


logger = logging.getLogger(__name__)

PROJECT_NAME = "bessel_multipliers"


def get_plugin_manager():
    pm = pluggy.PluginManager(PROJECT_NAME)
    pm.add_hookspecs(hookspecs)
    pm.register(suites)
    pm.load_setuptools_entrypoints(PROJECT_NAME)
    return pm


def load_check_suites(pm=None):
    """All registered suites by name.

    Raises:
        ConfigError: two plugins register suites with the same name.
    """
    pm = get_plugin_manager() if pm is None else pm
    found = {}
    for suite_list in pm.hook.bm_get_check_suites():
        for suite in suite_list:
            if suite.name in found:
                raise ConfigError(f"Check suite {suite.name} is registered more than once.")
            found[suite.name] = suite
    return found


@dataclass(frozen=True)
class DrawRecord:
    index: int
    outcome: DrawOutcome


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    draws: int
    dims: tuple
    counts: tuple
    tolerances: dict
    records: tuple
    replay: int = None
    status_counts: dict = field(init=False)
    worst_margins: dict = field(init=False)

    def __post_init__(self):
        counts = {status.value: 0 for status in Status}
        worst = {}
        for record in self.records:
            counts[record.outcome.status.value] += 1
            for name, margin in record.outcome.margins.items():
                if name not in worst or margin < worst[name]["margin"]:
                    worst[name] = {"margin": float(margin), "draw": record.index}
        object.__setattr__(self, "status_counts", counts)
        object.__setattr__(self, "worst_margins", worst)

    @property
    def failing_draws(self):
        return [r.index for r in self.records if r.outcome.status is Status.FAIL]

    @property
    def passed(self):
        return not self.failing_draws

    def as_dict(self):
        data = {
            "suite": self.suite,
            "seed": self.seed,
            "draws": self.draws,
            "dims": list(self.dims),
            "counts": list(self.counts),
            "tolerances": self.tolerances,
            "status_counts": self.status_counts,
            "worst_margins": self.worst_margins,
            "failing_draws": self.failing_draws,
            "passed": self.passed,
            "failures": [
                {"draw": r.index, "details": to_plain(r.outcome.details)}
                for r in self.records
                if r.outcome.status is Status.FAIL
            ],
        }
        if self.replay is not None:
            data["replay"] = self.replay
            data["outcome"] = {
                "status": self.records[0].outcome.status.value,
                "margins": to_plain(self.records[0].outcome.margins),
                "details": to_plain(self.records[0].outcome.details),
            }
        return data

    def to_json(self):
        return dumps(self.as_dict())

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=["draw", "status", "worst_margin"], lineterminator="\n"
        )
        writer.writeheader()
        for record in self.records:
            worst = record.outcome.worst_margin
            writer.writerow(
                {
                    "draw": record.index,
                    "status": record.outcome.status.value,
                    "worst_margin": "" if worst is None else worst,
                }
            )
        return buffer.getvalue()


class SuiteRunner:
    """Run one check suite as described by a RunConfig."""

    def __init__(self, suite, run_config):
        self.suite = suite
        self.run_config = run_config
        self.shape = SweepShape(dims=tuple(run_config.dims), counts=tuple(run_config.counts))
        self.tolerances = run_config.tolerances

    # --- Public methods ---

    def run(self):
        """Run every draw, or only the replayed one, and build the report."""
        config = self.run_config
        write_output(cli_messages.check_started(self.suite.name, self._draw_indices(), config.seed))

        records = tuple(DrawRecord(index, self._run_draw(index)) for index in self._draw_indices())
        report = SuiteReport(
            suite=self.suite.name,
            seed=config.seed,
            draws=config.draws,
            dims=self.shape.dims,
            counts=self.shape.counts,
            tolerances=self.tolerances.as_dict(),
            records=records,
            replay=config.replay,
        )
        self._log_failures(report)
        return report

    # --- Helper methods for run() ---

    def _draw_indices(self):
        if self.run_config.replay is not None:
            return [self.run_config.replay]
        return list(range(self.run_config.draws))

    def _run_draw(self, index):
        """One draw. Unmet preconditions give no conclusion; other errors fail the draw."""
        rng = draw_rng(self.run_config.seed, index)
        try:
            return self.suite.draw(rng, self.shape, self.tolerances)
        except (PreconditionError, SingularMatrixError) as e:
            logger.info(f"Draw {index}: no conclusion ({e.message})")
            return DrawOutcome(status=Status.NO_CONCLUSION, details={"error": e.message})
        except MultiplierError as e:
            logger.warning(f"Draw {index}: {type(e).__name__}: {e.message}")
            return DrawOutcome(
                status=Status.FAIL, details={"error": f"{type(e).__name__}: {e.message}"}
            )

    def _log_failures(self, report):
        for index in report.failing_draws:
            logger.warning(cli_messages.draw_failed(self.suite.name, index, self.run_config.seed))
