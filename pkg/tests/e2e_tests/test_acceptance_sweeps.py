"""Acceptance-size sweeps.

These run every check suite at full size and take a while; they are collected
only when BM_RUN_E2E=1 is set. See tests/conftest.py.
"""

import numpy as np
import pytest

from bessel_multipliers import cli, multiplier, perturbation
from bessel_multipliers import random_instances as ri
from bessel_multipliers.invertibility import perturbation_invertibility
from bessel_multipliers.perturbation import ConvergenceExperiment, NormMode, ScheduleStep
from bessel_multipliers.suite_runner import SuiteRunner, load_check_suites
from bessel_multipliers.symbols import dense_symbol
from bessel_multipliers.tolerance_config import RunConfig


# Suites whose draws all satisfy their hypotheses, so every draw must pass.
CONCLUSIVE = {"thm-3-2", "prop-4-1"}


def sweep(name, draws, dims=(2, 16), counts=(2, 32), seed=42):
    config = RunConfig(
        command="check", suite=name, draws=draws, seed=seed, dims=dims, counts=counts
    )
    return SuiteRunner(load_check_suites()[name], config).run()


@pytest.mark.parametrize(
    "name, draws",
    [
        ("thm-3-2", 1000),
        ("prop-3-5", 500),
        ("prop-3-6", 500),
        ("prop-3-7", 500),
        ("prop-3-8", 300),
        ("prop-4-1", 500),
        ("prop-4-2", 500),
        ("cor-4-3", 500),
        ("prop-5-2", 200),
    ],
)
def test_sweep_has_no_failures(name, draws):
    report = sweep(name, draws)
    assert report.passed, report.as_dict()["failures"][:3]
    assert len(report.records) == draws
    if name in CONCLUSIVE:
        assert report.status_counts["pass"] == draws


def test_perturbed_frames_are_never_violated():
    report = sweep("prop-4-4", 1000)
    assert report.status_counts["fail"] == 0
    assert report.status_counts["pass"] > 0
    assert report.status_counts["not_applicable"] > 0


def test_tight_frames_are_never_applicable():
    """With A = B the admissible interval for mu* is empty."""
    rng = ri.draw_rng(42, 0)
    for _ in range(100):
        f = ri.scaled_frame(rng, 3, 5, 1.0, 1.0)
        g = ri.random_bessel(rng, 3, 5)
        verdict = perturbation_invertibility(f, g, np.eye(5))
        assert verdict.status.value == "not_applicable"


def test_geometric_schedule_converges():
    rng = ri.draw_rng(42, 1)
    f = ri.random_bessel(rng, 6, 12)
    g = ri.random_bessel(rng, 5, 10)
    base = multiplier.build(ri.random_symbol(rng, 10, 12), g, f)
    e = ri.complex_gaussian(rng, (10, 12))
    schedule = tuple(
        ScheduleStep(l=l, symbol=dense_symbol(base.symbol.matrix + e * 0.4 ** (l - 1)))
        for l in range(1, 21)
    )
    report = perturbation.run_experiment(ConvergenceExperiment(base=base, schedule=schedule))
    assert report.passed
    for mode in NormMode:
        trend = report.trend(mode)
        assert trend["input_decay"] <= 1e-6
        assert trend["converged"]


def test_check_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        code = cli.main(["check", "thm-3-2", "--seed", "42", "--draws", "200", "--out", str(path)])
        assert code == cli.EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
