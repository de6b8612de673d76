"""Unit tests for perturbation schedules and their convergence sweeps."""

import csv
import io
import json

import numpy as np
import pytest

from bessel_multipliers import multiplier, perturbation, symbols
from bessel_multipliers import random_instances as ri
from bessel_multipliers.command_errors import DomainError, ShapeError, UnsupportedModeError
from bessel_multipliers.perturbation import (
    ConvergenceExperiment,
    NormMode,
    PerturbedSide,
    ScheduleStep,
)
from bessel_multipliers.sequences import SequenceSystem, orthonormal_basis


# --- Fixtures ---


@pytest.fixture
def onb_mult():
    onb = orthonormal_basis(3)
    return multiplier.build(np.diag([1.0, 2.0, 3.0]), onb, onb)


@pytest.fixture
def random_mult(rng):
    f = ri.random_bessel(rng, 3, 5)
    g = ri.random_bessel(rng, 4, 6)
    return multiplier.build(ri.random_symbol(rng, 6, 5), g, f)


# --- Sequence distances ---


def test_lp_distance_of_equal_sequences():
    seq = orthonormal_basis(3)
    assert perturbation.lp_sequence_distance(seq, seq, 1) == 0.0


def test_lp_distance_single_vector():
    a = SequenceSystem(np.zeros((2, 3)))
    moved = np.zeros((2, 3))
    moved[:, 1] = [3.0, 4.0]
    b = SequenceSystem(moved)
    assert perturbation.lp_sequence_distance(a, b, 1) == pytest.approx(5.0)
    assert perturbation.lp_sequence_distance(a, b, 2) == pytest.approx(5.0)


def test_lp_two_distance_is_frobenius(rng):
    a, b = ri.random_bessel(rng, 3, 4), ri.random_bessel(rng, 3, 4)
    expected = np.linalg.norm(a.synthesis_matrix - b.synthesis_matrix)
    assert perturbation.lp_sequence_distance(a, b, 2) == pytest.approx(expected)


def test_lp_distance_rejects_small_p():
    seq = orthonormal_basis(2)
    with pytest.raises(DomainError):
        perturbation.lp_sequence_distance(seq, seq, 0.5)


def test_lp_distance_rejects_mismatched_shapes():
    with pytest.raises(ShapeError):
        perturbation.lp_sequence_distance(orthonormal_basis(2), orthonormal_basis(3), 2)


# --- Experiments ---


def test_experiment_needs_two_steps(onb_mult):
    with pytest.raises(DomainError):
        ConvergenceExperiment(base=onb_mult, schedule=(ScheduleStep(l=1),))


def test_experiment_rejects_shape_drift(onb_mult):
    schedule = (ScheduleStep(l=1), ScheduleStep(l=2, symbol=symbols.dense_symbol(np.eye(2))))
    with pytest.raises(ShapeError):
        ConvergenceExperiment(base=onb_mult, schedule=schedule)


def test_experiment_rejects_two_perturbed_sides(onb_mult):
    onb = orthonormal_basis(3)
    schedule = (
        ScheduleStep(l=1, synthesis=onb),
        ScheduleStep(l=2, analysis=onb),
    )
    experiment = ConvergenceExperiment(base=onb_mult, schedule=schedule)
    with pytest.raises(UnsupportedModeError):
        perturbation.run_experiment(experiment)


def test_constant_schedule_has_zero_distances(onb_mult):
    experiment = ConvergenceExperiment(
        base=onb_mult, schedule=(ScheduleStep(l=1), ScheduleStep(l=2), ScheduleStep(l=3))
    )
    report = perturbation.run_experiment(experiment)
    assert report.side is PerturbedSide.SYMBOL
    assert all(row.multiplier_distance == 0.0 for row in report.rows)
    assert all(row.ratio is None for row in report.rows)
    assert report.passed


# --- Symbol sweeps ---


def test_symbol_sweep_on_orthonormal_basis(onb_mult, rng):
    """With orthonormal bases the envelope is attained: distance = ||E|| / l."""
    e = ri.complex_gaussian(rng, (3, 3))
    schedule = perturbation.harmonic_symbol_schedule(onb_mult.symbol, e, 5)
    experiment = ConvergenceExperiment(base=onb_mult, schedule=schedule, norms=("op",))
    report = perturbation.run_experiment(experiment)

    e_norm = np.linalg.norm(e, 2)
    for row in report.rows:
        assert row.multiplier_distance == pytest.approx(e_norm / row.l, rel=1e-12)
        assert row.envelope == pytest.approx(e_norm / row.l, rel=1e-12)
        assert row.satisfied
    trend = report.trend(NormMode.OP)
    assert trend["envelope_decreasing"]
    assert trend["input_decay"] == pytest.approx(0.2)


def test_symbol_sweep_envelopes_hold(random_mult, rng):
    e = ri.complex_gaussian(rng, random_mult.symbol.shape)
    schedule = perturbation.harmonic_symbol_schedule(random_mult.symbol, e, 20)
    report = perturbation.run_experiment(ConvergenceExperiment(base=random_mult, schedule=schedule))
    assert len(report.rows) == 60
    assert report.passed


def test_harmonic_symbol_schedule_rejects_shape(onb_mult):
    with pytest.raises(ShapeError):
        perturbation.harmonic_symbol_schedule(onb_mult.symbol, np.eye(2), 3)


def test_symbol_sweep_rejects_sequence_schedule(onb_mult):
    onb = orthonormal_basis(3)
    schedule = perturbation.harmonic_sequence_schedule(onb, np.eye(3), 3)
    experiment = ConvergenceExperiment(base=onb_mult, schedule=schedule)
    with pytest.raises(UnsupportedModeError):
        perturbation.symbol_convergence_sweep(experiment)


# --- Sequence sweeps ---


@pytest.mark.parametrize("side", [PerturbedSide.SYNTHESIS, PerturbedSide.ANALYSIS])
def test_sequence_sweep_envelopes_hold(random_mult, rng, side):
    seq = random_mult.synthesis_seq if side is PerturbedSide.SYNTHESIS else random_mult.analysis_seq
    h = ri.complex_gaussian(rng, seq.synthesis_matrix.shape)
    schedule = perturbation.harmonic_sequence_schedule(seq, h, 20, side)
    report = perturbation.run_experiment(ConvergenceExperiment(base=random_mult, schedule=schedule))
    assert report.side is side
    assert report.linearity_holds
    assert report.passed
    assert report.trend("s2")["input_decreasing"]


def test_sequence_sweep_single_vector(onb_mult):
    h = np.zeros((3, 3))
    h[:, 0] = [0.0, 3.0, 4.0]
    schedule = perturbation.harmonic_sequence_schedule(
        onb_mult.analysis_seq, h, 4, PerturbedSide.ANALYSIS
    )
    report = perturbation.run_experiment(
        ConvergenceExperiment(base=onb_mult, schedule=schedule, norms=("s1", "s2"))
    )
    for row in report.rows:
        assert row.input_distance == pytest.approx(5.0 / row.l)
        assert row.satisfied


def test_harmonic_sequence_schedule_rejects_symbol_side():
    seq = orthonormal_basis(2)
    with pytest.raises(UnsupportedModeError):
        perturbation.harmonic_sequence_schedule(seq, np.eye(2), 3, PerturbedSide.SYMBOL)


# --- Reports ---


def test_report_csv(onb_mult, rng):
    schedule = perturbation.harmonic_symbol_schedule(
        onb_mult.symbol, ri.complex_gaussian(rng, (3, 3)), 3
    )
    report = perturbation.run_experiment(ConvergenceExperiment(base=onb_mult, schedule=schedule))
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert list(rows[0]) == perturbation.CSV_FIELDS
    assert len(rows) == 9
    assert {row["norm"] for row in rows} == {"op", "s1", "s2"}


def test_report_json_is_stable(onb_mult, rng):
    schedule = perturbation.harmonic_symbol_schedule(
        onb_mult.symbol, ri.complex_gaussian(rng, (3, 3)), 3
    )
    experiment = ConvergenceExperiment(base=onb_mult, schedule=schedule)
    first = perturbation.run_experiment(experiment).to_json()
    assert first == perturbation.run_experiment(experiment).to_json()
    data = json.loads(first)
    assert data["side"] == "symbol"
    assert set(data["trend"]) == {"op", "s1", "s2"}
