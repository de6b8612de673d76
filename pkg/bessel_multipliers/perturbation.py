"""Convergence of multipliers when the symbol or one of the sequences is perturbed.

An experiment is a base multiplier plus an explicit schedule of perturbed objects,
l = 1..L. Every step is measured against an envelope:
- symbol perturbation: sqrt(B_f B_g) ||U^(l) - U||_X in the same norm X
- synthesis perturbation: ||U||_op sqrt(B_f) times the l^1 (trace class) or l^2
  (Hilbert-Schmidt, operator norm) distance of the sequences
- analysis perturbation: the same with sqrt(B_g)
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import numerics
from .command_errors import DomainError, ShapeError, UnsupportedModeError
from .multiplier import GeneralizedMultiplier, build
from .sequences import SequenceSystem, difference
from .symbols import Symbol, as_symbol, dense_symbol
from .tolerance_config import DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)

CSV_FIELDS = [
    "l",
    "norm",
    "input_distance",
    "multiplier_distance",
    "envelope",
    "satisfied",
    "ratio",
]
CONVERGED_FRACTION = 1e-6


class NormMode(str, Enum):
    OP = "op"
    S1 = "s1"
    S2 = "s2"


class PerturbedSide(str, Enum):
    SYMBOL = "symbol"
    SYNTHESIS = "synthesis"
    ANALYSIS = "analysis"


def norm_of(matrix, mode):
    mode = NormMode(mode)
    if mode is NormMode.OP:
        return numerics.operator_norm(matrix)
    return numerics.schatten_norm(matrix, 1 if mode is NormMode.S1 else 2)


def lp_sequence_distance(seq_a, seq_b, p):
    """(sum_k ||a_k - b_k||^p)^(1/p)."""
    if not p >= 1:
        raise DomainError(f"Sequence distances need p >= 1, got p = {p}.")
    columns = difference(seq_a, seq_b).synthesis_matrix
    lengths = np.linalg.norm(columns, axis=0)
    return float(np.sum(lengths**p) ** (1.0 / p))


@dataclass(frozen=True)
class ScheduleStep:
    """Step l of a schedule; whatever is left as None is taken from the base."""

    l: int
    symbol: Symbol = None
    synthesis: SequenceSystem = None
    analysis: SequenceSystem = None

    @property
    def perturbed_sides(self):
        return {
            side
            for side, value in (
                (PerturbedSide.SYMBOL, self.symbol),
                (PerturbedSide.SYNTHESIS, self.synthesis),
                (PerturbedSide.ANALYSIS, self.analysis),
            )
            if value is not None
        }


@dataclass(frozen=True)
class ConvergenceExperiment:
    base: GeneralizedMultiplier
    schedule: tuple
    norms: tuple = (NormMode.OP, NormMode.S1, NormMode.S2)

    def __post_init__(self):
        object.__setattr__(self, "schedule", tuple(self.schedule))
        object.__setattr__(self, "norms", tuple(NormMode(n) for n in self.norms))
        if len(self.schedule) < 2:
            raise DomainError(f"A schedule needs at least 2 steps, got {len(self.schedule)}.")
        if not self.norms:
            raise DomainError("At least one norm mode is needed.")
        for step in self.schedule:
            self._check_shapes(step)

    def _check_shapes(self, step):
        if step.symbol is not None and step.symbol.shape != self.base.symbol.shape:
            raise ShapeError(
                f"Step {step.l}: symbol shape {step.symbol.shape} differs from the base "
                f"{self.base.symbol.shape}."
            )
        for perturbed, base in (
            (step.synthesis, self.base.synthesis_seq),
            (step.analysis, self.base.analysis_seq),
        ):
            if perturbed is not None and (perturbed.dim, perturbed.count) != (base.dim, base.count):
                raise ShapeError(
                    f"Step {step.l}: {perturbed.count} vectors in C^{perturbed.dim}, "
                    f"base has {base.count} in C^{base.dim}."
                )

    @property
    def side(self):
        """The one perturbed side; a schedule that changes nothing counts as symbol."""
        sides = set().union(*(step.perturbed_sides for step in self.schedule))
        if len(sides) > 1:
            names = ", ".join(sorted(s.value for s in sides))
            raise UnsupportedModeError(f"Schedule perturbs more than one side: {names}.")
        return sides.pop() if sides else PerturbedSide.SYMBOL


@dataclass(frozen=True)
class ConvergenceRow:
    l: int
    norm: NormMode
    input_distance: float
    multiplier_distance: float
    envelope: float
    satisfied: bool

    @property
    def ratio(self):
        """Measured distance over envelope; None when the envelope is 0."""
        return self.multiplier_distance / self.envelope if self.envelope > 0 else None

    def as_dict(self):
        return {
            "l": self.l,
            "norm": self.norm.value,
            "input_distance": self.input_distance,
            "multiplier_distance": self.multiplier_distance,
            "envelope": self.envelope,
            "satisfied": self.satisfied,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class ConvergenceReport:
    side: PerturbedSide
    rows: tuple
    linearity_residual: float = 0.0
    linearity_holds: bool = True
    context: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.linearity_holds and all(row.satisfied for row in self.rows)

    def rows_for(self, mode):
        mode = NormMode(mode)
        return [row for row in self.rows if row.norm is mode]

    def trend(self, mode):
        """Decay of the input, multiplier and envelope columns from first to last step."""
        rows = self.rows_for(mode)
        first, last = rows[0], rows[-1]

        def decay(a, b):
            return b / a if a > 0 else None

        inputs = [row.input_distance for row in rows]
        envelopes = [row.envelope for row in rows]
        input_decreasing = all(b < a for a, b in zip(inputs, inputs[1:]))
        input_decay = decay(first.input_distance, last.input_distance)
        multiplier_decay = decay(first.multiplier_distance, last.multiplier_distance)
        return {
            "input_decay": input_decay,
            "multiplier_decay": multiplier_decay,
            "input_decreasing": input_decreasing,
            "envelope_decreasing": all(b < a for a, b in zip(envelopes, envelopes[1:])),
            "converged": (
                input_decay is not None
                and input_decay <= CONVERGED_FRACTION
                and (multiplier_decay or 0.0) <= CONVERGED_FRACTION
            ),
        }

    def as_dict(self):
        modes = sorted({row.norm for row in self.rows}, key=lambda m: m.value)
        return {
            "side": self.side.value,
            "passed": self.passed,
            "linearity_residual": self.linearity_residual,
            "linearity_holds": self.linearity_holds,
            "context": self.context,
            "rows": [row.as_dict() for row in self.rows],
            "trend": {mode.value: self.trend(mode) for mode in modes},
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.as_dict().items()})
        return buffer.getvalue()


# --- Schedules ---


def harmonic_symbol_schedule(u, e, steps):
    """U^(l) = U + E / l for l = 1..steps."""
    u = as_symbol(u).matrix
    e = numerics.as_cmatrix(e, "E")
    if e.shape != u.shape:
        raise ShapeError(f"Perturbation of shape {e.shape} doesn't fit the symbol {u.shape}.")
    return tuple(ScheduleStep(l=l, symbol=dense_symbol(u + e / l)) for l in range(1, steps + 1))


def harmonic_sequence_schedule(seq, h, steps, side=PerturbedSide.SYNTHESIS):
    """Sequences with synthesis matrix D + H / l for l = 1..steps."""
    side = PerturbedSide(side)
    if side is PerturbedSide.SYMBOL:
        raise UnsupportedModeError("Use harmonic_symbol_schedule for symbol perturbations.")
    h = numerics.as_cmatrix(h, "H")
    if h.shape != seq.synthesis_matrix.shape:
        raise ShapeError(f"Perturbation of shape {h.shape} doesn't fit {seq}.")
    return tuple(
        ScheduleStep(l=l, **{side.value: SequenceSystem(seq.synthesis_matrix + h / l)})
        for l in range(1, steps + 1)
    )


# --- Sweeps ---


def symbol_convergence_sweep(experiment, tolerances=DEFAULT_TOLERANCES):
    """||M_{U^(l)} - M_U||_X <= sqrt(B_f B_g) ||U^(l) - U||_X for each requested X.

    For X = S1 this is the mixed bound ||D_g||_op ||U^(l) - U||_1 ||C_f||_op.
    """
    if experiment.side is not PerturbedSide.SYMBOL:
        raise UnsupportedModeError(
            f"Schedule perturbs the {experiment.side.value} sequence, not the symbol."
        )
    base = experiment.base
    b_f = base.analysis_seq.bessel_bound()
    b_g = base.synthesis_seq.bessel_bound()
    factor = np.sqrt(b_f * b_g)

    rows = []
    for step in experiment.schedule:
        symbol = base.symbol if step.symbol is None else step.symbol
        delta = symbol.matrix - base.symbol.matrix
        moved = build(symbol, base.synthesis_seq, base.analysis_seq).assembled - base.assembled
        for mode in experiment.norms:
            input_distance = norm_of(delta, mode)
            rows.append(
                _row(step.l, mode, input_distance, norm_of(moved, mode), factor * input_distance, tolerances)
            )

    return ConvergenceReport(
        side=PerturbedSide.SYMBOL,
        rows=tuple(rows),
        context={"bessel_analysis": b_f, "bessel_synthesis": b_g, "factor": factor},
    )


def sequence_convergence_sweep(experiment, tolerances=DEFAULT_TOLERANCES):
    """Multiplier distances when exactly one sequence moves.

    Trace class rows use the l^1 distance of the sequences, Hilbert-Schmidt and
    operator-norm rows the l^2 distance. The multiplier difference is also checked
    against build(U, g^(l) - g, f), the multiplier of the difference sequence.
    """
    side = experiment.side
    if side is PerturbedSide.SYMBOL:
        raise UnsupportedModeError("Schedule perturbs the symbol; use the symbol sweep.")
    base = experiment.base
    u_norm = numerics.operator_norm(base.symbol.matrix)
    if side is PerturbedSide.SYNTHESIS:
        fixed_bound = base.analysis_seq.bessel_bound()
    else:
        fixed_bound = base.synthesis_seq.bessel_bound()
    factor = u_norm * np.sqrt(fixed_bound)

    rows = []
    worst_linearity = 0.0
    linearity_holds = True
    for step in experiment.schedule:
        synthesis = step.synthesis or base.synthesis_seq
        analysis = step.analysis or base.analysis_seq
        moved = build(base.symbol, synthesis, analysis).assembled - base.assembled

        if side is PerturbedSide.SYNTHESIS:
            before, after = base.synthesis_seq, synthesis
            expected = build(base.symbol, difference(after, before), analysis).assembled
        else:
            before, after = base.analysis_seq, analysis
            expected = build(base.symbol, synthesis, difference(after, before)).assembled

        residual = numerics.frobenius_norm(moved - expected)
        worst_linearity = max(worst_linearity, residual)
        linearity_holds &= tolerances.equal_within(residual, numerics.frobenius_norm(base.assembled))

        distances = {1: lp_sequence_distance(after, before, 1), 2: lp_sequence_distance(after, before, 2)}
        for mode in experiment.norms:
            input_distance = distances[1] if mode is NormMode.S1 else distances[2]
            rows.append(
                _row(step.l, mode, input_distance, norm_of(moved, mode), factor * input_distance, tolerances)
            )

    if not linearity_holds:
        logger.warning(f"Multiplier difference deviates from the linear term by {worst_linearity:.3e}.")
    return ConvergenceReport(
        side=side,
        rows=tuple(rows),
        linearity_residual=worst_linearity,
        linearity_holds=bool(linearity_holds),
        context={"symbol_norm": u_norm, "fixed_bessel_bound": fixed_bound, "factor": factor},
    )


def run_experiment(experiment, tolerances=DEFAULT_TOLERANCES):
    if experiment.side is PerturbedSide.SYMBOL:
        return symbol_convergence_sweep(experiment, tolerances)
    return sequence_convergence_sweep(experiment, tolerances)


def _row(l, mode, input_distance, multiplier_distance, envelope, tolerances):
    satisfied = bool(tolerances.within_bound(multiplier_distance, envelope))
    if not satisfied:
        logger.warning(
            f"Step {l}, {mode.value}: distance {multiplier_distance:.6e} exceeds envelope {envelope:.6e}."
        )
    return ConvergenceRow(
        l=int(l),
        norm=mode,
        input_distance=float(input_distance),
        multiplier_distance=float(multiplier_distance),
        envelope=float(envelope),
        satisfied=satisfied,
    )
