"""Built-in check suites, registered through the bm_get_check_suites() hook.

Each draw function builds one random instance from its generator, runs the checks
for one result, and folds the certificates and verdicts into a DrawOutcome.
"""

import numpy as np

import bessel_multipliers

from . import invertibility
from . import multiplier
from . import numerics
from . import perturbation
from . import random_instances as ri
from .certificates import Status, identity_certificate, inequality_certificate, residual_certificate
from .command_errors import PreconditionError
from .hookspecs import CheckSuite, DrawOutcome
from .sequences import SequenceSystem


RIESZ_CONDITION = 1e2
INVERSION_CONDITION = 50.0
SCHEDULE_STEPS = 20
TIGHT_FRACTION = 0.2
PERTURBATION_BOUNDS = (1.0, 2.0)


def outcome(certificates=(), verdicts=(), statuses=(), details=None):
    """Fold certificates and proposition verdicts into one DrawOutcome.

    Any failure fails the draw. Otherwise one passing part makes it pass, even if
    other parts were not applicable.
    """
    statuses = list(statuses) + [verdict.status for verdict in verdicts]
    if certificates:
        statuses.append(Status.PASS if all(c.passed for c in certificates) else Status.FAIL)
    certificates = list(certificates) + [c for v in verdicts for c in v.certificates]

    if Status.FAIL in statuses:
        status = Status.FAIL
    elif Status.PASS in statuses:
        status = Status.PASS
    elif Status.NOT_APPLICABLE in statuses:
        status = Status.NOT_APPLICABLE
    else:
        status = Status.NO_CONCLUSION

    margins = {}
    for c in certificates:
        margins[c.claim] = min(margins.get(c.claim, np.inf), c.margin)
    details = dict(details or {})
    failed = sorted({c.claim for c in certificates if not c.passed})
    if failed:
        details["failed_claims"] = failed
    return DrawOutcome(status=status, margins=margins, details=details)


# --- Draw functions ---


def draw_bounds_and_adjoint(rng, shape, tolerances):
    d_f, d_g = shape.dim(rng), shape.dim(rng)
    n_f, n_g = shape.count(rng), shape.count(rng)
    f = ri.random_bessel(rng, d_f, n_f)
    g = ri.random_bessel(rng, d_g, n_g)
    mult = multiplier.build(ri.random_symbol(rng, n_g, n_f), g, f)

    x = ri.complex_gaussian(rng, d_f)
    applied = np.linalg.norm(mult.apply(x) - mult.assembled @ x)
    certificates = [
        multiplier.assembly_certificate(mult, tolerances),
        multiplier.adjoint_check(mult, tolerances),
        *multiplier.norm_certificates(mult, tolerances),
        identity_certificate(
            "apply-matches-assembly",
            applied,
            tolerances,
            scale=multiplier.assembly_scale(mult) * np.linalg.norm(x),
        ),
        multiplier.positivity_check(ri.random_psd_symbol(rng, n_f), f, tolerances),
    ]
    return outcome(certificates, details={"dims": [d_f, d_g], "counts": [n_f, n_g]})


def draw_bounded_below(rng, shape, tolerances):
    d = shape.dim(rng)
    n_f = shape.count(rng, minimum=d)
    f = ri.random_frame(rng, d, n_f)

    if rng.random() < 0.5:
        # f = g with a positive symbol: Re<Mf, f> is bounded below.
        mult = multiplier.build(ri.random_psd_symbol(rng, n_f), f, f)
        a = 0.9 * numerics.hermitian_eig(numerics.hermitian_part(mult.assembled), tolerances).smallest
    else:
        n_g = shape.count(rng, minimum=d)
        g = ri.random_frame(rng, d, n_g)
        mult = multiplier.build(ri.random_symbol(rng, n_g, n_f), g, f)
        a = 0.5 * numerics.smallest_singular(mult.assembled)

    report = invertibility.bounded_below_frame_bound(mult, tolerances)
    statuses = [] if report.concluded else [Status.NO_CONCLUSION]
    verdicts = []
    if a > 0:
        verdicts.append(invertibility.sesquilinear_lower_check(mult, a, tolerances, rng=rng))
    return outcome(report.certificates, verdicts, statuses, details={"dim": d, "a": a})


def draw_identity_perturbation(rng, shape, tolerances):
    d = shape.dim(rng)
    n = shape.count(rng, minimum=d)
    f = ri.random_frame(rng, d, n)
    dual = f.canonical_dual(tolerances)

    # M_{I, dual, f} = I, so M_{I + V, dual, f} = I + D_dual V C_f.
    v = ri.complex_gaussian(rng, (n, n))
    target = rng.uniform(0.05, 0.9)
    v *= target / numerics.operator_norm(multiplier.build(v, dual, f).assembled)
    mult = multiplier.build(np.eye(n) + v, dual, f)

    lambda1 = numerics.identity_residual(mult.assembled)
    half = lambda1 / 2
    lambda2 = (lambda1 - half) / (1 - lambda1)
    verdicts = [
        invertibility.identity_perturbation_check(mult, lambda1, 0.0, tolerances, rng=rng),
        invertibility.identity_perturbation_check(mult, half, lambda2, tolerances, rng=rng),
    ]
    return outcome(verdicts=verdicts, details={"dim": d, "lambda1": lambda1})


def draw_riesz_lower(rng, shape, tolerances):
    d = shape.dim(rng)
    f = ri.random_riesz_basis(rng, d, RIESZ_CONDITION)
    g = ri.random_riesz_basis(rng, d, RIESZ_CONDITION)
    mult = multiplier.build(ri.random_symbol(rng, d, d), g, f)
    certificates = [
        multiplier.riesz_lower_bound(mult, tolerances),
        *multiplier.hilbert_schmidt_riesz_bounds(mult, tolerances),
    ]
    return outcome(certificates, details={"dim": d})


def draw_composition(rng, shape, tolerances):
    n = shape.dim(rng)
    f = ri.random_riesz_basis(rng, n, RIESZ_CONDITION)
    l_seq = f.biorthogonal_dual(tolerances)
    g = ri.random_bessel(rng, shape.dim(rng), shape.count(rng))
    h = ri.random_bessel(rng, shape.dim(rng), shape.count(rng))
    first = multiplier.build(ri.random_symbol(rng, g.count, n), g, f)
    second = multiplier.build(ri.random_symbol(rng, n, h.count), l_seq, h)

    bumped = SequenceSystem(l_seq.synthesis_matrix + 1e-3 * ri.complex_gaussian(rng, (n, n)))
    try:
        multiplier.compose_biorthogonal(first, multiplier.build(second.symbol, bumped, h), tolerances)
        rejected = False
    except PreconditionError:
        rejected = True

    certificates = [
        multiplier.composition_check(first, second, tolerances),
        residual_certificate("prop-3.8-rejects-non-biorthogonal", 0.0 if rejected else 1.0, 0.0),
    ]
    return outcome(certificates, details={"dim": n})


def draw_riesz_inverse(rng, shape, tolerances):
    d = shape.dim(rng)
    f = ri.random_riesz_basis(rng, d, INVERSION_CONDITION)
    g = ri.random_riesz_basis(rng, d, INVERSION_CONDITION)
    singular = bool(rng.random() < 0.25)
    if singular:
        u = ri.random_singular_symbol(rng, d)
    else:
        u = ri.random_invertible_symbol(rng, d, INVERSION_CONDITION)
    _, report = invertibility.riesz_inverse(multiplier.build(u, g, f), tolerances)
    return outcome(report.certificates, details={"dim": d, "singular_symbol": singular})


def draw_lower_frame(rng, shape, tolerances):
    d = shape.dim(rng)
    f = ri.random_frame(rng, d, shape.count(rng, minimum=d))
    g = ri.random_frame(rng, d, shape.count(rng, minimum=d))
    mult = multiplier.build(ri.random_symbol(rng, g.count, f.count), g, f)
    try:
        report = invertibility.lower_frame_from_invertible(mult, tolerances)
    except PreconditionError as e:
        return outcome(statuses=[Status.NO_CONCLUSION], details={"dim": d, "reason": e.message})
    return outcome(report.certificates, details={"dim": d})


def draw_riesz_iff(rng, shape, tolerances):
    d = shape.dim(rng)
    case = ("riesz", "overcomplete", "rank_deficient")[int(rng.integers(3))]
    if case == "riesz":
        n = d
        f = ri.random_riesz_basis(rng, d, INVERSION_CONDITION)
    elif case == "overcomplete":
        n = d + int(rng.integers(1, 4))
        f = ri.random_frame(rng, d, n)
    else:
        n = d
        f = ri.rank_deficient_sequence(rng, d, d, rank=d - 1)

    g = ri.random_riesz_basis(rng, n, INVERSION_CONDITION)
    u = ri.random_invertible_symbol(rng, n, INVERSION_CONDITION)
    verdict = invertibility.riesz_iff_corollary(multiplier.build(u, g, f), tolerances)
    return outcome(verdicts=[verdict], details={"dim": d, "case": case})


def draw_perturbed_frame(rng, shape, tolerances):
    d = max(2, shape.dim(rng))
    n = shape.count(rng, minimum=d)
    tight = bool(rng.random() < TIGHT_FRACTION)
    lower, upper = PERTURBATION_BOUNDS
    if tight:
        lower = upper = 1.0
    f = ri.scaled_frame(rng, d, n, lower, upper)

    # ||D_h||_op = 1, so mu* is exactly the chosen mu.
    h = ri.complex_gaussian(rng, (d, n))
    h /= numerics.operator_norm(h)
    mu = rng.uniform(0.05, 1.2) * invertibility.mu_interval_limit(*PERTURBATION_BOUNDS)
    g = SequenceSystem(f.synthesis_matrix + np.sqrt(mu) * h)

    e = ri.complex_gaussian(rng, (n, n))
    e /= numerics.operator_norm(e)
    delta = rng.uniform(0.05, 1.2) * (PERTURBATION_BOUNDS[0] / PERTURBATION_BOUNDS[1]) ** 2
    verdict = invertibility.perturbation_invertibility(f, g, np.eye(n) + delta * e, tolerances)
    return outcome(verdicts=[verdict], details={"dim": d, "tight": tight, "mu": mu, "delta": delta})


def draw_convergence(rng, shape, tolerances):
    d_f, d_g = shape.dim(rng), shape.dim(rng)
    n_f, n_g = shape.count(rng), shape.count(rng)
    f = ri.random_bessel(rng, d_f, n_f)
    g = ri.random_bessel(rng, d_g, n_g)
    base = multiplier.build(ri.random_symbol(rng, n_g, n_f), g, f)

    schedules = [
        perturbation.harmonic_symbol_schedule(
            base.symbol, ri.complex_gaussian(rng, (n_g, n_f)), SCHEDULE_STEPS
        ),
        perturbation.harmonic_sequence_schedule(
            g, ri.complex_gaussian(rng, (d_g, n_g)), SCHEDULE_STEPS, perturbation.PerturbedSide.SYNTHESIS
        ),
        perturbation.harmonic_sequence_schedule(
            f, ri.complex_gaussian(rng, (d_f, n_f)), SCHEDULE_STEPS, perturbation.PerturbedSide.ANALYSIS
        ),
    ]
    certificates = []
    for schedule in schedules:
        report = perturbation.run_experiment(
            perturbation.ConvergenceExperiment(base=base, schedule=schedule), tolerances
        )
        side = report.side.value
        certificates.extend(
            inequality_certificate(
                f"prop-5.2-{side}-{row.norm.value}", row.multiplier_distance, row.envelope, tolerances
            )
            for row in report.rows
        )
        certificates.append(
            residual_certificate(
                f"prop-5.2-{side}-linearity", 0.0 if report.linearity_holds else 1.0, 0.0
            )
        )

    constant = perturbation.ConvergenceExperiment(
        base=base, schedule=(perturbation.ScheduleStep(l=1), perturbation.ScheduleStep(l=2))
    )
    still = perturbation.run_experiment(constant, tolerances)
    certificates.append(
        residual_certificate(
            "prop-5.2-constant-schedule", max(row.multiplier_distance for row in still.rows), 0.0
        )
    )
    return outcome(certificates, details={"dims": [d_f, d_g], "counts": [n_f, n_g]})


BUILTIN_SUITES = (
    CheckSuite(
        "thm-3-2",
        "Assembly, adjoint, operator and Schatten norm bounds, positivity.",
        draw_bounds_and_adjoint,
    ),
    CheckSuite(
        "prop-3-5",
        "Bounded-below and sesquilinear lower bounds force frames.",
        draw_bounded_below,
    ),
    CheckSuite(
        "prop-3-6",
        "Multipliers close to the identity are bounded below.",
        draw_identity_perturbation,
    ),
    CheckSuite("prop-3-7", "Lower norm bound for Riesz bases.", draw_riesz_lower),
    CheckSuite("prop-3-8", "Composition over biorthogonal sequences.", draw_composition),
    CheckSuite("prop-4-1", "Inverse formula for Riesz bases, both directions.", draw_riesz_inverse),
    CheckSuite("prop-4-2", "Invertible multipliers force lower frame bounds.", draw_lower_frame),
    CheckSuite(
        "cor-4-3",
        "With g Riesz and U bijective, M is invertible iff f is Riesz.",
        draw_riesz_iff,
    ),
    CheckSuite(
        "prop-4-4",
        "Perturbed frames and symbols keep the multiplier invertible.",
        draw_perturbed_frame,
    ),
    CheckSuite(
        "prop-5-2",
        "Envelopes for symbol and sequence perturbation schedules.",
        draw_convergence,
    ),
)


@bessel_multipliers.hookimpl
def bm_get_check_suites():
    """Built-in suites."""
    return list(BUILTIN_SUITES)
