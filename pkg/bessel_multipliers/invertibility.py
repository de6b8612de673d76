"""Invertibility of multipliers and the frame properties it forces.

"Bounded below" is read in finite dimensions as sigma_min above the relative floor
invert_floor * sigma_max. Hypotheses that quantify over every vector of the space
are checked with exact operator-norm certificates where one exists, and otherwise
on a probe set; each Hypothesis records which of the two it was.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import linalg

from . import numerics
from . import symbols
from .certificates import (
    Hypothesis,
    PropositionVerdict,
    inequality_certificate,
    residual_certificate,
)
from .command_errors import (
    DomainError,
    PreconditionError,
    ShapeError,
    SingularMatrixError,
)
from .multiplier import build, require_riesz_bases
from .random_instances import random_unit_vectors
from .sequences import difference
from .tolerance_config import DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)

DEFAULT_PROBES = 64
THETA_GRID = 72


class InverseMethod(str, Enum):
    RIESZ_FORMULA = "RieszFormula"
    DIRECT_SOLVE = "DirectSolve"


@dataclass(frozen=True)
class InvertibilityReport:
    sigma_min: float
    invertible: bool
    inverse_residual: float = None
    method: InverseMethod = None
    derived_lower_frame_bounds: dict = field(default_factory=dict)
    certificates: tuple = ()

    @property
    def concluded(self):
        """False when nothing could be certified, e.g. M is not bounded below."""
        return bool(self.certificates)

    @property
    def passed(self):
        return all(c.passed for c in self.certificates)

    def as_dict(self):
        return {
            "sigma_min": float(self.sigma_min),
            "invertible": bool(self.invertible),
            "inverse_residual": (
                None if self.inverse_residual is None else float(self.inverse_residual)
            ),
            "method": None if self.method is None else self.method.value,
            "derived_lower_frame_bounds": {
                k: float(v) for k, v in self.derived_lower_frame_bounds.items()
            },
            "certificates": [c.as_dict() for c in self.certificates],
        }


@dataclass(frozen=True)
class ReproducingPairVerdict:
    is_reproducing_pair: bool
    sigma_min: float
    sigma_max: float
    floor: float

    def as_dict(self):
        return {
            "is_reproducing_pair": bool(self.is_reproducing_pair),
            "sigma_min": float(self.sigma_min),
            "sigma_max": float(self.sigma_max),
            "floor": float(self.floor),
        }


# --- Helper functions ---


def _bounded_below(matrix, tolerances):
    """(sigma_min, sigma_max, floor, bounded_below) for an assembled matrix."""
    spectrum = numerics.singular_values(matrix)
    sigma_min = numerics.smallest_singular(matrix)
    floor = tolerances.singular_floor(spectrum.sigma_max)
    return sigma_min, spectrum.sigma_max, floor, spectrum.sigma_max > 0 and sigma_min > floor


def _is_invertible(matrix, tolerances):
    *_, bounded_below = _bounded_below(matrix, tolerances)
    return matrix.shape[0] == matrix.shape[1] and bounded_below


def _require_square(mult):
    if not mult.is_square:
        raise ShapeError(
            f"Multiplier maps C^{mult.input_dim} to C^{mult.output_dim}; a square one is needed."
        )


def probe_vectors(matrix, rng=None, count=DEFAULT_PROBES):
    """Unit vectors on which hypotheses quantified over all f are tested.

    Random complex directions plus the eigenvectors of M and of its Hermitian part,
    and every right singular vector of M. The last always include the direction of
    sigma_min, where the hypotheses checked here are hardest to meet.
    """
    matrix = numerics.as_cmatrix(matrix)
    dim = matrix.shape[1]
    rng = np.random.default_rng(0) if rng is None else rng

    candidates = [random_unit_vectors(rng, dim, count)]
    if matrix.shape[0] == dim:
        candidates.append(linalg.eig(matrix)[1])
        candidates.append(linalg.eigh(numerics.hermitian_part(matrix))[1])
    candidates.append(numerics.svd(matrix).right)

    columns = np.hstack(candidates)
    norms = np.linalg.norm(columns, axis=0)
    return columns[:, norms > 0] / norms[norms > 0]


def _frame_lower_certificates(mult, constant, tolerances, claim_prefix):
    """lambda_min(S_f) >= C^2 / (B_g ||U||^2), and the mirrored bound for g."""
    u_norm = numerics.operator_norm(mult.symbol.matrix)
    b_f = mult.analysis_seq.bessel_bound()
    b_g = mult.synthesis_seq.bessel_bound()
    derived = {
        "analysis": constant**2 / (b_g * u_norm**2),
        "synthesis": constant**2 / (b_f * u_norm**2),
    }
    actual = {
        "analysis": mult.analysis_seq.frame_bounds().lower,
        "synthesis": mult.synthesis_seq.frame_bounds().lower,
    }
    certificates = tuple(
        inequality_certificate(
            f"{claim_prefix}-{role}-lower-frame",
            derived[role],
            actual[role],
            tolerances,
            constant=constant,
            symbol_norm=u_norm,
        )
        for role in ("analysis", "synthesis")
    )
    return derived, certificates


# --- Inversion ---


def riesz_inverse(mult, tolerances=DEFAULT_TOLERANCES):
    """Invert M through M^-1 = M_{U^-1, f~, g~} for Riesz bases f and g.

    Returns (inverse, report). Whenever U clears the invertibility floor the inverse
    is built from the formula and its round trips are certified, even if M itself
    falls below the floor: sigma_min(M) >= sigma_min(U) sqrt(A_f A_g) keeps it
    invertible. report.invertible still reports whether M clears the floor.

    When U is singular, inverse is None and the report certifies that M is at least
    as close to singular.

    Raises:
        PreconditionError: f or g is not a Riesz basis.
    """
    require_riesz_bases(mult, tolerances)

    u = mult.symbol.matrix
    f_bounds = mult.analysis_seq.frame_bounds()
    g_bounds = mult.synthesis_seq.frame_bounds()
    symbol_spectrum = numerics.singular_values(u)
    sigma_min, sigma_max, floor, multiplier_invertible = _bounded_below(mult.assembled, tolerances)

    if not _is_invertible(u, tolerances):
        # sigma_min(D_g U C_f) <= ||D_g|| sigma_min(U) ||C_f||
        singular = inequality_certificate(
            "prop-4.1-singular-symbol",
            sigma_min,
            symbol_spectrum.sigma_min * np.sqrt(f_bounds.upper * g_bounds.upper),
            tolerances,
            scale=sigma_max,
            symbol_sigma_min=symbol_spectrum.sigma_min,
        )
        if multiplier_invertible:
            logger.warning(
                f"Symbol is singular but sigma_min(M) = {sigma_min:.3e} clears the floor {floor:.3e}."
            )
        report = InvertibilityReport(
            sigma_min=sigma_min, invertible=multiplier_invertible, certificates=(singular,)
        )
        return None, report

    lower = symbol_spectrum.sigma_min * np.sqrt(f_bounds.lower * g_bounds.lower)
    bounded_below = inequality_certificate(
        "prop-4.1-bounded-below",
        lower,
        sigma_min,
        tolerances,
        scale=sigma_max,
        symbol_sigma_min=symbol_spectrum.sigma_min,
    )

    inverse = build(
        symbols.invert(mult.symbol, tolerances),
        mult.analysis_seq.biorthogonal_dual(tolerances),
        mult.synthesis_seq.biorthogonal_dual(tolerances),
    )
    # cond(U) cond(D_f) cond(D_g) bounds the condition of every product formed below.
    condition = (
        symbol_spectrum.sigma_max
        / symbol_spectrum.sigma_min
        * np.sqrt(f_bounds.upper * g_bounds.upper / (f_bounds.lower * g_bounds.lower))
    )
    allowed = numerics.inversion_allowance(condition, mult.output_dim, tolerances)

    forward = numerics.identity_residual(mult.assembled @ inverse.assembled)
    backward = numerics.identity_residual(inverse.assembled @ mult.assembled)

    # C_f M^-1 D_g is the inverse symbol.
    recovered = (
        mult.analysis_seq.analysis_matrix @ inverse.assembled @ mult.synthesis_seq.synthesis_matrix
    )
    converse = numerics.identity_residual(u @ recovered)

    certificates = [
        bounded_below,
        residual_certificate("prop-4.1-right-inverse", forward, allowed, condition=condition),
        residual_certificate("prop-4.1-left-inverse", backward, allowed, condition=condition),
        residual_certificate("prop-4.1-converse", converse, allowed, condition=condition),
    ]
    if multiplier_invertible:
        direct = numerics.inverse(mult.assembled, tolerances)
        scale = max(numerics.frobenius_norm(direct), 1.0)
        certificates.append(
            residual_certificate(
                "prop-4.1-direct-agreement",
                numerics.frobenius_norm(inverse.assembled - direct),
                allowed * scale,
            )
        )
    else:
        logger.info(
            f"sigma_min(M) = {sigma_min:.3e} is below the floor {floor:.3e}; "
            "only the inverse formula is checked."
        )

    report = InvertibilityReport(
        sigma_min=sigma_min,
        invertible=multiplier_invertible,
        inverse_residual=max(forward, backward),
        method=InverseMethod.RIESZ_FORMULA,
        certificates=tuple(certificates),
    )
    return inverse, report


def direct_inverse_report(mult, tolerances=DEFAULT_TOLERANCES):
    """Invert the assembled matrix directly; for square multipliers of any sequences.

    Returns (inverse matrix or None, report). Non-square multipliers are reported
    as not invertible.
    """
    sigma_min, *_ = _bounded_below(mult.assembled, tolerances)
    if not mult.is_square:
        return None, InvertibilityReport(sigma_min=sigma_min, invertible=False)

    try:
        inverse = numerics.inverse(mult.assembled, tolerances)
    except SingularMatrixError as e:
        logger.info(e.message)
        return None, InvertibilityReport(sigma_min=sigma_min, invertible=False)

    residual = max(
        numerics.identity_residual(mult.assembled @ inverse),
        numerics.identity_residual(inverse @ mult.assembled),
    )
    report = InvertibilityReport(
        sigma_min=sigma_min,
        invertible=True,
        inverse_residual=residual,
        method=InverseMethod.DIRECT_SOLVE,
        certificates=(
            residual_certificate("direct-inverse-residual", residual, tolerances.bound_slack),
        ),
    )
    return inverse, report


# --- Frame conditions forced by invertibility ---


def lower_frame_from_invertible(mult, tolerances=DEFAULT_TOLERANCES):
    """Lower frame bounds that an invertible M forces on both sequences.

    For g: A_g >= 1 / ((||U|| ||M^-1||)^2 B_f); for f the same with B_g.

    Raises:
        PreconditionError: M is not invertible.
    """
    _require_square(mult)
    sigma_min, *_ = _bounded_below(mult.assembled, tolerances)
    if not _is_invertible(mult.assembled, tolerances):
        raise PreconditionError(
            f"Multiplier is not invertible: sigma_min = {sigma_min:.3e}."
        )

    # ||M^-1|| = 1 / sigma_min, so C = 1 / ||M^-1|| in the bounded-below bound.
    derived, certificates = _frame_lower_certificates(
        mult, sigma_min, tolerances, "prop-4.2"
    )
    return InvertibilityReport(
        sigma_min=sigma_min,
        invertible=True,
        derived_lower_frame_bounds=derived,
        certificates=certificates,
    )


def bounded_below_frame_bound(mult, tolerances=DEFAULT_TOLERANCES):
    """A bounded-below M forces {f_k} to be a frame with A_f >= C^2 / (B_g ||U||^2).

    C is sigma_min of M. If C is not above the floor there is no conclusion, and
    the report carries no certificates.
    """
    sigma_min, _, _, bounded_below = _bounded_below(mult.assembled, tolerances)
    invertible = mult.is_square and bounded_below
    if not bounded_below:
        return InvertibilityReport(sigma_min=sigma_min, invertible=invertible)

    u_norm = numerics.operator_norm(mult.symbol.matrix)
    b_g = mult.synthesis_seq.bessel_bound()
    derived = sigma_min**2 / (b_g * u_norm**2)
    certificate = inequality_certificate(
        "prop-3.5(1)-analysis-lower-frame",
        derived,
        mult.analysis_seq.frame_bounds().lower,
        tolerances,
        constant=sigma_min,
        bessel_synthesis=b_g,
        symbol_norm=u_norm,
    )
    return InvertibilityReport(
        sigma_min=sigma_min,
        invertible=invertible,
        derived_lower_frame_bounds={"analysis": derived},
        certificates=(certificate,),
    )


def riesz_iff_corollary(mult, tolerances=DEFAULT_TOLERANCES):
    """With g a Riesz basis and U bijective: M invertible <=> f a Riesz basis.

    Raises:
        PreconditionError: g is not a Riesz basis or U is not invertible.
    """
    if not mult.synthesis_seq.classify(tolerances).is_riesz_basis:
        raise PreconditionError("The synthesis sequence must be a Riesz basis.")
    u = mult.symbol.matrix
    if not _is_invertible(u, tolerances):
        raise PreconditionError("The symbol must be bijective.")

    multiplier_invertible = _is_invertible(mult.assembled, tolerances)
    f_riesz = mult.analysis_seq.classify(tolerances).is_riesz_basis
    sigma_min, *_ = _bounded_below(mult.assembled, tolerances)

    certificate = residual_certificate(
        "cor-4.3-iff",
        0.0 if multiplier_invertible == f_riesz else 1.0,
        0.0,
        multiplier_invertible=multiplier_invertible,
        analysis_riesz=f_riesz,
    )
    return PropositionVerdict(
        proposition="cor-4.3",
        hypotheses=(
            Hypothesis("synthesis-riesz-basis", True),
            Hypothesis("symbol-bijective", True, value=numerics.smallest_singular(u)),
        ),
        conclusion_checked=True,
        certificates=(certificate,),
        margins={"multiplier_sigma_min": sigma_min},
    )


def sesquilinear_lower_check(mult, a, tolerances=DEFAULT_TOLERANCES, rng=None, probes=DEFAULT_PROBES):
    """A||f||^2 <= |<Mf, f>| for all f makes both sequences frames.

    The hypothesis is certified when lambda_min(Re(e^{i theta} M)) >= A for some
    theta on a grid, and is otherwise only probed.
    """
    _require_square(mult)
    if not a > 0:
        raise DomainError(f"The sesquilinear lower bound must be positive, got {a}.")
    matrix = mult.assembled

    vectors = probe_vectors(matrix, rng, probes)
    values = np.abs(np.einsum("ij,ij->j", np.conj(vectors), matrix @ vectors))
    probe_min = float(np.min(values))
    probed = bool(tolerances.within_bound(a, probe_min, a))

    rotated_min = max(
        numerics.hermitian_eig(numerics.hermitian_part(np.exp(1j * theta) * matrix), tolerances).smallest
        for theta in np.linspace(0.0, 2 * np.pi, THETA_GRID, endpoint=False)
    )
    certified = bool(tolerances.within_bound(a, rotated_min, a))

    hypothesis = Hypothesis(
        "sesquilinear-lower",
        certified or probed,
        mode="certified" if certified else "probed",
        value=rotated_min if certified else probe_min,
        bound=a,
    )
    if not hypothesis.holds:
        return PropositionVerdict("prop-3.5(2)", (hypothesis,), False, margins={"probe_min": probe_min})

    derived, certificates = _frame_lower_certificates(mult, a, tolerances, "prop-3.5(2)")
    return PropositionVerdict(
        "prop-3.5(2)",
        (hypothesis,),
        True,
        certificates=certificates,
        margins={"probe_min": probe_min, **{f"derived_{k}": v for k, v in derived.items()}},
    )


def identity_perturbation_check(
    mult, lambda1, lambda2=0.0, tolerances=DEFAULT_TOLERANCES, rng=None, probes=DEFAULT_PROBES
):
    """||f - Mf|| <= lambda1 ||f|| + lambda2 ||Mf|| makes M bounded below.

    The conclusion is sigma_min(M) >= (1 - lambda1) / (1 + lambda2). If in addition
    ||I - M|| <= lambda1, the adjoint gets the same bound and both sequences are
    frames.

    Raises:
        DomainError: lambda1 >= 1 or lambda2 <= -1.
    """
    if not lambda1 < 1:
        raise DomainError(f"lambda1 must be below 1, got {lambda1}.")
    if not lambda2 > -1:
        raise DomainError(f"lambda2 must be above -1, got {lambda2}.")
    _require_square(mult)
    matrix = mult.assembled

    deviation = numerics.identity_residual(matrix)
    close_to_identity = bool(tolerances.within_bound(deviation, lambda1))
    certified = lambda2 >= 0 and close_to_identity

    vectors = probe_vectors(matrix, rng, probes)
    images = matrix @ vectors
    lhs = np.linalg.norm(vectors - images, axis=0)
    rhs = lambda1 + lambda2 * np.linalg.norm(images, axis=0)
    probed = bool(np.all([tolerances.within_bound(l, r) for l, r in zip(lhs, rhs)]))

    hypothesis = Hypothesis(
        "identity-perturbation",
        certified or probed,
        mode="certified" if certified else "probed",
        value=deviation,
        bound=lambda1,
    )
    margins = {"identity_deviation": deviation}
    if not hypothesis.holds:
        return PropositionVerdict("prop-3.6", (hypothesis,), False, margins=margins)

    sigma_min = numerics.smallest_singular(matrix)
    lower = (1 - lambda1) / (1 + lambda2)
    certificates = [
        inequality_certificate("prop-3.6(1)-bounded-below", lower, sigma_min, tolerances)
    ]
    if close_to_identity:
        certificates.append(
            inequality_certificate(
                "prop-3.6(2)-adjoint-bounded-below",
                1 - lambda1,
                numerics.smallest_singular(numerics.adjoint(matrix)),
                tolerances,
            )
        )
        _, frame_certificates = _frame_lower_certificates(
            mult, 1 - lambda1, tolerances, "prop-3.6(2)"
        )
        certificates.extend(frame_certificates)

    margins.update(sigma_min=sigma_min, lower=lower)
    return PropositionVerdict("prop-3.6", (hypothesis,), True, tuple(certificates), margins)


def reproducing_pair_check(f_seq, g_seq, tolerances=DEFAULT_TOLERANCES):
    """(f, g) is a reproducing pair iff S = D_g C_f is invertible."""
    if f_seq.dim != g_seq.dim or f_seq.count != g_seq.count:
        raise ShapeError("A reproducing pair needs sequences of equal dimension and length.")
    pair_operator = build(symbols.identity_symbol(f_seq.count), g_seq, f_seq).assembled
    sigma_min, sigma_max, floor, bounded_below = _bounded_below(pair_operator, tolerances)
    return ReproducingPairVerdict(
        is_reproducing_pair=bool(bounded_below),
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        floor=floor,
    )


def mu_interval_limit(lower, upper):
    """(1/B) ((A B^2 - A^2 B) / (A^2 + B^2))^2; zero for tight frames."""
    return ((lower * upper**2 - lower**2 * upper) / (lower**2 + upper**2)) ** 2 / upper


def perturbation_invertibility(f_seq, g_seq, u, tolerances=DEFAULT_TOLERANCES):
    """A frame f, a g close to it and a U close to I give an invertible M_{U, f, g}.

    Hypotheses: mu* = lambda_max(S_{f-g}) lies below the interval limit, and
    ||U - I|| < A^2 / B^2. Conclusions: g is a frame with A_g >= (sqrt(A) - sqrt(mu*))^2,
    and M_{U, f, g} (synthesis f, analysis g) is invertible. Tight frames have an
    empty interval and are never applicable.
    """
    if not f_seq.classify(tolerances).is_frame:
        raise PreconditionError("The unperturbed sequence must be a frame.")
    u = symbols.as_symbol(u)
    if u.shape != (f_seq.count, f_seq.count):
        raise ShapeError(f"Symbol must be {f_seq.count} x {f_seq.count}, got {u.shape}.")

    bounds = f_seq.frame_bounds()
    a, b = bounds.lower, bounds.upper
    mu = difference(f_seq, g_seq).bessel_bound()
    limit = 0.0 if bounds.is_tight else mu_interval_limit(a, b)
    symbol_deviation = numerics.identity_residual(u.matrix)
    symbol_limit = a**2 / b**2

    hypotheses = (
        Hypothesis("mu-interval", bool(limit > 0 and mu < limit), value=mu, bound=limit),
        Hypothesis(
            "symbol-near-identity",
            bool(symbol_deviation < symbol_limit),
            value=symbol_deviation,
            bound=symbol_limit,
        ),
    )
    margins = {"mu": mu, "mu_limit": limit, "symbol_deviation": symbol_deviation}
    if not all(h.holds for h in hypotheses):
        return PropositionVerdict("prop-4.4", hypotheses, False, margins=margins)

    g_class = g_seq.classify(tolerances)
    g_lower = g_seq.frame_bounds().lower
    mult = build(u, f_seq, g_seq)
    sigma_min, _, floor, _ = _bounded_below(mult.assembled, tolerances)

    unperturbed = build(u, f_seq, f_seq).assembled
    u_norm = numerics.operator_norm(u.matrix)
    certificates = (
        residual_certificate("prop-4.4(1)-frame", 0.0 if g_class.is_frame else 1.0, 0.0),
        inequality_certificate(
            "prop-4.4(1)-lower-frame", (np.sqrt(a) - np.sqrt(mu)) ** 2, g_lower, tolerances
        ),
        residual_certificate("prop-4.4(2)-invertible", floor, sigma_min),
        inequality_certificate(
            "prop-4.4-symbol-step",
            numerics.operator_norm(unperturbed - f_seq.frame_operator()),
            symbol_deviation * b,
            tolerances,
        ),
        inequality_certificate(
            "prop-4.4-symbol-step-below-limit", symbol_deviation * b, a**2 / b, tolerances
        ),
        inequality_certificate(
            "prop-4.4-sequence-step",
            numerics.operator_norm(mult.assembled - unperturbed),
            u_norm * np.sqrt(b * mu),
            tolerances,
        ),
    )
    margins.update(sigma_min=sigma_min, floor=floor, analysis_lower_frame=g_lower)
    return PropositionVerdict("prop-4.4", hypotheses, True, certificates, margins)
