"""Generalized Bessel multipliers M = D_g U C_f and the certificates for their bounds.

Argument order follows M_{U, synthesis, analysis}: build(U, g_seq, f_seq) maps
C^{d_f} to C^{d_g}, with U of shape (g_seq.count, f_seq.count). The dense matrix is
assembled once at build time, and every certificate works from it.
"""

import logging
from dataclasses import dataclass

import numpy as np

from . import numerics
from . import symbols
from .certificates import identity_certificate, inequality_certificate, residual_certificate
from .command_errors import PreconditionError, ShapeError
from .sequences import SequenceSystem, biorthogonality_deviation, riesz_bounds, tensor_product_system
from .symbols import Symbol, as_symbol
from .tolerance_config import DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GeneralizedMultiplier:
    symbol: Symbol
    synthesis_seq: SequenceSystem
    analysis_seq: SequenceSystem
    assembled: np.ndarray

    def __repr__(self):
        return (
            f"GeneralizedMultiplier(symbol={self.symbol.shape}, "
            f"C^{self.input_dim} -> C^{self.output_dim})"
        )

    @property
    def input_dim(self):
        return self.analysis_seq.dim

    @property
    def output_dim(self):
        return self.synthesis_seq.dim

    @property
    def is_square(self):
        return self.input_dim == self.output_dim

    def apply(self, f):
        """D_g(U(C_f f)), evaluated step by step."""
        coefficients = self.analysis_seq.analysis(f)
        return self.synthesis_seq.synthesis(self.symbol.matrix @ coefficients)

    def adjoint(self):
        """M_{U*, f, g}."""
        return build(symbols.adjoint(self.symbol), self.analysis_seq, self.synthesis_seq)


def build(u, g_seq, f_seq):
    """Assemble M_{U, {g_k}, {f_k}} = D_g U C_f."""
    u = as_symbol(u)
    if u.cols != f_seq.count or u.rows != g_seq.count:
        raise ShapeError(
            f"Symbol of shape {u.shape} needs {u.rows} synthesis and {u.cols} analysis "
            f"vectors, got {g_seq.count} and {f_seq.count}."
        )
    assembled = g_seq.synthesis_matrix @ u.matrix @ f_seq.analysis_matrix
    assembled.flags.writeable = False
    return GeneralizedMultiplier(
        symbol=u, synthesis_seq=g_seq, analysis_seq=f_seq, assembled=assembled
    )


def rank_one_expansion(mult):
    """sum_{j,k} U_jk (g_j (x) f_k), computed term by term."""
    g_vectors = mult.synthesis_seq.vectors
    f_vectors = mult.analysis_seq.vectors
    total = np.zeros((mult.output_dim, mult.input_dim), dtype=complex)
    for j, k in zip(*np.nonzero(mult.symbol.matrix)):
        total += mult.symbol.matrix[j, k] * numerics.tensor(g_vectors[j], f_vectors[k])
    return total


def _bessel_factor(mult):
    """sqrt(B_f B_g) = ||D_g||_op ||C_f||_op."""
    b_f = mult.analysis_seq.bessel_bound()
    b_g = mult.synthesis_seq.bessel_bound()
    return np.sqrt(b_f * b_g), b_f, b_g


# --- Certificates ---


def assembly_certificate(mult, tolerances=DEFAULT_TOLERANCES):
    """The assembled matrix equals its rank-one expansion."""
    residual = numerics.frobenius_norm(mult.assembled - rank_one_expansion(mult))
    scale = assembly_scale(mult)
    return identity_certificate("assembly-rank-one", residual, tolerances, scale=scale)


def assembly_scale(mult):
    # Size of the factors, not of the product, which can cancel to zero.
    return (
        numerics.frobenius_norm(mult.synthesis_seq.synthesis_matrix)
        * numerics.frobenius_norm(mult.symbol.matrix)
        * numerics.frobenius_norm(mult.analysis_seq.synthesis_matrix)
    )


def adjoint_check(mult, tolerances=DEFAULT_TOLERANCES):
    """(M_{U,g,f})* = M_{U*,f,g}."""
    residual = numerics.frobenius_norm(
        numerics.adjoint(mult.assembled) - mult.adjoint().assembled
    )
    return identity_certificate(
        "thm-3.2(2)-adjoint", residual, tolerances, scale=assembly_scale(mult)
    )


def norm_certificates(mult, tolerances=DEFAULT_TOLERANCES, ps=(1, 2)):
    """||M||_op <= sqrt(B_f B_g) ||U||_op and ||M||_p <= sqrt(B_f B_g) ||U||_p."""
    factor, b_f, b_g = _bessel_factor(mult)
    m_spectrum = numerics.singular_values(mult.assembled)
    u_spectrum = numerics.singular_values(mult.symbol.matrix)

    certificates = [
        inequality_certificate(
            "thm-3.2(1)-op",
            m_spectrum.sigma_max,
            factor * u_spectrum.sigma_max,
            tolerances,
            bessel_analysis=b_f,
            bessel_synthesis=b_g,
            symbol_norm=u_spectrum.sigma_max,
        )
    ]
    for p in ps:
        certificates.append(
            inequality_certificate(
                f"thm-3.2(4)-s{p}",
                m_spectrum.schatten(p),
                factor * u_spectrum.schatten(p),
                tolerances,
                bessel_analysis=b_f,
                bessel_synthesis=b_g,
                symbol_norm=u_spectrum.schatten(p),
            )
        )
    return certificates


def positivity_check(u, f_seq, tolerances=DEFAULT_TOLERANCES):
    """A positive symbol gives a positive M_{U, f, f}.

    Raises:
        PreconditionError: U is not positive semidefinite.
    """
    u = as_symbol(u)
    eig = numerics.hermitian_eig(u.matrix, tolerances)
    u_scale = float(np.max(np.abs(eig.values)))
    if not tolerances.equal_within(max(-eig.smallest, 0.0), u_scale):
        raise PreconditionError(
            f"Symbol is not positive semidefinite: smallest eigenvalue {eig.smallest:.3e}."
        )

    mult = build(u, f_seq, f_seq)
    smallest = numerics.hermitian_eig(numerics.hermitian_part(mult.assembled), tolerances).smallest
    scale = numerics.operator_norm(mult.assembled)
    return residual_certificate(
        "thm-3.2(5)-positive",
        -smallest,
        tolerances.eq_abs * max(scale, 1.0),
        lambda_min=smallest,
        scale=scale,
    )


def require_riesz_bases(mult, tolerances):
    for role, seq in (("analysis", mult.analysis_seq), ("synthesis", mult.synthesis_seq)):
        if not seq.classify(tolerances).is_riesz_basis:
            raise PreconditionError(f"The {role} sequence is not a Riesz basis.")


def riesz_lower_bound(mult, tolerances=DEFAULT_TOLERANCES):
    """K sqrt(A A') <= ||M||_op for Riesz bases, with K the largest column norm of U."""
    require_riesz_bases(mult, tolerances)
    a_f = riesz_bounds(mult.analysis_seq, tolerances).lower
    a_g = riesz_bounds(mult.synthesis_seq, tolerances).lower
    k = symbols.max_column_norm(mult.symbol)
    lower = k * np.sqrt(a_f * a_g)
    norm = numerics.operator_norm(mult.assembled)
    return inequality_certificate(
        "prop-3.7-lower",
        lower,
        norm,
        tolerances,
        K=k,
        riesz_lower_analysis=a_f,
        riesz_lower_synthesis=a_g,
        ratio=lower / norm if norm > 0 else 1.0,
    )


def hilbert_schmidt_riesz_bounds(mult, tolerances=DEFAULT_TOLERANCES):
    """sqrt(A A') ||U||_2 <= ||M||_2 <= sqrt(B B') ||U||_2 for Riesz bases."""
    require_riesz_bases(mult, tolerances)
    f_bounds = riesz_bounds(mult.analysis_seq, tolerances)
    g_bounds = riesz_bounds(mult.synthesis_seq, tolerances)
    u_norm = numerics.schatten_norm(mult.symbol.matrix, 2)
    m_norm = numerics.schatten_norm(mult.assembled, 2)
    return [
        inequality_certificate(
            "hs-riesz-lower",
            np.sqrt(f_bounds.lower * g_bounds.lower) * u_norm,
            m_norm,
            tolerances,
        ),
        inequality_certificate(
            "hs-riesz-upper",
            m_norm,
            np.sqrt(f_bounds.upper * g_bounds.upper) * u_norm,
            tolerances,
        ),
    ]


def compose_biorthogonal(first, second, tolerances=DEFAULT_TOLERANCES):
    """M_{U1,g,f} M_{U2,l,h} = M_{U1 U2, g, h} when {l_k} and {f_k} are biorthogonal.

    Raises:
        ShapeError: the sequences f and l don't fit together.
        PreconditionError: f and l are not biorthogonal; the deviation is attached.
    """
    f_seq, l_seq = first.analysis_seq, second.synthesis_seq
    if f_seq.dim != l_seq.dim or f_seq.count != l_seq.count:
        raise ShapeError("The analysis sequence of the first multiplier and the synthesis "
                         "sequence of the second must have equal dimension and length.")

    deviation = biorthogonality_deviation(l_seq, f_seq)
    if not tolerances.equal_within(deviation):
        raise PreconditionError(
            f"Sequences are not biorthogonal: max |<l_k, f_j> - delta_kj| = {deviation:.3e}.",
            deviation=deviation,
        )
    return build(
        symbols.compose(first.symbol, second.symbol), first.synthesis_seq, second.analysis_seq
    )


def composition_check(first, second, tolerances=DEFAULT_TOLERANCES):
    composed = compose_biorthogonal(first, second, tolerances)
    residual = numerics.frobenius_norm(first.assembled @ second.assembled - composed.assembled)
    scale = max(
        assembly_scale(first) * assembly_scale(second), numerics.frobenius_norm(composed.assembled)
    )
    return identity_certificate("prop-3.8-composition", residual, tolerances, scale=scale)


def singular_profile(mult):
    return numerics.singular_values(mult.assembled)


def recover_symbol(mult, tolerances=DEFAULT_TOLERANCES):
    """U = C_{g~} M D_{f~} for Riesz bases, where ~ marks the biorthogonal sequence."""
    require_riesz_bases(mult, tolerances)
    g_dual = mult.synthesis_seq.biorthogonal_dual(tolerances)
    f_dual = mult.analysis_seq.biorthogonal_dual(tolerances)
    return symbols.dense_symbol(g_dual.analysis_matrix @ mult.assembled @ f_dual.synthesis_matrix)


def tensor_synthesis_check(mult, tolerances=DEFAULT_TOLERANCES):
    """M is the synthesis of {g_k (x) f_i} applied to the entries of U."""
    system = tensor_product_system(mult.analysis_seq, mult.synthesis_seq)
    flat = system.synthesis(mult.symbol.matrix.ravel())
    residual = numerics.frobenius_norm(
        flat.reshape(mult.output_dim, mult.input_dim) - mult.assembled
    )
    return identity_certificate(
        "tensor-synthesis", residual, tolerances, scale=assembly_scale(mult)
    )
