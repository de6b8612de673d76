"""Finite sequence systems in C^d: Bessel sequences, frames, Riesz bases.

A SequenceSystem stores its synthesis matrix D, whose k-th column is f_k. The
analysis operator is C = D*, and the frame operator is S = D D*.

Optimal frame bounds are the extreme eigenvalues of S; optimal Riesz bounds are the
extreme eigenvalues of the Gram matrix D* D.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg

from . import numerics
from .certificates import identity_certificate, inequality_certificate
from .command_errors import NumericalError, PreconditionError, ShapeError
from .tolerance_config import DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)


class SequenceKind(str, Enum):
    BESSEL_ONLY = "BesselOnly"
    FRAME = "Frame"
    RIESZ_BASIS = "RieszBasis"
    ORTHONORMAL_BASIS = "OrthonormalBasis"


@dataclass(frozen=True)
class FrameBounds:
    """Optimal constants A <= B in A||f||^2 <= sum_k |<f, f_k>|^2 <= B||f||^2."""

    lower: float
    upper: float

    @property
    def is_tight(self):
        return np.isclose(self.lower, self.upper, rtol=1e-12, atol=0.0)


@dataclass(frozen=True)
class SequenceClass:
    kind: SequenceKind
    overcomplete: bool
    satisfies_lower_frame_condition: bool

    @property
    def is_frame(self):
        return self.kind is not SequenceKind.BESSEL_ONLY

    @property
    def is_riesz_basis(self):
        return self.kind in (SequenceKind.RIESZ_BASIS, SequenceKind.ORTHONORMAL_BASIS)

    def as_dict(self):
        return {
            "kind": self.kind.value,
            "overcomplete": self.overcomplete,
            "satisfies_lower_frame_condition": self.satisfies_lower_frame_condition,
        }


class SequenceSystem:
    """A family {f_k}, k = 1..n, in C^d.

    Immutable after construction: the synthesis matrix is stored read-only, and the
    frame operator and its spectrum are computed once.
    """

    def __init__(self, synthesis_matrix):
        matrix = numerics.as_cmatrix(synthesis_matrix, "synthesis matrix")
        matrix.flags.writeable = False
        self._synthesis = matrix

        frame_operator = matrix @ numerics.adjoint(matrix)
        frame_operator.flags.writeable = False
        self._frame_operator = frame_operator
        self._frame_spectrum = numerics.hermitian_eig(frame_operator).values

    @classmethod
    def from_vectors(cls, vectors):
        """Build from a list of n vectors in C^d."""
        vectors = [numerics.as_cvector(v, f"vector {k}") for k, v in enumerate(vectors)]
        if not vectors:
            raise ShapeError("A sequence needs at least one vector.")
        dims = {v.size for v in vectors}
        if len(dims) != 1:
            raise ShapeError(f"All vectors must have the same dimension, got {sorted(dims)}.")
        return cls(np.column_stack(vectors))

    def __repr__(self):
        return f"SequenceSystem(dim={self.dim}, count={self.count})"

    # --- Shape ---

    @property
    def dim(self):
        return self._synthesis.shape[0]

    @property
    def count(self):
        return self._synthesis.shape[1]

    @property
    def synthesis_matrix(self):
        return self._synthesis

    @property
    def analysis_matrix(self):
        return numerics.adjoint(self._synthesis)

    @property
    def vectors(self):
        return [self._synthesis[:, k] for k in range(self.count)]

    # --- Operators ---

    def analysis(self, f):
        """C f = (<f, f_1>, ..., <f, f_n>)."""
        f = numerics.as_cvector(f, "f")
        if f.size != self.dim:
            raise ShapeError(f"Vector has dimension {f.size}, sequence lives in C^{self.dim}.")
        return self.analysis_matrix @ f

    def synthesis(self, c):
        """D c = sum_k c_k f_k."""
        c = numerics.as_cvector(c, "coefficients")
        if c.size != self.count:
            raise ShapeError(f"Got {c.size} coefficients for a sequence of {self.count} vectors.")
        return self._synthesis @ c

    def frame_operator(self):
        """S = D D* = sum_k f_k (x) f_k."""
        return self._frame_operator

    def gram_matrix(self):
        return self.analysis_matrix @ self._synthesis

    # --- Bounds and classification ---

    def frame_bounds(self):
        """Extreme eigenvalues of the frame operator."""
        lower = max(float(self._frame_spectrum[0]), 0.0)
        upper = max(float(self._frame_spectrum[-1]), 0.0)
        return FrameBounds(lower=lower, upper=upper)

    def bessel_bound(self):
        return self.frame_bounds().upper

    def classify(self, tolerances=DEFAULT_TOLERANCES):
        bounds = self.frame_bounds()
        is_frame = bounds.upper > 0 and bounds.lower > tolerances.rank_floor(bounds.upper)

        if not is_frame:
            kind = SequenceKind.BESSEL_ONLY
        elif self.count != self.dim:
            kind = SequenceKind.FRAME
        elif self._is_orthonormal(tolerances):
            kind = SequenceKind.ORTHONORMAL_BASIS
        else:
            kind = SequenceKind.RIESZ_BASIS

        return SequenceClass(
            kind=kind,
            overcomplete=is_frame and self.count > self.dim,
            satisfies_lower_frame_condition=is_frame,
        )

    def _is_orthonormal(self, tolerances):
        residual = numerics.frobenius_norm(self.gram_matrix() - np.eye(self.count))
        return tolerances.equal_within(residual, np.sqrt(self.count))

    # --- Duals ---

    def canonical_dual(self, tolerances=DEFAULT_TOLERANCES):
        """The frame {S^-1 f_k}."""
        if not self.classify(tolerances).is_frame:
            raise PreconditionError("The canonical dual exists only for frames.")
        return SequenceSystem(numerics.solve(self._frame_operator, self._synthesis, tolerances))

    def biorthogonal_dual(self, tolerances=DEFAULT_TOLERANCES):
        """The unique {g_k} with <f_k, g_j> = delta_kj."""
        if not self.classify(tolerances).is_riesz_basis:
            raise PreconditionError("The biorthogonal sequence exists only for Riesz bases.")
        inv = numerics.inverse(self._synthesis, tolerances)
        return SequenceSystem(numerics.adjoint(inv))


def orthonormal_basis(dim):
    return SequenceSystem(np.eye(dim))


def mercedes_frame():
    """Three unit vectors at 120 degrees in R^2; tight with bound 3/2."""
    root = np.sqrt(3) / 2
    return SequenceSystem.from_vectors([(0.0, 1.0), (-root, -0.5), (root, -0.5)])


def _check_same_shape(a, b):
    if a.dim != b.dim or a.count != b.count:
        raise ShapeError(
            f"Sequences don't match: {a.count} vectors in C^{a.dim} "
            f"vs {b.count} vectors in C^{b.dim}."
        )


def difference(a, b):
    """The sequence {a_k - b_k}."""
    _check_same_shape(a, b)
    return SequenceSystem(a.synthesis_matrix - b.synthesis_matrix)


def is_dual_pair(f_seq, g_seq, tolerances=DEFAULT_TOLERANCES):
    """True if f = sum_k <f, g_k> f_k for all f, i.e. D_f C_g = I."""
    _check_same_shape(f_seq, g_seq)
    product = f_seq.synthesis_matrix @ g_seq.analysis_matrix
    residual = numerics.frobenius_norm(product - np.eye(f_seq.dim))
    return tolerances.equal_within(residual, np.sqrt(f_seq.dim))


def biorthogonality_deviation(a, b):
    """max_{k,j} |<a_k, b_j> - delta_kj|."""
    if a.dim != b.dim or a.count != b.count:
        raise ShapeError("Biorthogonality needs sequences of equal dimension and length.")
    cross = b.analysis_matrix @ a.synthesis_matrix
    return float(np.max(np.abs(cross - np.eye(a.count))))


def riesz_bounds(seq, tolerances=DEFAULT_TOLERANCES):
    """Optimal Riesz bounds A||c||^2 <= ||D c||^2 <= B||c||^2 from the Gram spectrum.

    For a Riesz basis in C^d these agree with the frame bounds; the agreement is
    checked rather than assumed.
    """
    if not seq.classify(tolerances).is_riesz_basis:
        raise PreconditionError("Riesz bounds are defined here only for Riesz bases.")

    gram_values = numerics.hermitian_eig(seq.gram_matrix(), tolerances).values
    bounds = FrameBounds(lower=max(float(gram_values[0]), 0.0), upper=float(gram_values[-1]))

    frame = seq.frame_bounds()
    if not (
        tolerances.equal_within(abs(bounds.lower - frame.lower), frame.upper)
        and tolerances.equal_within(abs(bounds.upper - frame.upper), frame.upper)
    ):
        raise NumericalError(
            f"Gram spectrum {bounds} disagrees with frame operator spectrum {frame}."
        )
    return bounds


def bessel_certificates(seq, tolerances=DEFAULT_TOLERANCES):
    """max_k ||f_k|| <= sqrt(B) and ||D||_op = ||C||_op <= sqrt(B)."""
    root_b = np.sqrt(seq.bessel_bound())
    longest = max(float(np.linalg.norm(v)) for v in seq.vectors)
    synthesis_norm = numerics.operator_norm(seq.synthesis_matrix)
    analysis_norm = numerics.operator_norm(seq.analysis_matrix)
    return [
        inequality_certificate("bessel-vector-norm", longest, root_b, tolerances),
        inequality_certificate("bessel-synthesis-norm", synthesis_norm, root_b, tolerances),
        identity_certificate(
            "synthesis-analysis-norm-equal",
            abs(synthesis_norm - analysis_norm),
            tolerances,
            scale=synthesis_norm,
        ),
    ]


def dual_reconstruction_residuals(seq, tolerances=DEFAULT_TOLERANCES):
    """||D_f C_dual - I|| and ||D_dual C_f - I|| for the canonical dual."""
    dual = seq.canonical_dual(tolerances)
    eye = np.eye(seq.dim)
    return (
        numerics.operator_norm(seq.synthesis_matrix @ dual.analysis_matrix - eye),
        numerics.operator_norm(dual.synthesis_matrix @ seq.analysis_matrix - eye),
    )


def alternative_dual(seq, mixing=None, rng=None, tolerances=DEFAULT_TOLERANCES):
    """A dual frame of an overcomplete frame that differs from the canonical dual.

    Adds to the canonical dual a sequence {h_k} with D_f C_h = 0; the columns of
    D_h* are taken from ker D_f. mixing is a (n - d) x d matrix of coordinates in
    that kernel; a random one is drawn from rng when it's omitted.
    """
    seq_class = seq.classify(tolerances)
    if not seq_class.overcomplete:
        raise PreconditionError("Only overcomplete frames have alternative duals.")

    kernel = linalg.null_space(seq.synthesis_matrix, rcond=tolerances.rank_tol)
    if kernel.shape[1] == 0:
        raise PreconditionError("Synthesis operator has a trivial kernel.")

    if mixing is None:
        rng = np.random.default_rng() if rng is None else rng
        shape = (kernel.shape[1], seq.dim)
        mixing = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    mixing = numerics.as_cmatrix(mixing, "mixing")
    if mixing.shape != (kernel.shape[1], seq.dim):
        raise ShapeError(f"Mixing matrix must be {(kernel.shape[1], seq.dim)}, got {mixing.shape}.")

    shift = numerics.adjoint(kernel @ mixing)
    return SequenceSystem(seq.canonical_dual(tolerances).synthesis_matrix + shift)


def tensor_product_system(f_seq, g_seq):
    """The family {g_k (x) f_i} of rank-one operators C^{d_f} -> C^{d_g}, vectorised.

    Vector number k * n_f + i is the row-major flattening of g_k (x) f_i, so the
    synthesis operator maps the row-major flattening of an n_g x n_f matrix U to
    the flattening of D_g U C_f. Frame bounds multiply: (A_f A_g, B_f B_g).
    """
    columns = [
        numerics.tensor(g, f).ravel() for g in g_seq.vectors for f in f_seq.vectors
    ]
    return SequenceSystem(np.column_stack(columns))
