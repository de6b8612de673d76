"""Dense complex linear algebra shared by every other module.

Hilbert spaces are modeled as C^d and the coefficient space l^2 of an n-element
sequence as C^n. Operators are plain complex numpy arrays; every public function
validates its input with as_cmatrix() or as_cvector() first.

Inner products are linear in the first argument: <x, y> = sum_i x_i conj(y_i).
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .command_errors import (
    DomainError,
    NumericalError,
    PreconditionError,
    ShapeError,
    SingularMatrixError,
)
from .tolerance_config import DEFAULT_TOLERANCES


logger = logging.getLogger(__name__)

# Multiple of dim * eps * cond(A) that a computed inverse may miss the identity by.
ROUNDOFF_FACTOR = 8


def as_cmatrix(a, name="matrix"):
    """Return a as a finite 2-D complex array with at least one row and column."""
    try:
        arr = np.array(a, dtype=complex)
    except (TypeError, ValueError) as e:
        raise ShapeError(f"{name} is not a numeric matrix: {e}")
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {arr.shape}.")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and one column.")
    if not np.all(np.isfinite(arr)):
        raise NumericalError(f"{name} contains NaN or Inf entries.")
    return arr


def as_cvector(v, name="vector"):
    """Return v as a finite 1-D complex array."""
    try:
        arr = np.array(v, dtype=complex)
    except (TypeError, ValueError) as e:
        raise ShapeError(f"{name} is not a numeric vector: {e}")
    if arr.ndim != 1 or arr.size < 1:
        raise ShapeError(f"{name} must be a non-empty 1-dimensional vector, got shape {arr.shape}.")
    if not np.all(np.isfinite(arr)):
        raise NumericalError(f"{name} contains NaN or Inf entries.")
    return arr


def inner(x, y):
    """<x, y>, linear in x."""
    return complex(np.vdot(y, x))


def adjoint(a):
    return np.conj(a).T


def hermitian_part(a):
    a = as_cmatrix(a)
    return (a + adjoint(a)) / 2


# --- Singular values ---


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values, non-increasing and non-negative."""

    values: tuple

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if np.any(arr < 0):
            raise NumericalError("Singular values must be non-negative.")
        if np.any(np.diff(arr) > 0):
            raise NumericalError("Singular values must be sorted non-increasing.")

    def __len__(self):
        return len(self.values)

    @property
    def array(self):
        return np.asarray(self.values, dtype=float)

    @property
    def sigma_max(self):
        return self.values[0] if self.values else 0.0

    @property
    def sigma_min(self):
        return self.values[-1] if self.values else 0.0

    def rank(self, tolerances=DEFAULT_TOLERANCES):
        floor = tolerances.rank_floor(self.sigma_max)
        return int(np.sum(self.array > floor)) if self.sigma_max > 0 else 0

    def schatten(self, p):
        if p == np.inf:
            return self.sigma_max
        return float(np.sum(self.array**p) ** (1.0 / p))


@dataclass(frozen=True, eq=False)
class SingularDecomposition:
    """A = left @ diag(spectrum) @ right^*, with orthonormal columns in left and right."""

    spectrum: SingularSpectrum
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self):
        return (self.left * self.spectrum.array) @ adjoint(self.right)


def svd(a):
    """Thin singular value decomposition."""
    a = as_cmatrix(a)
    try:
        p, s, qh = linalg.svd(a, full_matrices=False)
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Singular value decomposition failed: {e}")
    return SingularDecomposition(
        spectrum=SingularSpectrum(tuple(float(x) for x in s)),
        left=p,
        right=adjoint(qh),
    )


def singular_values(a):
    a = as_cmatrix(a)
    try:
        s = linalg.svdvals(a)
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Singular value computation failed: {e}")
    return SingularSpectrum(tuple(float(x) for x in s))


# --- Hermitian spectra ---


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Eigenvalues in ascending order, with eigenvectors as the columns of vectors."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def smallest(self):
        return float(self.values[0])

    @property
    def largest(self):
        return float(self.values[-1])


def hermitian_eig(a, tolerances=DEFAULT_TOLERANCES):
    """Eigendecomposition of a Hermitian matrix.

    Raises:
        ShapeError: a is not square.
        PreconditionError: a is not Hermitian within eq_abs.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Eigendecomposition needs a square matrix, got {a.shape}.")

    asymmetry = linalg.norm(a - adjoint(a))
    if not tolerances.equal_within(asymmetry, linalg.norm(a)):
        raise PreconditionError(
            f"Matrix is not Hermitian: ||A - A*||_F = {asymmetry:.3e}.", deviation=asymmetry
        )

    try:
        values, vectors = linalg.eigh((a + adjoint(a)) / 2)
    except linalg.LinAlgError as e:
        raise NumericalError(f"Hermitian eigendecomposition failed: {e}")
    return HermitianEigen(values=values, vectors=vectors)


# --- Norms ---


def operator_norm(a):
    return singular_values(a).sigma_max


def schatten_norm(a, p):
    """(sum_k sigma_k^p)^(1/p); p = inf gives the operator norm."""
    if not p >= 1:
        raise DomainError(f"Schatten norms need p >= 1, got p = {p}.")
    return singular_values(a).schatten(p)


def smallest_singular(a):
    """Bounded-below constant inf_{||x||=1} ||Ax||.

    That is sigma_min for a matrix with at least as many rows as columns, and 0 for
    a wide matrix, which has a nontrivial kernel.
    """
    a = as_cmatrix(a)
    if a.shape[0] < a.shape[1]:
        return 0.0
    return singular_values(a).sigma_min


def frobenius_norm(a):
    return float(linalg.norm(as_cmatrix(a)))


def hilbert_schmidt_by_columns(a):
    """(sum_k ||A e_k||^2)^(1/2) over the canonical basis."""
    a = as_cmatrix(a)
    return float(np.sqrt(sum(np.linalg.norm(a[:, k]) ** 2 for k in range(a.shape[1]))))


def modulus(a):
    """|A| = (A* A)^(1/2), built as Q diag(sigma) Q* from the right singular vectors.

    Squaring A first would lose half the digits on small singular values.
    """
    decomposition = svd(a)
    right = decomposition.right
    return (right * decomposition.spectrum.array) @ adjoint(right)


def trace_norm_via_modulus(a):
    """Trace norm as sum_k <|A| e_k, e_k>."""
    return float(np.real(np.trace(modulus(a))))


def identity_residual(a):
    """||A - I||_op for a square matrix."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Identity residual needs a square matrix, got {a.shape}.")
    return operator_norm(a - np.eye(a.shape[0]))


# --- Inversion ---


def inversion_allowance(condition, dim, tolerances=DEFAULT_TOLERANCES):
    """Largest acceptable ||A A^-1 - I||_op for a computed inverse.

    bound_slack, plus the rounding error a backward-stable inversion of a matrix with
    the given condition number can make.
    """
    return tolerances.bound_slack + ROUNDOFF_FACTOR * dim * np.finfo(float).eps * condition


def _check_invertible(a, tolerances):
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Only square matrices can be inverted, got {a.shape}.")
    spectrum = singular_values(a)
    floor = tolerances.singular_floor(spectrum.sigma_max)
    if spectrum.sigma_max == 0 or spectrum.sigma_min <= floor:
        raise SingularMatrixError(
            f"Matrix is singular: sigma_min = {spectrum.sigma_min:.3e} <= floor {floor:.3e}.",
            sigma_min=spectrum.sigma_min,
        )
    return spectrum


def inverse(a, tolerances=DEFAULT_TOLERANCES):
    """Inverse of a square matrix whose sigma_min clears the invertibility floor.

    Raises:
        SingularMatrixError: sigma_min is at or below the floor.
        NumericalError: A A^-1 misses the identity by more than inversion_allowance.
    """
    a = as_cmatrix(a)
    spectrum = _check_invertible(a, tolerances)
    try:
        inv = linalg.inv(a)
    except linalg.LinAlgError as e:
        raise SingularMatrixError(f"Matrix inversion failed: {e}")

    residual = identity_residual(a @ inv)
    allowed = inversion_allowance(spectrum.sigma_max / spectrum.sigma_min, a.shape[0], tolerances)
    logger.debug(f"Inverse residual {residual:.3e}, allowed {allowed:.3e}.")
    if residual > allowed:
        raise NumericalError(
            f"Inverse residual {residual:.3e} exceeds the allowed {allowed:.3e}."
        )
    return inv


def solve(a, b, tolerances=DEFAULT_TOLERANCES):
    """Solve a x = b for a square, invertible a. b may be a vector or a matrix."""
    a = as_cmatrix(a)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise ShapeError(f"Right-hand side has {b.shape[0]} rows, matrix has {a.shape[0]}.")
    _check_invertible(a, tolerances)
    try:
        return linalg.solve(a, b)
    except linalg.LinAlgError as e:
        raise SingularMatrixError(f"Linear solve failed: {e}")


# --- Rank-one operators ---


def tensor(f, g):
    """The rank-one operator f (x) g: h -> <h, g> f."""
    f = as_cvector(f, "f")
    g = as_cvector(g, "g")
    return np.outer(f, np.conj(g))
