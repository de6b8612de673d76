"""Symbols: the operator U on l^2 placed between analysis and synthesis.

Every symbol is stored as a dense n2 x n1 matrix. The kind tag and its parameters
record how the symbol was constructed, so structure-aware code and tests can use
them; nothing else depends on the tag.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import linalg

from . import numerics
from .command_errors import DomainError, ShapeError
from .tolerance_config import DEFAULT_TOLERANCES


class SymbolKind(str, Enum):
    DENSE = "dense"
    DIAGONAL = "diagonal"
    CONVOLUTION = "convolution"
    FROBENIUS = "frobenius"
    TRIBLOCK = "triblock"


@dataclass(frozen=True, eq=False)
class Symbol:
    matrix: np.ndarray
    kind: SymbolKind = SymbolKind.DENSE
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        matrix = numerics.as_cmatrix(self.matrix, "symbol")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    def __repr__(self):
        return f"Symbol(kind={self.kind.value}, shape={self.shape})"

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def rows(self):
        return self.matrix.shape[0]

    @property
    def cols(self):
        return self.matrix.shape[1]


@dataclass(frozen=True)
class SymbolNorms:
    op: float
    s1: float
    s2: float

    def as_dict(self):
        return {"op": self.op, "s1": self.s1, "s2": self.s2}


def as_symbol(u):
    """Accept a Symbol or anything matrix-like."""
    return u if isinstance(u, Symbol) else dense_symbol(u)


# --- Constructors ---


def dense_symbol(matrix):
    return Symbol(matrix=matrix)


def identity_symbol(n):
    return diagonal_symbol(np.ones(n))


def diagonal_symbol(m, n=None):
    """Pointwise multiplication c -> (m_k c_k)."""
    m = numerics.as_cvector(m, "m")
    if n is not None and m.size != n:
        raise ShapeError(f"Diagonal symbol needs {n} entries, got {m.size}.")
    return Symbol(matrix=np.diag(m), kind=SymbolKind.DIAGONAL, params={"m": tuple(m)})


def convolution_symbol(kernel, n, offset=None):
    """Convolution a -> (sum_k a_k c_{j-k})_j, truncated to an n x n Toeplitz matrix.

    kernel holds c_j for j = -offset, ..., len(kernel) - 1 - offset; offset defaults
    to the middle of the kernel. The boundary is zero-padded, not wrapped around.
    """
    kernel = np.asarray(kernel, dtype=complex)
    if kernel.ndim != 1 or kernel.size == 0:
        raise DomainError("Convolution kernel must be a non-empty list of coefficients.")
    if not np.all(np.isfinite(kernel)):
        raise DomainError("Convolution kernel contains NaN or Inf.")
    if n < 1:
        raise DomainError(f"Convolution symbol size must be at least 1, got {n}.")
    if offset is None:
        offset = kernel.size // 2
    if not 0 <= offset < kernel.size:
        raise DomainError(f"Kernel offset {offset} is outside the kernel.")

    def coefficient(j):
        index = j + offset
        return kernel[index] if 0 <= index < kernel.size else 0.0

    column = [coefficient(i) for i in range(n)]
    row = [coefficient(-i) for i in range(n)]
    return Symbol(
        matrix=linalg.toeplitz(column, row),
        kind=SymbolKind.CONVOLUTION,
        params={"kernel": tuple(kernel), "offset": int(offset)},
    )


def frobenius_symbol(a):
    """Symbol given by a square-summable table a_ij: y_n = sum_k a_nk x_k."""
    return Symbol(matrix=a, kind=SymbolKind.FROBENIUS)


def triblock_example(n):
    """Leading n x n block of the symmetric tri-diagonal matrix with entries 1/sqrt(k).

    With 1-based indices: (k, k), (k, k+1) and (k+1, k) all equal 1/sqrt(k).
    """
    if n < 2:
        raise DomainError(f"The tri-block example needs n >= 2, got {n}.")
    weights = 1.0 / np.sqrt(np.arange(1, n + 1))
    matrix = np.diag(weights) + np.diag(weights[:-1], 1) + np.diag(weights[:-1], -1)
    return Symbol(matrix=matrix, kind=SymbolKind.TRIBLOCK, params={"n": n})


# --- Calculus ---


def adjoint(u):
    u = as_symbol(u)
    matrix = numerics.adjoint(u.matrix)

    if u.kind is SymbolKind.DIAGONAL:
        return Symbol(matrix=matrix, kind=u.kind, params={"m": tuple(np.conj(u.params["m"]))})
    if u.kind is SymbolKind.CONVOLUTION:
        kernel = np.conj(np.asarray(u.params["kernel"])[::-1])
        offset = len(kernel) - 1 - u.params["offset"]
        return Symbol(
            matrix=matrix, kind=u.kind, params={"kernel": tuple(kernel), "offset": offset}
        )
    if u.kind is SymbolKind.TRIBLOCK:
        # Real symmetric.
        return u
    return Symbol(matrix=matrix, kind=SymbolKind.DENSE)


def invert(u, tolerances=DEFAULT_TOLERANCES):
    """Inverse symbol; raises SingularMatrixError below the invertibility floor."""
    u = as_symbol(u)
    inv = numerics.inverse(u.matrix, tolerances)
    if u.kind is SymbolKind.DIAGONAL:
        m = 1.0 / np.asarray(u.params["m"])
        return Symbol(matrix=np.diag(m), kind=u.kind, params={"m": tuple(m)})
    return Symbol(matrix=inv, kind=SymbolKind.DENSE)


def compose(u1, u2):
    u1, u2 = as_symbol(u1), as_symbol(u2)
    if u1.cols != u2.rows:
        raise ShapeError(f"Can't compose symbols of shapes {u1.shape} and {u2.shape}.")
    return dense_symbol(u1.matrix @ u2.matrix)


def symbol_norms(u):
    spectrum = numerics.singular_values(as_symbol(u).matrix)
    return SymbolNorms(op=spectrum.sigma_max, s1=spectrum.schatten(1), s2=spectrum.schatten(2))


def singular_decay(u):
    """Singular values of the symbol, for inspecting their decay."""
    return numerics.singular_values(as_symbol(u).matrix)


def max_column_norm(u):
    """sup_n ||U e_n|| over the canonical basis."""
    matrix = as_symbol(u).matrix
    return float(np.max(np.linalg.norm(matrix, axis=0)))
