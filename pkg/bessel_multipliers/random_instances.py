"""Random sequences and symbols for the check suites.

All draws take a numpy Generator. draw_rng(seed, index) derives the generator of
draw number index from the master seed, so a single draw can be replayed alone.
"""

import numpy as np
from scipy import stats

from .command_errors import DomainError, NumericalError
from .sequences import SequenceSystem
from .symbols import dense_symbol


MAX_TRIES = 200
FRAME_MIN_RATIO = 1e-3


def draw_rng(seed, index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def complex_gaussian(rng, shape):
    """Independent standard complex Gaussian entries, E|z|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng, n):
    if n == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return stats.unitary_group.rvs(n, random_state=rng)


def random_unit_vectors(rng, dim, count):
    vectors = complex_gaussian(rng, (dim, count))
    return vectors / np.linalg.norm(vectors, axis=0)


def with_singular_values(rng, rows, cols, values):
    """P diag(values) Q* with Haar-distributed P and Q."""
    values = np.asarray(values, dtype=float)
    k = min(rows, cols)
    if values.size != k:
        raise DomainError(f"Need {k} singular values for a {rows} x {cols} matrix.")
    middle = np.zeros((rows, cols))
    middle[:k, :k] = np.diag(values)
    return random_unitary(rng, rows) @ middle @ random_unitary(rng, cols).conj().T


def _spread(rng, size, low, high):
    """size values in [low, high], including both ends when size >= 2."""
    if size == 1:
        return np.array([high])
    values = np.concatenate([[low, high], rng.uniform(low, high, size - 2)])
    return np.sort(values)[::-1]


# --- Sequences ---


def random_bessel(rng, dim, count):
    """Gaussian sequence; in finite dimensions every sequence is Bessel."""
    return SequenceSystem(complex_gaussian(rng, (dim, count)))


def random_frame(rng, dim, count, min_ratio=FRAME_MIN_RATIO):
    """Gaussian frame, redrawn until A / B >= min_ratio."""
    if count < dim:
        raise DomainError(f"{count} vectors can't span C^{dim}.")
    for _ in range(MAX_TRIES):
        seq = random_bessel(rng, dim, count)
        bounds = seq.frame_bounds()
        if bounds.upper > 0 and bounds.lower >= min_ratio * bounds.upper:
            return seq
    raise NumericalError(f"No frame with A/B >= {min_ratio} in {MAX_TRIES} draws.")


def random_riesz_basis(rng, dim, max_condition=1e3):
    """Riesz basis of C^dim whose synthesis matrix has condition number <= max_condition."""
    values = _spread(rng, dim, 1.0, max_condition) / np.sqrt(max_condition)
    return SequenceSystem(with_singular_values(rng, dim, dim, values))


def scaled_frame(rng, dim, count, lower, upper):
    """Frame with optimal bounds exactly (lower, upper)."""
    if count < dim:
        raise DomainError(f"{count} vectors can't span C^{dim}.")
    if not 0 < lower <= upper:
        raise DomainError(f"Frame bounds need 0 < A <= B, got ({lower}, {upper}).")
    if dim == 1 and lower != upper:
        raise DomainError("A frame of C^1 is tight.")
    eigenvalues = _spread(rng, dim, lower, upper)
    return SequenceSystem(with_singular_values(rng, dim, count, np.sqrt(eigenvalues)))


def rank_deficient_sequence(rng, dim, count, rank):
    """A sequence spanning a rank-dimensional subspace only."""
    if not 0 <= rank < dim:
        raise DomainError(f"Rank {rank} is not deficient in C^{dim}.")
    k = min(dim, count)
    values = np.zeros(k)
    values[: min(rank, k)] = rng.uniform(0.5, 2.0, min(rank, k))
    return SequenceSystem(with_singular_values(rng, dim, count, np.sort(values)[::-1]))


# --- Symbols ---


def random_symbol(rng, rows, cols):
    return dense_symbol(complex_gaussian(rng, (rows, cols)))


def random_psd_symbol(rng, n, rank=None):
    """V* V for a Gaussian rank x n matrix V."""
    v = complex_gaussian(rng, (n if rank is None else rank, n))
    product = v.conj().T @ v
    return dense_symbol((product + product.conj().T) / 2)


def random_invertible_symbol(rng, n, max_condition=1e3):
    values = _spread(rng, n, 1.0, max_condition) / np.sqrt(max_condition)
    return dense_symbol(with_singular_values(rng, n, n, values))


def random_singular_symbol(rng, n):
    """An n x n symbol with a one-dimensional kernel or more."""
    if n < 1:
        raise DomainError("Symbol size must be positive.")
    values = np.zeros(n)
    values[: n - 1] = rng.uniform(0.5, 2.0, n - 1)
    return dense_symbol(with_singular_values(rng, n, n, np.sort(values)[::-1]))
