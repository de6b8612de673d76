"""Unit tests for sequence systems: bounds, classification and duals."""

import numpy as np
import pytest

from bessel_multipliers import numerics
from bessel_multipliers import random_instances as ri
from bessel_multipliers.command_errors import PreconditionError, ShapeError
from bessel_multipliers.sequences import (
    SequenceKind,
    SequenceSystem,
    alternative_dual,
    bessel_certificates,
    biorthogonality_deviation,
    difference,
    dual_reconstruction_residuals,
    is_dual_pair,
    mercedes_frame,
    orthonormal_basis,
    riesz_bounds,
    tensor_product_system,
)


# --- Fixtures ---


@pytest.fixture
def skewed_basis():
    """{(1, 0), (1, 1)}: a Riesz basis of C^2 that isn't orthonormal."""
    return SequenceSystem.from_vectors([(1.0, 0.0), (1.0, 1.0)])


@pytest.fixture
def collinear():
    """{(1, 0), (2, 0)}: Bessel, but no frame of C^2."""
    return SequenceSystem.from_vectors([(1.0, 0.0), (2.0, 0.0)])


# --- Construction ---


def test_from_vectors_rejects_mixed_dimensions():
    with pytest.raises(ShapeError):
        SequenceSystem.from_vectors([(1.0, 0.0), (1.0, 0.0, 0.0)])


def test_from_vectors_rejects_empty():
    with pytest.raises(ShapeError):
        SequenceSystem.from_vectors([])


def test_synthesis_matrix_is_read_only(skewed_basis):
    with pytest.raises(ValueError):
        skewed_basis.synthesis_matrix[0, 0] = 5.0


def test_analysis_and_synthesis_shapes(skewed_basis):
    assert skewed_basis.analysis(np.array([1.0, 2.0])) == pytest.approx([1.0, 3.0])
    assert skewed_basis.synthesis(np.array([1.0, 1.0])) == pytest.approx([2.0, 1.0])
    with pytest.raises(ShapeError):
        skewed_basis.analysis(np.ones(3))
    with pytest.raises(ShapeError):
        skewed_basis.synthesis(np.ones(3))


# --- Bounds and classification ---


def test_orthonormal_basis():
    seq = orthonormal_basis(4)
    bounds = seq.frame_bounds()
    assert seq.classify().kind is SequenceKind.ORTHONORMAL_BASIS
    assert bounds.lower == pytest.approx(1.0, abs=1e-12)
    assert bounds.upper == pytest.approx(1.0, abs=1e-12)
    assert bounds.is_tight


def test_mercedes_frame_is_tight_and_overcomplete():
    seq = mercedes_frame()
    seq_class = seq.classify()
    bounds = seq.frame_bounds()
    assert seq_class.kind is SequenceKind.FRAME
    assert seq_class.overcomplete
    assert bounds.lower == pytest.approx(1.5, abs=1e-12)
    assert bounds.upper == pytest.approx(1.5, abs=1e-12)
    assert bounds.is_tight


def test_collinear_sequence_is_bessel_only(collinear):
    seq_class = collinear.classify()
    assert seq_class.kind is SequenceKind.BESSEL_ONLY
    assert not seq_class.satisfies_lower_frame_condition
    assert not seq_class.overcomplete
    assert collinear.frame_bounds().lower == pytest.approx(0.0, abs=1e-12)
    assert collinear.bessel_bound() == pytest.approx(5.0)


def test_skewed_basis_bounds(skewed_basis):
    assert skewed_basis.classify().kind is SequenceKind.RIESZ_BASIS
    bounds = skewed_basis.frame_bounds()
    assert bounds.lower == pytest.approx((3 - np.sqrt(5)) / 2)
    assert bounds.upper == pytest.approx((3 + np.sqrt(5)) / 2)
    assert not bounds.is_tight


def test_frame_inequality_holds_for_random_vectors(rng):
    seq = ri.random_frame(rng, 4, 9)
    bounds = seq.frame_bounds()
    for f in ri.random_unit_vectors(rng, 4, 100).T:
        energy = np.linalg.norm(seq.analysis(f)) ** 2
        assert bounds.lower * (1 - 1e-9) <= energy <= bounds.upper * (1 + 1e-9)


def test_riesz_inequality_holds_for_random_coefficients(rng):
    seq = ri.random_riesz_basis(rng, 5, 20.0)
    bounds = riesz_bounds(seq)
    for c in ri.complex_gaussian(rng, (5, 100)).T:
        norm_c = np.linalg.norm(c) ** 2
        image = np.linalg.norm(seq.synthesis(c)) ** 2
        assert bounds.lower * norm_c * (1 - 1e-9) <= image <= bounds.upper * norm_c * (1 + 1e-9)


def test_synthesis_is_adjoint_of_analysis(rng):
    seq = ri.random_bessel(rng, 3, 7)
    c = ri.complex_gaussian(rng, 7)
    f = ri.complex_gaussian(rng, 3)
    assert numerics.inner(seq.synthesis(c), f) == pytest.approx(
        numerics.inner(c, seq.analysis(f)), rel=1e-12
    )


def test_riesz_bounds_equal_frame_bounds(rng):
    seq = ri.random_riesz_basis(rng, 5, 20.0)
    riesz = riesz_bounds(seq)
    frame = seq.frame_bounds()
    assert riesz.lower == pytest.approx(frame.lower, rel=1e-9)
    assert riesz.upper == pytest.approx(frame.upper, rel=1e-9)


def test_riesz_bounds_need_a_riesz_basis():
    with pytest.raises(PreconditionError):
        riesz_bounds(mercedes_frame())


def test_bessel_certificates_pass(rng):
    seq = ri.random_bessel(rng, 4, 9)
    assert all(c.passed for c in bessel_certificates(seq))


# --- Duals ---


def test_mercedes_canonical_dual_is_two_thirds():
    seq = mercedes_frame()
    dual = seq.canonical_dual()
    assert np.allclose(dual.synthesis_matrix, (2 / 3) * seq.synthesis_matrix)
    assert is_dual_pair(seq, dual)
    assert max(dual_reconstruction_residuals(seq)) < 1e-12


def test_canonical_dual_is_an_involution(rng):
    seq = ri.random_frame(rng, 3, 7)
    twice = seq.canonical_dual().canonical_dual()
    assert np.allclose(twice.synthesis_matrix, seq.synthesis_matrix, atol=1e-12)


def test_canonical_dual_bounds_are_reciprocal(rng):
    seq = ri.scaled_frame(rng, 3, 5, 0.5, 4.0)
    bounds = seq.canonical_dual().frame_bounds()
    assert bounds.lower == pytest.approx(0.25, rel=1e-9)
    assert bounds.upper == pytest.approx(2.0, rel=1e-9)


def test_tight_frame_is_not_its_own_dual():
    # D_f C_f = S = 1.5 I.
    seq = mercedes_frame()
    assert not is_dual_pair(seq, seq)


def test_canonical_dual_needs_a_frame(collinear):
    with pytest.raises(PreconditionError):
        collinear.canonical_dual()


def test_biorthogonal_dual(skewed_basis):
    dual = skewed_basis.biorthogonal_dual()
    assert np.allclose(dual.synthesis_matrix, [[1.0, 0.0], [-1.0, 1.0]])
    assert biorthogonality_deviation(skewed_basis, dual) < 1e-12
    assert is_dual_pair(skewed_basis, dual)


def test_biorthogonal_dual_needs_a_riesz_basis():
    with pytest.raises(PreconditionError):
        mercedes_frame().biorthogonal_dual()


def test_alternative_dual_differs_from_canonical(rng):
    seq = mercedes_frame()
    dual = alternative_dual(seq, rng=rng)
    assert is_dual_pair(seq, dual)
    assert not np.allclose(dual.synthesis_matrix, seq.canonical_dual().synthesis_matrix)


def test_alternative_dual_with_zero_mixing_is_canonical():
    seq = mercedes_frame()
    dual = alternative_dual(seq, mixing=np.zeros((1, 2)))
    assert np.allclose(dual.synthesis_matrix, seq.canonical_dual().synthesis_matrix)


def test_alternative_dual_needs_overcomplete_frame(skewed_basis):
    with pytest.raises(PreconditionError):
        alternative_dual(skewed_basis)


def test_is_dual_pair_rejects_mismatched_shapes():
    with pytest.raises(ShapeError):
        is_dual_pair(mercedes_frame(), orthonormal_basis(2))


# --- Derived systems ---


def test_difference_of_equal_sequences_is_zero():
    seq = mercedes_frame()
    assert difference(seq, seq).bessel_bound() == 0.0


def test_tensor_product_bounds_multiply(rng):
    f = ri.scaled_frame(rng, 2, 3, 1.0, 2.0)
    g = ri.scaled_frame(rng, 3, 4, 0.5, 3.0)
    bounds = tensor_product_system(f, g).frame_bounds()
    assert bounds.lower == pytest.approx(0.5, rel=1e-9)
    assert bounds.upper == pytest.approx(6.0, rel=1e-9)
