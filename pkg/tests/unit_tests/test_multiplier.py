"""Unit tests for building multipliers and certifying their bounds."""

import numpy as np
import pytest

from bessel_multipliers import multiplier, symbols
from bessel_multipliers import random_instances as ri
from bessel_multipliers.command_errors import PreconditionError, ShapeError
from bessel_multipliers.sequences import SequenceSystem, mercedes_frame, orthonormal_basis


# --- Fixtures ---


@pytest.fixture
def random_mult(rng):
    f = ri.random_bessel(rng, 3, 5)
    g = ri.random_bessel(rng, 4, 6)
    return multiplier.build(ri.random_symbol(rng, 6, 5), g, f)


@pytest.fixture
def riesz_mult(rng):
    f = ri.random_riesz_basis(rng, 4, 10.0)
    g = ri.random_riesz_basis(rng, 4, 10.0)
    return multiplier.build(ri.random_symbol(rng, 4, 4), g, f)


# --- Building ---


def test_identity_symbol_on_orthonormal_basis():
    onb = orthonormal_basis(3)
    mult = multiplier.build(symbols.identity_symbol(3), onb, onb)
    assert np.allclose(mult.assembled, np.eye(3))


def test_diagonal_symbol_on_orthonormal_basis():
    onb = orthonormal_basis(3)
    mult = multiplier.build(symbols.diagonal_symbol([1.0, 2j, -3.0]), onb, onb)
    assert np.allclose(mult.assembled, np.diag([1.0, 2j, -3.0]))


def test_identity_symbol_gives_frame_operator():
    seq = mercedes_frame()
    mult = multiplier.build(symbols.identity_symbol(3), seq, seq)
    assert np.allclose(mult.assembled, seq.frame_operator())
    assert np.allclose(mult.assembled, 1.5 * np.eye(2))


def test_build_rejects_mismatched_symbol():
    with pytest.raises(ShapeError):
        multiplier.build(symbols.identity_symbol(2), mercedes_frame(), mercedes_frame())


def test_assembled_is_read_only(random_mult):
    with pytest.raises(ValueError):
        random_mult.assembled[0, 0] = 1.0


def test_shape_properties(random_mult):
    assert random_mult.input_dim == 3
    assert random_mult.output_dim == 4
    assert not random_mult.is_square


def test_apply_matches_assembled(random_mult, rng):
    x = ri.complex_gaussian(rng, 3)
    assert np.allclose(random_mult.apply(x), random_mult.assembled @ x)


def test_assembly_matches_rank_one_expansion(random_mult):
    assert np.allclose(multiplier.rank_one_expansion(random_mult), random_mult.assembled)
    assert multiplier.assembly_certificate(random_mult).passed


def test_build_is_linear_in_symbol(rng):
    f = ri.random_bessel(rng, 3, 4)
    g = ri.random_bessel(rng, 2, 5)
    u1, u2 = ri.random_symbol(rng, 5, 4), ri.random_symbol(rng, 5, 4)
    combined = multiplier.build(2 * u1.matrix - 1j * u2.matrix, g, f).assembled
    separate = (
        2 * multiplier.build(u1, g, f).assembled - 1j * multiplier.build(u2, g, f).assembled
    )
    assert np.allclose(combined, separate)


# --- Adjoint and norm bounds ---


def test_adjoint(random_mult):
    assert multiplier.adjoint_check(random_mult).passed
    twice = random_mult.adjoint().adjoint()
    assert np.allclose(twice.assembled, random_mult.assembled)


def test_norm_certificates_pass(random_mult):
    certificates = multiplier.norm_certificates(random_mult)
    assert [c.claim for c in certificates] == ["thm-3.2(1)-op", "thm-3.2(4)-s1", "thm-3.2(4)-s2"]
    assert all(c.passed for c in certificates)


def test_norm_bound_is_attained_on_orthonormal_basis():
    onb = orthonormal_basis(3)
    mult = multiplier.build(symbols.diagonal_symbol([1.0, 2.0, 0.5]), onb, onb)
    op = multiplier.norm_certificates(mult)[0]
    assert op.lhs == pytest.approx(2.0)
    assert op.rhs == pytest.approx(2.0)


def test_scaled_basis_norm():
    """f_k = 2 e_k and an orthonormal g give ||M|| = 2 = sqrt(B_f B_g) ||I||."""
    scaled = SequenceSystem(2 * np.eye(3))
    mult = multiplier.build(symbols.identity_symbol(3), orthonormal_basis(3), scaled)
    op = multiplier.norm_certificates(mult)[0]
    assert op.passed
    assert op.lhs == pytest.approx(2.0)
    assert op.rhs == pytest.approx(2.0)


# --- Positivity ---


def test_positive_symbol_gives_positive_multiplier(rng):
    seq = ri.random_bessel(rng, 3, 6)
    assert multiplier.positivity_check(ri.random_psd_symbol(rng, 6), seq).passed


def test_zero_symbol_is_positive():
    seq = mercedes_frame()
    assert multiplier.positivity_check(np.zeros((3, 3)), seq).passed


def test_positivity_needs_positive_symbol():
    with pytest.raises(PreconditionError):
        multiplier.positivity_check(np.diag([1.0, -1.0, 1.0]), mercedes_frame())


# --- Riesz bases ---


def test_riesz_lower_bound(riesz_mult):
    assert multiplier.riesz_lower_bound(riesz_mult).passed


def test_riesz_lower_bound_on_orthonormal_basis():
    onb = orthonormal_basis(3)
    mult = multiplier.build(symbols.diagonal_symbol([0.0, 0.0, 5.0]), onb, onb)
    certificate = multiplier.riesz_lower_bound(mult)
    assert certificate.passed
    assert certificate.lhs == pytest.approx(5.0)
    assert certificate.context["ratio"] == pytest.approx(1.0)


def test_riesz_lower_bound_needs_riesz_bases():
    seq = mercedes_frame()
    mult = multiplier.build(symbols.identity_symbol(3), seq, seq)
    with pytest.raises(PreconditionError):
        multiplier.riesz_lower_bound(mult)


def test_hilbert_schmidt_bounds(riesz_mult):
    assert all(c.passed for c in multiplier.hilbert_schmidt_riesz_bounds(riesz_mult))


def test_recover_symbol(riesz_mult):
    recovered = multiplier.recover_symbol(riesz_mult)
    assert np.allclose(recovered.matrix, riesz_mult.symbol.matrix)


# --- Composition ---


def test_composition_over_biorthogonal_sequences(rng):
    f = ri.random_riesz_basis(rng, 3, 10.0)
    g = ri.random_bessel(rng, 2, 4)
    h = ri.random_bessel(rng, 5, 6)
    first = multiplier.build(ri.random_symbol(rng, 4, 3), g, f)
    second = multiplier.build(ri.random_symbol(rng, 3, 6), f.biorthogonal_dual(), h)
    composed = multiplier.compose_biorthogonal(first, second)
    assert np.allclose(composed.assembled, first.assembled @ second.assembled)
    assert multiplier.composition_check(first, second).passed


def test_composition_rejects_non_biorthogonal(rng):
    f = mercedes_frame()
    first = multiplier.build(symbols.identity_symbol(3), f, f)
    second = multiplier.build(symbols.identity_symbol(3), f, f)
    with pytest.raises(PreconditionError) as excinfo:
        multiplier.compose_biorthogonal(first, second)
    assert excinfo.value.deviation > 0


def test_composition_shape_mismatch():
    onb2, onb3 = orthonormal_basis(2), orthonormal_basis(3)
    first = multiplier.build(symbols.identity_symbol(2), onb2, onb2)
    second = multiplier.build(symbols.identity_symbol(3), onb3, onb3)
    with pytest.raises(ShapeError):
        multiplier.compose_biorthogonal(first, second)


# --- Profiles ---


def test_singular_profile_of_zero_multiplier():
    onb = orthonormal_basis(3)
    profile = multiplier.singular_profile(multiplier.build(np.zeros((3, 3)), onb, onb))
    assert profile.values == (0.0, 0.0, 0.0)
    assert profile.rank() == 0


def test_singular_profile_of_rank_one_symbol():
    onb = orthonormal_basis(3)
    profile = multiplier.singular_profile(
        multiplier.build(symbols.diagonal_symbol([1.0, 0.0, 0.0]), onb, onb)
    )
    assert profile.rank() == 1


def test_triblock_profile_on_orthonormal_basis():
    onb = orthonormal_basis(6)
    u = symbols.triblock_example(6)
    profile = multiplier.singular_profile(multiplier.build(u, onb, onb))
    assert np.allclose(profile.array, symbols.singular_decay(u).array)


def test_tensor_synthesis(random_mult):
    assert multiplier.tensor_synthesis_check(random_mult).passed
