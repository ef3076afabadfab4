import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.services.errors import (
    DimensionMismatchError,
    NoHermitianInvertibleError,
    NotHermitianError,
    SingularError,
)
from src.services.krein import (
    ImplementerSpace,
    check_hermitian_product,
    check_implements_flip,
    check_rho_unitarity,
    conjugate_symmetry_residual,
    expandability_necessary,
    hilbert_recovery_residual,
    implementer_residual,
    indefiniteness_witness,
    is_twisted_unitary,
    krein_decompose,
    recover_hilbert_product,
    select_hermitian_invertible,
    solve_implementers,
    twisted_product,
    twisted_unitary_algebra_dim,
    twisted_unitary_from_algebra,
    unitary_algebra_basis,
    verify_fundamental_symmetry,
)
from src.services.models import electrodynamics_twist, manifold_fiber_twist, toy_c_m2_on_c10, toy_c_on_c3
from src.services.numerics import adjoint, identity, kron
from src.services.twist import build_minimal_twist


def _twist(md):
    return build_minimal_twist(md.triple, md.twist_operator)


# ==================================================================
# Expandability
# ==================================================================

def test_c_on_c3_is_obstructed():
    mt = _twist(toy_c_on_c3())
    ex = expandability_necessary(mt)
    assert (ex.plus_dim, ex.minus_dim) == (1, 2)
    assert not ex.dims_equal
    assert not ex.traces_equal
    space = solve_implementers(mt)
    assert space.empty
    assert space.real_dimension == 0
    assert space.intertwiner_dimension == 8


def test_c_m2_on_c10_is_obstructed_by_traces_only():
    mt = _twist(toy_c_m2_on_c10())
    ex = expandability_necessary(mt)
    assert (ex.plus_dim, ex.minus_dim) == (5, 5)
    assert ex.dims_equal
    assert not ex.traces_equal
    assert not ex.doubled_traces_equal
    space = solve_implementers(mt)
    assert space.real_dimension == 0
    assert space.intertwiner_dimension == 20


def test_manifold_implementers(manifold, manifold_twist, gammas):
    ex = expandability_necessary(manifold_twist)
    assert ex.dims_equal and ex.traces_equal and ex.doubled_traces_equal
    space = solve_implementers(manifold_twist)
    assert space.real_dimension == 16
    for b in space.basis:
        assert implementer_residual(manifold_twist, b) < 1e-10
    for g in gammas.gammas:
        assert check_implements_flip(manifold_twist, g)


def test_electrodynamics_accepts_gamma0_on_the_spinor_factor(electrodynamics, electrodynamics_twist_built):
    mt = electrodynamics_twist_built
    space = solve_implementers(mt)
    r = electrodynamics.preferences["gamma0"]
    assert_allclose(select_hermitian_invertible(space, r), r)
    assert check_implements_flip(mt, r)


@pytest.mark.parametrize("a", range(4))
def test_electrodynamics_every_spinor_gamma_implements_the_flip(gammas, electrodynamics_twist_built, a):
    r = kron(identity(4), gammas.gammas[a])
    assert implementer_residual(electrodynamics_twist_built, r) < 1e-12
    assert check_implements_flip(electrodynamics_twist_built, r)


def test_implementers_swap_the_twist_eigenspaces(manifold_twist, electrodynamics_twist_built):
    for mt in (manifold_twist, electrodynamics_twist_built):
        space = solve_implementers(mt)
        assert space.block_diagonal_residual < 1e-10
        for b in space.basis:
            assert_allclose(mt.p_plus @ b @ mt.p_plus, 0, atol=1e-10)
            assert_allclose(mt.p_minus @ b @ mt.p_minus, 0, atol=1e-10)


def test_rejected_preference_falls_back_to_a_random_implementer(manifold_twist):
    space = solve_implementers(manifold_twist)
    r = select_hermitian_invertible(space, identity(4), seed=5)
    assert np.abs(r - identity(4)).max() > 0.1
    assert implementer_residual(manifold_twist, r) < 1e-10
    assert check_hermitian_product(r)
    assert np.min(np.abs(np.linalg.eigvalsh(r))) > 1e-10


def test_selection_is_seeded(manifold_twist):
    space = solve_implementers(manifold_twist)
    assert_allclose(select_hermitian_invertible(space, seed=9), select_hermitian_invertible(space, seed=9))


def test_empty_space_has_no_hermitian_invertible():
    with pytest.raises(NoHermitianInvertibleError):
        select_hermitian_invertible(ImplementerSpace(basis=[], real_dimension=0, intertwiner_dimension=0))


# ==================================================================
# Krein structure
# ==================================================================

def test_gamma0_gives_a_krein_product_of_signature_2_2(manifold_twist, gammas):
    r = gammas.gammas[0]
    analysis = krein_decompose(r)
    assert analysis.signature == (2, 2)
    assert analysis.indefinite
    assert analysis.lambda_min == pytest.approx(1.0)
    assert verify_fundamental_symmetry(r, analysis.fundamental_symmetry)
    assert recover_hilbert_product(r)
    assert check_rho_unitarity(manifold_twist, r)


def test_indefiniteness_witness_has_opposite_signs(manifold_twist, gammas):
    r = gammas.gammas[2]
    psi, psi_tilde = indefiniteness_witness(manifold_twist, r)
    assert twisted_product(r, psi, psi).real > 0.1
    assert twisted_product(r, psi_tilde, psi_tilde).real < -0.1
    assert np.linalg.norm(psi) == pytest.approx(1.0)


def test_twisted_product_is_conjugate_symmetric_for_hermitian_r(gammas, rng):
    assert conjugate_symmetry_residual(gammas.gammas[1], rng) < 1e-12
    assert conjugate_symmetry_residual(1j * gammas.gammas[1], rng) > 1e-3


def test_twisted_product_dimension_mismatch(gammas):
    with pytest.raises(DimensionMismatchError):
        twisted_product(gammas.gammas[0], np.ones(4), np.ones(3))


def test_krein_decompose_errors():
    with pytest.raises(NotHermitianError):
        krein_decompose(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(SingularError):
        krein_decompose(np.diag([1.0, 0.0]))


def test_hermitian_check_agrees_with_conjugate_symmetry(rng):
    disagreements = 0
    for k in range(200):
        n = int(rng.integers(2, 7))
        r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if k % 2 == 0:
            r = (r + adjoint(r)) / 2
        if check_hermitian_product(r) != (conjugate_symmetry_residual(r, rng) < 1e-8):
            disagreements += 1
    assert disagreements == 0


def test_tiny_skew_part_breaks_the_hermitian_product(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = (a + adjoint(a)) / 2
    skew = (a - adjoint(a)) / 2
    assert check_hermitian_product(h)
    assert not check_hermitian_product(h + 1e-6 * skew)


def test_krein_decompose_bounds_the_product_on_each_eigenspace(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    r = (a + adjoint(a)) / 2
    analysis = krein_decompose(r)
    norm_r = np.linalg.norm(r, 2)
    for basis, sign in ((analysis.h_plus_basis, 1.0), (analysis.h_minus_basis, -1.0)):
        assert basis.shape[1] > 0
        for _ in range(20):
            c = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
            psi = basis @ c
            value = sign * twisted_product(r, psi, psi)
            norm2 = np.vdot(psi, psi).real
            assert abs(value.imag) < 1e-10 * norm2
            assert value.real >= analysis.lambda_min * norm2 - 1e-10
            assert value.real <= norm_r * norm2 + 1e-10


@pytest.mark.parametrize("factory", [manifold_fiber_twist, electrodynamics_twist], ids=["manifold-fiber", "electrodynamics"])
def test_every_selected_implementer_is_indefinite_and_recovers_the_inner_product(factory):
    md = factory()
    mt = _twist(md)
    space = solve_implementers(mt)
    candidates = [select_hermitian_invertible(space, seed=s) for s in (1, 2, 3)]
    candidates += [select_hermitian_invertible(space, p) for p in md.preferences.values()]
    for r in candidates:
        psi, psi_tilde = indefiniteness_witness(mt, r)
        assert twisted_product(r, psi, psi).real > 1e-8
        assert twisted_product(r, psi_tilde, psi_tilde).real < -1e-8
        assert hilbert_recovery_residual(r) < 1e-12


def test_twisted_unitaries(gammas, rng):
    r = gammas.gammas[0]
    basis = unitary_algebra_basis(r)
    assert len(basis) == 16
    assert twisted_unitary_algebra_dim(np.diag([1, -1]).astype(complex)) == 4
    assert twisted_unitary_algebra_dim(identity(2)) == 4
    x = sum(c * b for c, b in zip(rng.standard_normal(len(basis)), basis))
    u = twisted_unitary_from_algebra(x, 0.3)
    assert is_twisted_unitary(r, u)
    assert not is_twisted_unitary(r, 2 * identity(4))


# ==================================================================
# rho-unitarity
# ==================================================================

def test_rho_unitarity_holds_for_a_hermitian_implementer(two_point_twist):
    r = kron(np.array([[0, 1], [1, 0]]), identity(2))
    assert check_implements_flip(two_point_twist, r)
    assert check_rho_unitarity(two_point_twist, r)


def test_rho_unitarity_fails_for_a_non_unitary_conjugation(two_point_twist):
    x = np.array([[1, 1], [0, 1]], dtype=complex)
    zero = np.zeros((2, 2), dtype=complex)
    r = np.block([[zero, x], [identity(2), zero]])
    assert not check_rho_unitarity(two_point_twist, r)
    assert not check_implements_flip(two_point_twist, r)
