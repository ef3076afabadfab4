import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import settings as hyp_settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.services.clifford import (
    CHIRALITY_PHASE,
    DUAL_FORM_WEIGHT,
    MINKOWSKI,
    ConstantForm,
    chiral_mixing_unitary,
    clifford_action,
    clifford_residual,
    hodge_star,
    krein_equivalence_witness,
    krein_operator,
    lorentzian_gammas,
    monomials,
    one_form,
    torsion_fluctuation,
    verify_clifford_identity,
)
from src.services.errors import UnsupportedError
from src.services.numerics import adjoint, anticommutator, hermitian_residual, identity

finite_reals = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def test_euclidean_clifford_relations(gammas):
    assert clifford_residual(gammas) == 0.0
    product = gammas.gammas[0] @ gammas.gammas[1] @ gammas.gammas[2] @ gammas.gammas[3]
    assert_allclose(gammas.chirality, CHIRALITY_PHASE * product)
    for g in gammas.gammas:
        assert hermitian_residual(g) == 0.0


def test_lorentzian_gammas_follow_the_minkowski_metric(gammas):
    lg = lorentzian_gammas(gammas)
    for mu in range(4):
        for nu in range(4):
            assert_allclose(anticommutator(lg[mu], lg[nu]), 2 * MINKOWSKI[mu, nu] * identity(4), atol=1e-14)


def test_lorentzian_krein_operator(gammas):
    frak_j = krein_operator(4, 3)
    eye, zero = identity(2), np.zeros((2, 2))
    assert_allclose(frak_j, 1j * np.block([[zero, eye], [-eye, zero]]), atol=1e-14)
    assert_allclose(frak_j @ frak_j, identity(4), atol=1e-14)
    assert hermitian_residual(frak_j) < 1e-14
    assert_allclose(krein_operator(4, 0), -identity(4))


def test_krein_operator_is_unitarily_equivalent_to_gamma0(gammas):
    u = chiral_mixing_unitary()
    w = krein_equivalence_witness()
    assert_allclose(adjoint(u) @ u, identity(4), atol=1e-14)
    assert_allclose(w @ gammas.gammas[0] @ adjoint(w), krein_operator(4, 3), atol=1e-14)


@pytest.mark.parametrize("n, k", [(3, 1), (4, 5), (4, -1)])
def test_krein_operator_unsupported(n, k):
    with pytest.raises(UnsupportedError):
        krein_operator(n, k)


def test_constant_form_validates_multi_indices():
    with pytest.raises(ValueError):
        ConstantForm(2, {(1, 0): 1.0})
    with pytest.raises(ValueError):
        ConstantForm(5)


@pytest.mark.parametrize("degree", range(5))
def test_double_hodge_star_sign(degree):
    w = ConstantForm(degree, {idx: complex(k + 1) for k, idx in enumerate(monomials(degree))})
    twice = hodge_star(hodge_star(w))
    sign = (-1) ** (degree * (4 - degree))
    for idx in monomials(degree):
        assert twice.coefficient(idx) == sign * w.coefficient(idx)


def test_hodge_star_of_dx0_is_dx123():
    star = hodge_star(one_form([1, 0, 0, 0]))
    assert star.degree == 3
    assert star.coefficients == {(1, 2, 3): 1}


def test_clifford_action_of_a_one_form(gammas):
    f = [0.5, -1.0, 2.0, 0.25]
    expected = sum(f[mu] * gammas.gammas[mu] for mu in range(4))
    assert_allclose(clifford_action(gammas, one_form(f)), expected)


@seed(20240601)
@hyp_settings(max_examples=100, deadline=None)
@given(f=st.lists(finite_reals, min_size=4, max_size=4))
def test_torsion_identity(gammas, f):
    assert verify_clifford_identity(gammas, f) < 1e-12
    m, dual = torsion_fluctuation(gammas, f)
    assert hermitian_residual(m) < 1e-14 * max(1.0, max(abs(x) for x in f))
    assert dual.degree == 3


def test_torsion_fluctuation_form_json(gammas):
    _, dual = torsion_fluctuation(gammas, [1.0, 0.0, 0.0, 0.0])
    assert dual.to_json() == {"degree": 3, "coefficients": {"123": [-1.0, 0.0]}}


def test_dual_form_weight_is_pinned(gammas):
    assert DUAL_FORM_WEIGHT == 4
    f = [1.0, -0.5, 0.0, 2.0]
    lhs, _ = torsion_fluctuation(gammas, f)
    unweighted = ((-1j) ** 3 / 4) * clifford_action(gammas, hodge_star(one_form(f)))
    assert_allclose(lhs, DUAL_FORM_WEIGHT * unweighted, atol=1e-12)
    assert np.abs(lhs - unweighted).max() > 0.1
