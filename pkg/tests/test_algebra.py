import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import settings as hyp_settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.services.algebra import (
    AlgebraSpec,
    Representation,
    Summand,
    algebra_basis,
    check_faithful,
    element,
    homomorphism_residual,
    quaternion,
    random_element,
    represent,
    unit,
)
from src.services.errors import SchemaError, SpecMismatchError
from src.services.numerics import adjoint, identity


def test_summand_parsing():
    assert Summand.parse("C").size == 1
    assert Summand.parse("H").size == 2
    assert Summand.parse("M(3)").size == 3
    assert Summand.parse("M(3)").label == "M(3)"


@pytest.mark.parametrize("label", ["Q", "M(0)", "M3", ""])
def test_summand_parsing_rejects_unknown_labels(label):
    with pytest.raises(SchemaError):
        Summand.parse(label)


def test_algebra_basis_dimensions():
    # real dimensions: C -> 2, H -> 4, M(n) -> 2 n^2
    assert len(algebra_basis(AlgebraSpec.of("C"))) == 2
    assert len(algebra_basis(AlgebraSpec.of("H"))) == 4
    assert len(algebra_basis(AlgebraSpec.of("C", "H", "M(3)"))) == 2 + 4 + 18


def test_represent_lays_out_blocks_in_order():
    spec = AlgebraSpec.of("C", "M(2)")
    rep = Representation.of(spec, (1, 1), (0, 2))
    m = np.array([[1, 2], [3, 4]], dtype=complex)
    out = represent(rep, element(spec, 5.0, m))
    assert_allclose(out, np.block([[m, np.zeros((2, 2))], [np.zeros((2, 2)), 5 * identity(2)]]))
    assert rep.total_dim == 4


def test_conjugated_block_carries_complex_conjugate():
    spec = AlgebraSpec.of("C")
    rep = Representation.of(spec, (0, 1), (0, 1, True))
    assert_allclose(represent(rep, element(spec, 2 + 3j)), np.diag([2 + 3j, 2 - 3j]))


def test_represent_rejects_foreign_elements():
    rep = Representation.of(AlgebraSpec.of("C"), (0, 2))
    with pytest.raises(SpecMismatchError):
        represent(rep, unit(AlgebraSpec.of("H")))


def test_unit_acts_as_identity():
    spec = AlgebraSpec.of("C", "H")
    rep = Representation.of(spec, (0, 3), (1, 2))
    assert_allclose(represent(rep, unit(spec)), identity(7))


def test_quaternion_elements_stay_quaternions(rng):
    spec = AlgebraSpec.of("H")
    x, y = random_element(spec, rng), random_element(spec, rng)
    assert (x * y).quaternion_residual() < 1e-12
    assert x.star().quaternion_residual() < 1e-12
    assert_allclose(quaternion(1, 0), identity(2))


@seed(7)
@hyp_settings(max_examples=25, deadline=None)
@given(state=st.integers(0, 2**32 - 1))
def test_representation_is_a_star_homomorphism(state):
    spec = AlgebraSpec.of("C", "H", "M(2)")
    rep = Representation.of(spec, (0, 2), (1, 1), (2, 1, True), (1, 2))
    rng = np.random.default_rng(state)
    x, y = random_element(spec, rng), random_element(spec, rng)
    assert homomorphism_residual(rep, x, y) < 1e-10
    assert_allclose(represent(rep, x.star()), adjoint(represent(rep, x)), atol=1e-12)


def test_random_element_is_reproducible():
    spec = AlgebraSpec.of("C", "M(2)")
    a, b = random_element(spec, 11), random_element(spec, 11)
    for ca, cb in zip(a.components, b.components):
        assert_allclose(ca, cb)


def test_faithfulness():
    spec = AlgebraSpec.of("C", "C")
    assert check_faithful(Representation.of(spec, (0, 1), (1, 1)))
    assert not check_faithful(Representation.of(spec, (0, 3)))


def test_c_m2_eigenspace_restrictions_are_faithful():
    # T = diag(+I5, -I5) splits diag(m, c, c, c, m, m, c) into these two blocks
    spec = AlgebraSpec.of("C", "M(2)")
    assert check_faithful(Representation.of(spec, (1, 1), (0, 3)))
    assert check_faithful(Representation.of(spec, (1, 2), (0, 1)))
    assert not check_faithful(Representation.of(spec, (1, 2)))
