import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import settings as hyp_settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from src.services.errors import InvalidToleranceError, MatrixShapeError, NotHermitianError
from src.services.numerics import (
    Tolerance,
    adjoint,
    direct_sum,
    hermitian_eigendecompose,
    identity,
    kron,
    left_multiplication,
    matrix_from_json,
    matrix_to_json,
    nullspace,
    numerical_rank,
    orthonormal_span,
    project_onto_span,
    real_span_rank,
    right_multiplication,
)


def _random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + adjoint(a)) / 2


@pytest.mark.parametrize("atol", [0.0, -1e-9])
def test_tolerance_rejects_non_positive(atol):
    with pytest.raises(InvalidToleranceError):
        Tolerance(atol)


@seed(20240601)
@hyp_settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 16), state=st.integers(0, 2**32 - 1))
def test_hermitian_eigendecompose_orders_and_rephases(n, state):
    m = _random_hermitian(n, np.random.default_rng(state))
    values, vectors = hermitian_eigendecompose(m)

    assert np.all(np.diff(values) <= 1e-12)
    assert_allclose(vectors @ np.diag(values) @ adjoint(vectors), m, atol=1e-10)
    assert_allclose(adjoint(vectors) @ vectors, identity(n), atol=1e-10)
    for j in range(n):
        col = vectors[:, j]
        pivot = col[np.flatnonzero(np.abs(col) > 1e-5)[0]]
        assert abs(pivot.imag) < 1e-12 and pivot.real > 0


def test_hermitian_eigendecompose_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eigendecompose(np.array([[0, 1], [0, 0]], dtype=complex))


def test_nullspace_of_zero_system_is_everything():
    assert_allclose(nullspace(np.zeros((3, 4))), np.eye(4))


def test_nullspace_columns_solve_the_system(rng):
    lhs = rng.standard_normal((3, 7)) + 1j * rng.standard_normal((3, 7))
    kernel = nullspace(lhs)
    assert kernel.shape == (7, 4)
    assert_allclose(lhs @ kernel, 0, atol=1e-12)


def test_numerical_rank_and_real_span_rank():
    assert numerical_rank(np.diag([1.0, 1e-20, 2.0])) == 2
    assert real_span_rank([identity(2), 1j * identity(2)]) == 2
    assert real_span_rank([identity(2), 2 * identity(2)]) == 1
    assert real_span_rank([]) == 0


def test_roundoff_noise_has_rank_zero(rng):
    noise = 1e-16 * (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    assert numerical_rank(noise) == 0
    assert real_span_rank([noise, 3 * noise.T]) == 0
    assert orthonormal_span([noise]) == []
    assert_allclose(nullspace(noise), np.eye(6))


def test_rank_floor_follows_the_tolerance():
    m = np.diag([1.0, 1e-9, 1e-12])
    assert numerical_rank(m) == 2
    assert numerical_rank(m, Tolerance(1e-8)) == 1


@seed(99)
@hyp_settings(max_examples=30, deadline=None)
@given(rows=st.integers(1, 12), cols=st.integers(1, 12), rank=st.integers(0, 12), state=st.integers(0, 2**32 - 1))
def test_kernel_dimension_plus_rank_is_the_column_count(rows, cols, rank, state):
    r = np.random.default_rng(state)
    rank = min(rank, rows, cols)
    lhs = (r.standard_normal((rows, rank)) @ r.standard_normal((rank, cols))).astype(complex)
    kernel = nullspace(lhs)
    assert numerical_rank(lhs) == rank
    assert kernel.shape[1] + rank == cols
    assert_allclose(lhs @ kernel, 0, atol=1e-9)


def test_kron_mixed_product_and_associativity(rng):
    a, b, c, d = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(4))
    e = rng.standard_normal((2, 2))
    assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)
    assert_allclose(kron(kron(a, b), e), kron(a, kron(b, e)), atol=1e-12)
    assert_allclose(kron(a, b, e), kron(a, kron(b, e)), atol=1e-12)


def test_kron_keeps_left_factor_outermost():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1], [1, 0]], dtype=complex)
    assert_allclose(kron(a, b), np.kron(a, b))
    assert kron(a, b, identity(3)).shape == (12, 12)


def test_direct_sum_is_block_diagonal():
    m = direct_sum(identity(1), 2 * identity(2))
    assert_allclose(m, np.diag([1, 2, 2]))


def test_row_major_vectorization(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert_allclose(left_multiplication(a) @ x.ravel(), (a @ x).ravel(), atol=1e-12)
    assert_allclose(right_multiplication(a) @ x.ravel(), (x @ a).ravel(), atol=1e-12)


def test_orthonormal_span_and_projection():
    e = np.zeros((2, 2), dtype=complex)
    e[0, 1] = 1.0
    basis = orthonormal_span([e, 3j * e, identity(2)])
    assert len(basis) == 2
    proj, residual = project_onto_span(basis, 2 * e - identity(2))
    assert residual < 1e-12
    assert_allclose(proj, 2 * e - identity(2), atol=1e-12)
    _, residual = project_onto_span(basis, e.T)
    assert residual == pytest.approx(1.0)


def test_matrix_json_encoding():
    m = np.array([[1 + 2j, 0], [0.5, -1j]])
    assert matrix_to_json(m)[0][0] == [1.0, 2.0]
    assert_allclose(matrix_from_json(matrix_to_json(m)), m)


@pytest.mark.parametrize(
    "rows, path",
    [
        ([], "$.m"),
        ([[[1, 0]], [[1, 0], [0, 0]]], "$.m[1]"),
        ([[[1, 0, 0]]], "$.m[0][0]"),
        ([[1.0]], "$.m[0][0]"),
        ([[["a", 0]]], "$.m[0][0]"),
        ([[[None, 1]]], "$.m[0][0]"),
    ],
)
def test_matrix_from_json_reports_path(rows, path):
    with pytest.raises(MatrixShapeError) as exc:
        matrix_from_json(rows, "$.m")
    assert exc.value.path == path
