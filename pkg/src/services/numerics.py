# src/services/numerics.py
"""
Numerics
--------
Dense complex matrix helpers shared by every other module:
  - Hermitian eigendecomposition with reproducible eigenvector phases
  - nullspaces (complex-linear and real-linear)
  - Kronecker products and direct sums
  - row-major vectorization of operator equations
  - the [[re, im], ...] JSON encoding of matrices

All comparisons use the entrywise max-norm against Tolerance.atol.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from src.config import settings
from src.services.errors import (
    InvalidToleranceError,
    MatrixShapeError,
    NonSquareError,
    NotHermitianError,
)

log = logging.getLogger(__name__)

ComplexMatrix = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    atol: float = field(default_factory=lambda: settings.ATOL)

    def __post_init__(self):
        if not self.atol > 0:
            raise InvalidToleranceError(f"atol must be positive, got {self.atol}")


def _tol(tol: Tolerance | None) -> Tolerance:
    return tol if tol is not None else Tolerance()


# ==================================================================
# Basic matrix helpers
# ==================================================================

def as_matrix(m) -> ComplexMatrix:
    """Coerce scalars, nested lists and arrays into a 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise MatrixShapeError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(m).T


def max_norm(m) -> float:
    arr = np.asarray(m)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def require_square(m: ComplexMatrix, what: str = "matrix") -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"{what} must be square, got shape {m.shape}")


def hermitian_residual(m: ComplexMatrix) -> float:
    return max_norm(m - adjoint(m))


def is_hermitian(m: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    return hermitian_residual(m) <= _tol(tol).atol


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return a @ b - b @ a


def anticommutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return a @ b + b @ a


def identity(n: int) -> ComplexMatrix:
    return np.eye(n, dtype=complex)


# ==================================================================
# Kernels
# ==================================================================

def hermitian_eigendecompose(m: ComplexMatrix, tol: Tolerance | None = None):
    """
    Eigenvalues in descending order and orthonormal eigenvector columns.

    Each eigenvector is rephased so that its first component of non-negligible
    modulus is real and positive.
    """
    tol = _tol(tol)
    m = as_matrix(m)
    require_square(m)
    residual = hermitian_residual(m)
    if residual > tol.atol:
        raise NotHermitianError(residual)

    values, vectors = sla.eigh((m + adjoint(m)) / 2)
    values = values[::-1]
    vectors = vectors[:, ::-1].copy()
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        idx = np.flatnonzero(np.abs(col) > np.sqrt(tol.atol))
        if idx.size:
            pivot = col[idx[0]]
            vectors[:, j] = col * (np.abs(pivot) / pivot)
    return values, vectors


def _rcond(shape) -> float:
    return max(shape) * settings.RANK_RCOND


def _rank_of(s: np.ndarray, shape, tol: Tolerance) -> int:
    """Singular values count only above both the relative cutoff and atol."""
    if s.size == 0:
        return 0
    cutoff = max(_rcond(shape) * s[0], tol.atol)
    return int(np.sum(s > cutoff))


def numerical_rank(m, tol: Tolerance | None = None) -> int:
    arr = np.asarray(m)
    if arr.size == 0:
        return 0
    return _rank_of(sla.svdvals(arr), arr.shape, _tol(tol))


def nullspace(lhs, tol: Tolerance | None = None) -> ComplexMatrix:
    """Orthonormal columns spanning {x : lhs @ x = 0} (possibly zero columns)."""
    tol = _tol(tol)
    arr = np.asarray(lhs)
    n = arr.shape[1]
    if arr.shape[0] == 0 or max_norm(arr) <= tol.atol:
        return np.eye(n, dtype=arr.dtype if np.iscomplexobj(arr) else float)
    # vh must be square; U only needs to be when the system is wide
    _, s, vh = sla.svd(arr, full_matrices=arr.shape[0] < n)
    rank = _rank_of(s, arr.shape, tol)
    basis = np.conj(vh[rank:]).T
    log.debug("nullspace: %s system, kernel dimension %d", arr.shape, basis.shape[1])
    return basis


def realify(m) -> np.ndarray:
    """Real form of a complex-linear map acting on (Re x, Im x)."""
    m = np.asarray(m, dtype=complex)
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def real_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.concatenate([v.real, v.imag])


def real_span_rank(mats: Sequence[ComplexMatrix], tol: Tolerance | None = None) -> int:
    """Dimension over the reals of the span of the given matrices."""
    if not mats:
        return 0
    return numerical_rank(np.column_stack([real_vector(m) for m in mats]), tol)


def orthonormal_span(mats: Sequence[ComplexMatrix], tol: Tolerance | None = None) -> list[ComplexMatrix]:
    """Hilbert-Schmidt orthonormal basis of the complex span of the matrices."""
    if not mats:
        return []
    shape = mats[0].shape
    stacked = np.column_stack([np.asarray(m, dtype=complex).ravel() for m in mats])
    u, s, _ = sla.svd(stacked, full_matrices=False)
    rank = _rank_of(s, stacked.shape, _tol(tol))
    return [u[:, j].reshape(shape) for j in range(rank)]


def project_onto_span(basis: Sequence[ComplexMatrix], m: ComplexMatrix) -> tuple[ComplexMatrix, float]:
    """Orthogonal projection onto an orthonormal basis; returns (projection, residual)."""
    m = as_matrix(m)
    proj = np.zeros_like(m)
    for b in basis:
        proj = proj + np.vdot(b, m) * b
    return proj, max_norm(m - proj)


# ==================================================================
# Assembly
# ==================================================================

def kron(*mats) -> ComplexMatrix:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def direct_sum(*mats) -> ComplexMatrix:
    return sla.block_diag(*[as_matrix(m) for m in mats]).astype(complex)


def left_multiplication(a: ComplexMatrix) -> ComplexMatrix:
    """Matrix of X -> a @ X on row-major vec(X)."""
    return np.kron(a, identity(a.shape[1]))


def right_multiplication(b: ComplexMatrix) -> ComplexMatrix:
    """Matrix of X -> X @ b on row-major vec(X)."""
    return np.kron(identity(b.shape[0]), b.T)


def smallest_singular_value(m: ComplexMatrix) -> float:
    s = sla.svdvals(m)
    return float(s[-1]) if s.size else 0.0


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ==================================================================
# JSON encoding
# ==================================================================

def matrix_to_json(m: ComplexMatrix) -> list[list[list[float]]]:
    m = as_matrix(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows, path: str = "$") -> ComplexMatrix:
    if not isinstance(rows, list) or not rows:
        raise MatrixShapeError("matrix must be a non-empty list of rows", path)
    width = None
    out: list[list[complex]] = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise MatrixShapeError("row must be a list", f"{path}[{i}]")
        if width is None:
            width = len(row)
        if len(row) != width or width == 0:
            raise MatrixShapeError(f"row has {len(row)} entries, expected {width}", f"{path}[{i}]")
        parsed = []
        for j, entry in enumerate(row):
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise MatrixShapeError("entry must be [re, im]", f"{path}[{i}][{j}]")
            try:
                parsed.append(complex(float(entry[0]), float(entry[1])))
            except (TypeError, ValueError) as e:
                raise MatrixShapeError(f"entry is not numeric: {entry!r}", f"{path}[{i}][{j}]") from e
        out.append(parsed)
    return np.array(out, dtype=complex)
