# src/services/krein.py
"""
Expandability and Krein structure
---------------------------------
A minimal twist is expandable when some invertible R implements the flip:
R pi'(d) R^-1 = pi'(rho(d)). In finite dimension this is the linear system

    R T + T R = 0,   [R, pi(a)] = 0   for every basis element a

solved directly on row-major vec(R). A Hermitian invertible implementer
defines the twisted product (psi, phi)_R = <psi, R phi>, which is a Krein
product: indefinite, non-degenerate, with fundamental symmetry
F = P+ - P- built from the eigenspaces of R.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla

from src.config import settings
from src.services.errors import (
    DimensionMismatchError,
    NoHermitianInvertibleError,
    NotHermitianError,
    SingularError,
)
from src.services.numerics import (
    ComplexMatrix,
    Tolerance,
    adjoint,
    anticommutator,
    as_matrix,
    commutator,
    hermitian_eigendecompose,
    hermitian_residual,
    identity,
    left_multiplication,
    max_norm,
    nullspace,
    numerical_rank,
    random_complex,
    real_vector,
    right_multiplication,
    smallest_singular_value,
)
from src.services.twist import MinimalTwist, in_real_span

log = logging.getLogger(__name__)


# ==================================================================
# Types
# ==================================================================

@dataclass(frozen=True, eq=False)
class ImplementerSpace:
    """Real basis of the invertible solutions' span; empty when none is invertible."""

    basis: list[ComplexMatrix]
    real_dimension: int
    intertwiner_dimension: int = 0
    # largest p+ S p+ or p- S p- block over the raw solutions; implementers swap the eigenspaces
    block_diagonal_residual: float = 0.0

    @property
    def empty(self) -> bool:
        return self.real_dimension == 0


@dataclass(frozen=True)
class ExpandabilityReport:
    plus_dim: int
    minus_dim: int
    trace_residual: float
    doubled_trace_residual: float
    atol: float

    @property
    def dims_equal(self) -> bool:
        return self.plus_dim == self.minus_dim

    @property
    def traces_equal(self) -> bool:
        return self.trace_residual < self.atol

    @property
    def doubled_traces_equal(self) -> bool:
        return self.doubled_trace_residual < self.atol


@dataclass(frozen=True, eq=False)
class KreinAnalysis:
    r_op: ComplexMatrix
    eigenvalues: np.ndarray
    h_plus_basis: ComplexMatrix
    h_minus_basis: ComplexMatrix
    lambda_min: float
    fundamental_symmetry: ComplexMatrix

    @property
    def signature(self) -> tuple[int, int]:
        return (self.h_plus_basis.shape[1], self.h_minus_basis.shape[1])

    @property
    def indefinite(self) -> bool:
        p, q = self.signature
        return p >= 1 and q >= 1


# ==================================================================
# Expandability
# ==================================================================

def expandability_necessary(mt: MinimalTwist, tol: Tolerance | None = None) -> ExpandabilityReport:
    """Equal eigenspace dimensions of T and equal traces of p+ pi(a), p- pi(a)."""
    tol = tol or Tolerance()
    plus = numerical_rank(mt.p_plus, tol)
    minus = numerical_rank(mt.p_minus, tol)
    trace_gap = max(
        (abs(np.trace(mt.p_plus @ a) - np.trace(mt.p_minus @ a)) for a in mt.base.basis_matrices),
        default=0.0,
    )
    doubled_gap = max((abs(np.trace(p) - np.trace(pf)) for p, pf in mt.basis_pairs), default=0.0)
    report = ExpandabilityReport(plus, minus, float(trace_gap), float(doubled_gap), tol.atol)
    log.debug("expandability: dims %d/%d, trace gap %.3e", plus, minus, trace_gap)
    return report


def implementer_residual(mt: MinimalTwist, r: ComplexMatrix) -> float:
    r = as_matrix(r)
    return max(
        [max_norm(anticommutator(r, mt.t_op))] + [max_norm(commutator(r, a)) for a in mt.base.basis_matrices]
    )


def _constraint_system(mt: MinimalTwist) -> np.ndarray:
    t = mt.t_op
    rows = [left_multiplication(t) + right_multiplication(t)]
    rows += [right_multiplication(a) - left_multiplication(a) for a in mt.base.basis_matrices]
    return np.vstack(rows)


def solve_implementers(
    mt: MinimalTwist, tol: Tolerance | None = None, seed: int | None = None
) -> ImplementerSpace:
    tol = tol or Tolerance()
    n = mt.dim
    kernel = nullspace(_constraint_system(mt), tol)
    solutions = [kernel[:, k].reshape(n, n) for k in range(kernel.shape[1])]
    intertwiners = 2 * len(solutions)

    diag_part = max(
        (max(max_norm(mt.p_plus @ s @ mt.p_plus), max_norm(mt.p_minus @ s @ mt.p_minus)) for s in solutions),
        default=0.0,
    )
    if diag_part > tol.atol:
        log.warning("implementer solutions have a block-diagonal part of size %.3e", diag_part)

    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    invertible = False
    if solutions:
        for _ in range(settings.INVERTIBLE_DRAWS):
            coeffs = random_complex(len(solutions), rng)
            draw = sum(c * s for c, s in zip(coeffs, solutions))
            if smallest_singular_value(draw) > tol.atol:
                invertible = True
                break
            log.info("random implementer draw was singular")

    if not invertible:
        log.info("no invertible implementer: %d-dimensional intertwiner space only", intertwiners)
        return ImplementerSpace(
            basis=[], real_dimension=0, intertwiner_dimension=intertwiners, block_diagonal_residual=diag_part
        )
    basis = solutions + [1j * s for s in solutions]
    return ImplementerSpace(
        basis=basis,
        real_dimension=len(basis),
        intertwiner_dimension=intertwiners,
        block_diagonal_residual=diag_part,
    )


def _lambda_min(r: ComplexMatrix) -> float:
    return float(np.min(np.abs(np.linalg.eigvalsh((r + adjoint(r)) / 2))))


def _hermitian_slice(basis: Sequence[ComplexMatrix], tol: Tolerance) -> list[ComplexMatrix]:
    lhs = np.column_stack([real_vector(b - adjoint(b)) for b in basis])
    kernel = nullspace(lhs, tol)
    return [sum(c * b for c, b in zip(kernel[:, k].real, basis)) for k in range(kernel.shape[1])]


def select_hermitian_invertible(
    space: ImplementerSpace,
    preference: ComplexMatrix | None = None,
    tol: Tolerance | None = None,
    seed: int | None = None,
) -> ComplexMatrix:
    tol = tol or Tolerance()
    if not space.basis:
        raise NoHermitianInvertibleError("implementer space is empty")

    if preference is not None:
        pref = as_matrix(preference)
        in_span = pref.shape == space.basis[0].shape and in_real_span(space.basis, pref) < tol.atol
        if in_span and hermitian_residual(pref) < tol.atol and _lambda_min(pref) > tol.atol:
            return pref
        log.info("preferred implementer rejected (in span: %s)", in_span)

    slice_basis = _hermitian_slice(space.basis, tol)
    if not slice_basis:
        raise NoHermitianInvertibleError("implementer span has no Hermitian elements")
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    for attempt in range(settings.HERMITIAN_RETRIES):
        coeffs = rng.standard_normal(len(slice_basis))
        r = sum(c * h for c, h in zip(coeffs, slice_basis))
        r = (r + adjoint(r)) / 2
        r = r / max_norm(r)
        if _lambda_min(r) > tol.atol:
            log.debug("Hermitian invertible implementer found after %d attempts", attempt + 1)
            return r
    raise NoHermitianInvertibleError(f"no invertible Hermitian element after {settings.HERMITIAN_RETRIES} tries")


# ==================================================================
# Twisted product
# ==================================================================

def twisted_product(r: ComplexMatrix, psi, phi) -> complex:
    """(psi, phi)_R = <psi, R phi>, conjugate-linear in psi."""
    r = as_matrix(r)
    psi = np.asarray(psi, dtype=complex).ravel()
    phi = np.asarray(phi, dtype=complex).ravel()
    if not (r.shape[0] == r.shape[1] == psi.size == phi.size):
        raise DimensionMismatchError(f"operator {r.shape} against vectors {psi.size}, {phi.size}")
    return complex(np.vdot(psi, r @ phi))


def check_hermitian_product(r: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return hermitian_residual(as_matrix(r)) < tol.atol


def conjugate_symmetry_residual(r: ComplexMatrix, rng: np.random.Generator, pairs: int = 8) -> float:
    """max |(psi, phi)_R - conj((phi, psi)_R)| over random unit vector pairs."""
    n = as_matrix(r).shape[0]
    worst = 0.0
    for _ in range(pairs):
        psi, phi = random_complex(n, rng), random_complex(n, rng)
        psi, phi = psi / np.linalg.norm(psi), phi / np.linalg.norm(phi)
        worst = max(worst, abs(twisted_product(r, psi, phi) - np.conj(twisted_product(r, phi, psi))))
    return worst


# ==================================================================
# Krein decomposition
# ==================================================================

def krein_decompose(r: ComplexMatrix, tol: Tolerance | None = None) -> KreinAnalysis:
    tol = tol or Tolerance()
    r = as_matrix(r)
    residual = hermitian_residual(r)
    if residual > tol.atol:
        raise NotHermitianError(residual, "implementing operator")
    values, vectors = hermitian_eigendecompose(r, tol)
    lam = float(np.min(np.abs(values)))
    if lam <= tol.atol:
        raise SingularError(lam)
    positive = values > 0
    h_plus, h_minus = vectors[:, positive], vectors[:, ~positive]
    f = h_plus @ adjoint(h_plus) - h_minus @ adjoint(h_minus)
    return KreinAnalysis(
        r_op=r,
        eigenvalues=values,
        h_plus_basis=h_plus,
        h_minus_basis=h_minus,
        lambda_min=lam,
        fundamental_symmetry=f,
    )


def verify_fundamental_symmetry(r: ComplexMatrix, f: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    """F^2 = I, F symmetric for the twisted product, and (., F .)_R positive definite."""
    tol = tol or Tolerance()
    r, f = as_matrix(r), as_matrix(f)
    if max_norm(f @ f - identity(f.shape[0])) > tol.atol:
        return False
    rf = r @ f
    if hermitian_residual(rf) > tol.atol:
        return False
    return float(np.min(np.linalg.eigvalsh((rf + adjoint(rf)) / 2))) > tol.atol


def hilbert_recovery_residual(r: ComplexMatrix, tol: Tolerance | None = None) -> float:
    """max over basis pairs of |<e_i, e_j> - (e_i, R^-1 e_j)_R|."""
    tol = tol or Tolerance()
    r = as_matrix(r)
    lam = smallest_singular_value(r)
    if lam <= tol.atol:
        raise SingularError(lam)
    return max_norm(r @ sla.inv(r) - identity(r.shape[0]))


def recover_hilbert_product(r: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return hilbert_recovery_residual(r, tol) < tol.atol


def indefiniteness_witness(
    mt: MinimalTwist, r: ComplexMatrix, tol: Tolerance | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """
    Unit vectors psi, psi~ with (psi, psi)_R > 0 > (psi~, psi~)_R, built from
    the T-eigenspaces: psi = U+ phi+ + U- phi-, psi~ = U+ phi+ - U- phi-.
    """
    tol = tol or Tolerance()
    r = as_matrix(r)
    values, vectors = hermitian_eigendecompose(mt.t_op, tol)
    u_plus, u_minus = vectors[:, values > 0], vectors[:, values < 0]
    block = adjoint(u_plus) @ r @ u_minus
    _, _, vh = np.linalg.svd(block)
    phi_minus = np.conj(vh[0])
    phi_plus = block @ phi_minus
    psi = u_plus @ phi_plus + u_minus @ phi_minus
    psi_tilde = u_plus @ phi_plus - u_minus @ phi_minus
    return psi / np.linalg.norm(psi), psi_tilde / np.linalg.norm(psi_tilde)


# ==================================================================
# Twisted unitaries
# ==================================================================

def is_twisted_unitary(r: ComplexMatrix, u: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    r, u = as_matrix(r), as_matrix(u)
    return max_norm(adjoint(u) @ r @ u - r) < tol.atol


def _real_linear_kernel(fn: Callable[[ComplexMatrix], ComplexMatrix], n: int, tol: Tolerance) -> list[ComplexMatrix]:
    """Kernel of an R-linear map on n x n matrices, as a real basis."""
    units = []
    for k in range(n * n):
        e = np.zeros(n * n, dtype=complex)
        e[k] = 1.0
        units.append(e.reshape(n, n))
    units += [1j * e for e in units]
    lhs = np.column_stack([real_vector(fn(e)) for e in units])
    kernel = nullspace(lhs, tol)
    return [sum(c * e for c, e in zip(kernel[:, k].real, units)) for k in range(kernel.shape[1])]


def unitary_algebra_basis(r: ComplexMatrix, tol: Tolerance | None = None) -> list[ComplexMatrix]:
    """Real basis of {X : X^dagger R + R X = 0}, the Lie algebra of twisted unitaries."""
    tol = tol or Tolerance()
    r = as_matrix(r)
    lam = smallest_singular_value(r)
    if lam <= tol.atol:
        raise SingularError(lam)
    return _real_linear_kernel(lambda x: adjoint(x) @ r + r @ x, r.shape[0], tol)


def twisted_unitary_algebra_dim(r: ComplexMatrix, tol: Tolerance | None = None) -> int:
    return len(unitary_algebra_basis(r, tol))


def twisted_unitary_from_algebra(x: ComplexMatrix, t: float = 1.0) -> ComplexMatrix:
    return sla.expm(t * as_matrix(x))


# ==================================================================
# Flip implementation and rho-unitarity
# ==================================================================

def flip_implementation_residual(mt: MinimalTwist, r: ComplexMatrix) -> float:
    """max over the doubled basis of |R pi'(d) R^-1 - pi'(rho(d))|."""
    r = as_matrix(r)
    r_inv = sla.inv(r)
    return max(max_norm(r @ p @ r_inv - pf) for p, pf in mt.basis_pairs)


def check_implements_flip(mt: MinimalTwist, r: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return flip_implementation_residual(mt, r) < tol.atol


def rho_unitarity_residual(mt: MinimalTwist, r: ComplexMatrix, tol: Tolerance | None = None) -> float:
    """
    rho realized as X -> R X R^-1: compares rho(pi'(d)^dagger) with
    (rho^-1(pi'(d)))^dagger = R^dagger pi'(d)^dagger (R^dagger)^-1.
    """
    tol = tol or Tolerance()
    r = as_matrix(r)
    lam = smallest_singular_value(r)
    if lam <= tol.atol:
        raise SingularError(lam)
    r_inv = sla.inv(r)
    r_dag = adjoint(r)
    r_dag_inv = adjoint(r_inv)
    return max(max_norm(r @ adjoint(p) @ r_inv - r_dag @ adjoint(p) @ r_dag_inv) for p, _ in mt.basis_pairs)


def check_rho_unitarity(mt: MinimalTwist, r: ComplexMatrix, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return rho_unitarity_residual(mt, r, tol) < tol.atol
