# src/services/triple.py
"""
Finite spectral triples
-----------------------
FiniteTriple = representation + Dirac matrix + optional grading + optional
real structure J (stored as j_matrix with J psi = j_matrix @ conj(psi)).

A triple may also carry a first-order symbol (S_0, ..., S_{n-1}): the
coefficients of the derivative part sum_mu S_mu d_mu of a Dirac operator
acting on 1-jets at one fiber. Commutators with an element whose gradient is
d_mu a then pick up sum_mu S_mu pi(d_mu a).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from src.config import settings
from src.services.algebra import Representation, homomorphism_residual, random_element
from src.services.errors import NoRealStructureError, NonSquareError
from src.services.numerics import (
    ComplexMatrix,
    Tolerance,
    adjoint,
    anticommutator,
    commutator,
    hermitian_residual,
    identity,
    max_norm,
)
from src.services.report import ReportItem, ValidationReport, collect_items

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RealStructure:
    j_matrix: ComplexMatrix
    eps: int
    eps_prime: int
    eps_second: int

    def __post_init__(self):
        for name in ("eps", "eps_prime", "eps_second"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")

    @property
    def signs(self) -> tuple[int, int, int]:
        return (self.eps, self.eps_prime, self.eps_second)


@dataclass(frozen=True, eq=False)
class FiniteTriple:
    rep: Representation
    dirac: ComplexMatrix
    grading: ComplexMatrix | None = None
    real: RealStructure | None = None
    symbol: tuple[ComplexMatrix, ...] = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        return self.rep.total_dim

    @cached_property
    def basis_matrices(self) -> list[ComplexMatrix]:
        return self.rep.basis_matrices


def require_real(st: FiniteTriple) -> RealStructure:
    if st.real is None:
        raise NoRealStructureError()
    return st.real


def conjugate_by_real(st: FiniteTriple, m: ComplexMatrix) -> ComplexMatrix:
    """J M J^-1 = j conj(M) j^dagger."""
    real = require_real(st)
    m = np.asarray(m, dtype=complex)
    if m.shape != (st.dim, st.dim):
        raise NonSquareError(f"expected a {st.dim}x{st.dim} operator, got {m.shape}")
    j = real.j_matrix
    return j @ np.conj(m) @ adjoint(j)


def commutator_generators(st: FiniteTriple) -> list[ComplexMatrix]:
    """[D, pi(a)] over the basis, followed by the gradient terms S_mu pi(e)."""
    gens = [commutator(st.dirac, a) for a in st.basis_matrices]
    for s in st.symbol:
        gens.extend(s @ e for e in st.basis_matrices)
    return gens


# ==================================================================
# Order conditions
# ==================================================================

def order_zero_residual(st: FiniteTriple) -> float:
    require_real(st)
    opp = [conjugate_by_real(st, b) for b in st.basis_matrices]
    return max(
        (max_norm(commutator(a, b)) for a, b in itertools.product(st.basis_matrices, opp)),
        default=0.0,
    )


def check_order_zero(st: FiniteTriple, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return order_zero_residual(st) < tol.atol


def first_order_residual(st: FiniteTriple) -> float:
    require_real(st)
    opp = [conjugate_by_real(st, b) for b in st.basis_matrices]
    return max(
        (max_norm(commutator(x, y)) for x, y in itertools.product(commutator_generators(st), opp)),
        default=0.0,
    )


def check_first_order(st: FiniteTriple, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return first_order_residual(st) < tol.atol


# ==================================================================
# Axiom battery
# ==================================================================

def _grading_items(st: FiniteTriple, atol: float) -> list[ReportItem]:
    g = st.grading
    return [
        ReportItem.from_residual("grading_selfadjoint", hermitian_residual(g), atol, "grading"),
        ReportItem.from_residual("grading_involution", max_norm(g @ g - identity(st.dim)), atol, "grading"),
        ReportItem.from_residual(
            "grading_anticommutes_dirac", max_norm(anticommutator(g, st.dirac)), atol, "grading"
        ),
        ReportItem.from_residual(
            "grading_commutes_algebra",
            max((max_norm(commutator(g, a)) for a in st.basis_matrices), default=0.0),
            atol,
            "grading",
        ),
    ]


def _symbol_items(st: FiniteTriple, atol: float) -> list[ReportItem]:
    items = [
        ReportItem.from_residual(
            "symbol_skew_adjoint", max(max_norm(s + adjoint(s)) for s in st.symbol), atol, "first-order symbol"
        ),
        ReportItem.from_residual(
            "symbol_commutes_algebra",
            max(max_norm(commutator(s, a)) for s in st.symbol for a in st.basis_matrices),
            atol,
            "first-order symbol",
        ),
    ]
    if st.grading is not None:
        items.append(
            ReportItem.from_residual(
                "symbol_anticommutes_grading",
                max(max_norm(anticommutator(s, st.grading)) for s in st.symbol),
                atol,
                "first-order symbol",
            )
        )
    return items


def _real_items(st: FiniteTriple, atol: float) -> list[ReportItem]:
    real = st.real
    j = real.j_matrix
    n = st.dim
    items = [
        ReportItem.from_residual("real_antiunitary", max_norm(adjoint(j) @ j - identity(n)), atol, "real structure"),
        ReportItem.from_residual(
            "real_square_eps", max_norm(j @ np.conj(j) - real.eps * identity(n)), atol, "J^2 = eps"
        ),
        ReportItem.from_residual(
            "real_dirac_eps_prime",
            max_norm(j @ np.conj(st.dirac) - real.eps_prime * st.dirac @ j),
            atol,
            "JD = eps' DJ",
        ),
    ]
    if st.symbol:
        # J commutes with d_mu, so each S_mu obeys the same sign as D
        items.append(
            ReportItem.from_residual(
                "real_symbol_eps_prime",
                max(max_norm(j @ np.conj(s) - real.eps_prime * s @ j) for s in st.symbol),
                atol,
                "JD = eps' DJ",
            )
        )
    if st.grading is not None:
        items.append(
            ReportItem.from_residual(
                "real_grading_eps_second",
                max_norm(j @ np.conj(st.grading) - real.eps_second * st.grading @ j),
                atol,
                "J gamma = eps'' gamma J",
            )
        )
    return items


def _homomorphism_item(st: FiniteTriple, atol: float, samples: int = 8) -> ReportItem:
    rng = np.random.default_rng(settings.SEED)
    spec = st.rep.algebra
    worst = max(
        homomorphism_residual(st.rep, random_element(spec, rng), random_element(spec, rng)) for _ in range(samples)
    )
    return ReportItem.from_residual("representation_homomorphism", worst, atol, "*-representation")


def validate_triple(st: FiniteTriple, tol: Tolerance | None = None) -> ValidationReport:
    """Run the axiom battery; failures are report items, never exceptions."""
    tol = tol or Tolerance()
    atol = tol.atol
    n = st.dim
    d = np.asarray(st.dirac)
    if d.shape != (n, n):
        return ValidationReport(
            items=[ReportItem.flag("dirac_shape", False, abs(d.shape[0] - n) + abs(d.shape[-1] - n))]
        )

    checks = [
        lambda: ReportItem.from_residual("dirac_selfadjoint", hermitian_residual(d), atol, "D = D^dagger"),
        lambda: _homomorphism_item(st, atol),
    ]
    if st.grading is not None:
        checks.append(lambda: _grading_items(st, atol))
    if st.symbol:
        checks.append(lambda: _symbol_items(st, atol))
    if st.real is not None:
        checks.append(lambda: _real_items(st, atol))
        checks.append(
            lambda: ReportItem.from_residual("order_zero", order_zero_residual(st), atol, "[a, JbJ^-1] = 0")
        )
        checks.append(
            lambda: ReportItem.from_residual(
                "first_order", first_order_residual(st), atol, "[[D, a], JbJ^-1] = 0"
            )
        )
    report = ValidationReport(items=collect_items(checks))
    if not report.ok:
        log.info("triple validation failed: %s", ", ".join(report.failed()))
    return report
