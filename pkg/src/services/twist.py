# src/services/twist.py
"""
Minimal twists
--------------
Given a triple (A, H, D) and a twisting operator T (selfadjoint involution,
not +-I, commuting with pi(A)), the doubled algebra A (x) C^2 acts on H by

    pi'(a1, a2) = p+ pi(a1) + p- pi(a2),   p+- = (I +- T) / 2

and the flip rho(a1, a2) = (a2, a1) twists commutators:

    [D, pi'(d)]_rho = D pi'(d) - pi'(rho(d)) D.

This module builds the twist and evaluates twisted one-forms, twisted
fluctuations, the twisted first-order condition and transparency.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from src.services.algebra import AlgebraElement, AlgebraSpec, algebra_basis, represent
from src.services.errors import (
    DimensionMismatchError,
    InvalidTwistOperatorError,
    NoGradingError,
    NotAOneFormError,
    NotFaithfulError,
    SpecMismatchError,
)
from src.services.numerics import (
    ComplexMatrix,
    Tolerance,
    adjoint,
    anticommutator,
    as_matrix,
    commutator,
    hermitian_residual,
    identity,
    max_norm,
    nullspace,
    numerical_rank,
    orthonormal_span,
    project_onto_span,
    real_span_rank,
    real_vector,
)
from src.services.report import ReportItem, ValidationReport
from src.services.triple import FiniteTriple, commutator_generators, conjugate_by_real, require_real

log = logging.getLogger(__name__)


# ==================================================================
# Types
# ==================================================================

@dataclass(frozen=True, eq=False)
class DoubledElement:
    first: AlgebraElement
    second: AlgebraElement

    def __post_init__(self):
        if self.first.spec != self.second.spec:
            raise SpecMismatchError("both halves of a doubled element must share one algebra")

    @property
    def spec(self) -> AlgebraSpec:
        return self.first.spec

    def flip(self) -> "DoubledElement":
        return DoubledElement(self.second, self.first)

    def __mul__(self, other: "DoubledElement") -> "DoubledElement":
        return DoubledElement(self.first * other.first, self.second * other.second)

    def star(self) -> "DoubledElement":
        return DoubledElement(self.first.star(), self.second.star())


def diagonal(x: AlgebraElement) -> DoubledElement:
    return DoubledElement(x, x)


def doubled_basis(spec: AlgebraSpec) -> list[DoubledElement]:
    basis = algebra_basis(spec)
    zero = basis[0].scale(0)
    return [DoubledElement(b, zero) for b in basis] + [DoubledElement(zero, b) for b in basis]


@dataclass(frozen=True, eq=False)
class MinimalTwist:
    base: FiniteTriple
    t_op: ComplexMatrix
    p_plus: ComplexMatrix
    p_minus: ComplexMatrix

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def dirac(self) -> ComplexMatrix:
        return self.base.dirac

    @cached_property
    def basis(self) -> list[DoubledElement]:
        return doubled_basis(self.base.rep.algebra)

    @cached_property
    def basis_pairs(self) -> list[tuple[ComplexMatrix, ComplexMatrix]]:
        """(pi'(d), pi'(rho(d))) for every doubled basis element d."""
        return [(doubled_represent(self, d), doubled_represent(self, d.flip())) for d in self.basis]


@dataclass(frozen=True, eq=False)
class TwistedOneFormSpace:
    basis: list[ComplexMatrix]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def residual(self, a: ComplexMatrix) -> float:
        return project_onto_span(self.basis, a)[1]


@dataclass(frozen=True, eq=False)
class Fluctuation:
    operator: ComplexMatrix
    hermitian_residual: float
    hermitian: bool


@dataclass(frozen=True, eq=False)
class SelfadjointFluctuations:
    basis: list[ComplexMatrix]
    image_dimension: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


# ==================================================================
# Building a twist
# ==================================================================

def twisting_operator_report(st: FiniteTriple, t: ComplexMatrix, tol: Tolerance | None = None) -> ValidationReport:
    tol = tol or Tolerance()
    atol = tol.atol
    n = st.dim
    eye = identity(n)
    scalar_gap = min(max_norm(t - eye), max_norm(t + eye))
    items = [
        ReportItem.from_residual("twist_selfadjoint", hermitian_residual(t), atol, "T = T^dagger"),
        ReportItem.from_residual("twist_involution", max_norm(t @ t - eye), atol, "T^2 = I"),
        ReportItem.flag("twist_not_scalar", scalar_gap > atol, scalar_gap, "T != +-I"),
        ReportItem.from_residual(
            "twist_commutes_algebra",
            max((max_norm(commutator(t, a)) for a in st.basis_matrices), default=0.0),
            atol,
            "[T, pi(a)] = 0",
        ),
    ]
    if st.symbol:
        items.append(
            ReportItem.from_residual(
                "twist_anticommutes_symbol",
                max(max_norm(anticommutator(t, s)) for s in st.symbol),
                atol,
                "bounded twisted commutators",
            )
        )
    return ValidationReport(items=items)


def doubled_faithful(mt: MinimalTwist, tol: Tolerance | None = None) -> bool:
    mats = [p for p, _ in mt.basis_pairs]
    return real_span_rank(mats, tol) == len(mats)


def build_minimal_twist(st: FiniteTriple, t: ComplexMatrix, tol: Tolerance | None = None) -> MinimalTwist:
    tol = tol or Tolerance()
    t = as_matrix(t)
    if t.shape != (st.dim, st.dim):
        raise DimensionMismatchError(f"twisting operator must be {st.dim}x{st.dim}, got {t.shape}")
    report = twisting_operator_report(st, t, tol)
    for item in report.items:
        if not item.passed:
            raise InvalidTwistOperatorError(item.name, item.residual)

    eye = identity(st.dim)
    mt = MinimalTwist(base=st, t_op=t, p_plus=(eye + t) / 2, p_minus=(eye - t) / 2)
    if not doubled_faithful(mt, tol):
        raise NotFaithfulError("doubled representation is not faithful")
    log.debug("minimal twist built: dim %d, rank p+ %d", st.dim, numerical_rank(mt.p_plus))
    return mt


def grading_as_twist(st: FiniteTriple) -> ComplexMatrix:
    if st.grading is None:
        raise NoGradingError()
    return st.grading


def doubled_represent(mt: MinimalTwist, d: DoubledElement) -> ComplexMatrix:
    rep = mt.base.rep
    if d.spec != rep.algebra:
        raise SpecMismatchError("doubled element does not match the twisted algebra")
    return mt.p_plus @ represent(rep, d.first) + mt.p_minus @ represent(rep, d.second)


# ==================================================================
# Twisted commutators
# ==================================================================

def twisted_commutator(
    mt: MinimalTwist, d: DoubledElement, gradient: Sequence[DoubledElement] | None = None
) -> ComplexMatrix:
    """
    D pi'(d) - pi'(rho(d)) D, plus sum_mu S_mu pi'(d_mu d) when a gradient is
    supplied for a triple with a first-order symbol.
    """
    out = mt.dirac @ doubled_represent(mt, d) - doubled_represent(mt, d.flip()) @ mt.dirac
    if gradient is not None:
        symbol = mt.base.symbol
        if len(gradient) != len(symbol):
            raise DimensionMismatchError(f"gradient has {len(gradient)} entries, symbol has {len(symbol)}")
        for s, g in zip(symbol, gradient):
            out = out + s @ doubled_represent(mt, g)
    return out


def twisted_commutator_generators(mt: MinimalTwist) -> list[ComplexMatrix]:
    gens = [mt.dirac @ p - pf @ mt.dirac for p, pf in mt.basis_pairs]
    for s in mt.base.symbol:
        gens.extend(s @ p for p, _ in mt.basis_pairs)
    return gens


def twisted_leibniz_residual(mt: MinimalTwist, d: DoubledElement, e: DoubledElement) -> float:
    lhs = twisted_commutator(mt, d * e)
    rhs = twisted_commutator(mt, d) @ doubled_represent(mt, e) + doubled_represent(mt, d.flip()) @ twisted_commutator(
        mt, e
    )
    return max_norm(lhs - rhs)


def twisted_first_order_residual(mt: MinimalTwist) -> float:
    """
    max over generators X and doubled basis b of
    X J pi'(b) J^-1 - J pi'(rho(b)) J^-1 X.
    """
    require_real(mt.base)
    opp = [(conjugate_by_real(mt.base, p), conjugate_by_real(mt.base, pf)) for p, pf in mt.basis_pairs]
    worst = 0.0
    for x, (y, y_flip) in itertools.product(twisted_commutator_generators(mt), opp):
        worst = max(worst, max_norm(x @ y - y_flip @ x))
    return worst


def check_twisted_first_order(mt: MinimalTwist, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return twisted_first_order_residual(mt) < tol.atol


# ==================================================================
# One-forms and fluctuations
# ==================================================================

def twisted_one_form_space(mt: MinimalTwist, tol: Tolerance | None = None) -> TwistedOneFormSpace:
    """Orthonormal basis of span{pi'(a) [D, pi'(b)]_rho}."""
    left = [p for p, _ in mt.basis_pairs]
    products = [a @ x for a in left for x in twisted_commutator_generators(mt)]
    space = TwistedOneFormSpace(orthonormal_span(products, tol))
    log.debug("twisted one-forms: dimension %d from %d products", space.dimension, len(products))
    return space


def one_form_space(st: FiniteTriple, tol: Tolerance | None = None) -> TwistedOneFormSpace:
    """Untwisted counterpart: span{pi(a) [D, pi(b)]}."""
    products = [a @ x for a in st.basis_matrices for x in commutator_generators(st)]
    return TwistedOneFormSpace(orthonormal_span(products, tol))


def _fluctuate(st: FiniteTriple, space: TwistedOneFormSpace, a: ComplexMatrix, tol: Tolerance) -> Fluctuation:
    require_real(st)
    a = as_matrix(a)
    if a.shape != (st.dim, st.dim):
        raise DimensionMismatchError(f"one-form must be {st.dim}x{st.dim}, got {a.shape}")
    residual = space.residual(a)
    if residual > tol.atol:
        raise NotAOneFormError(residual)
    op = st.dirac + a + conjugate_by_real(st, a)
    h = hermitian_residual(op)
    return Fluctuation(operator=op, hermitian_residual=h, hermitian=h < tol.atol)


def twisted_fluctuate(mt: MinimalTwist, a: ComplexMatrix, tol: Tolerance | None = None) -> Fluctuation:
    tol = tol or Tolerance()
    return _fluctuate(mt.base, twisted_one_form_space(mt, tol), a, tol)


def fluctuate(st: FiniteTriple, a: ComplexMatrix, tol: Tolerance | None = None) -> Fluctuation:
    tol = tol or Tolerance()
    return _fluctuate(st, one_form_space(st, tol), a, tol)


def selfadjoint_fluctuation_space(
    mt: MinimalTwist, tol: Tolerance | None = None, twisted: bool = True
) -> SelfadjointFluctuations:
    """
    Real basis of the one-forms A with D + A + JAJ^-1 Hermitian.

    D is Hermitian, so the constraint is the real-linear equation
    F - F^dagger = 0 with F = A + JAJ^-1.
    """
    tol = tol or Tolerance()
    st = mt.base
    require_real(st)
    space = twisted_one_form_space(mt, tol) if twisted else one_form_space(st, tol)
    real_basis = [b for b in space.basis] + [1j * b for b in space.basis]
    if not real_basis:
        return SelfadjointFluctuations(basis=[], image_dimension=0)

    def defect(x: ComplexMatrix) -> ComplexMatrix:
        f = x + conjugate_by_real(st, x)
        return f - adjoint(f)

    lhs = np.column_stack([real_vector(defect(x)) for x in real_basis])
    kernel = nullspace(lhs, tol)
    solutions = [sum(c * x for c, x in zip(kernel[:, k].real, real_basis)) for k in range(kernel.shape[1])]
    image = [a + conjugate_by_real(st, a) for a in solutions]
    out = SelfadjointFluctuations(basis=solutions, image_dimension=real_span_rank(image, tol))
    log.debug(
        "selfadjoint fluctuations (%s): dimension %d, image %d",
        "twisted" if twisted else "untwisted",
        out.dimension,
        out.image_dimension,
    )
    return out


def in_real_span(mats: Sequence[ComplexMatrix], m: ComplexMatrix) -> float:
    """Least-squares residual of m against the real span of mats."""
    if not mats:
        return max_norm(m)
    cols = np.column_stack([real_vector(x) for x in mats])
    target = real_vector(m)
    coeffs, *_ = np.linalg.lstsq(cols, target, rcond=None)
    return max_norm(cols @ coeffs - target)


# ==================================================================
# Transparency
# ==================================================================

def transparency_residual(mt: MinimalTwist, m: ComplexMatrix, twisted: bool) -> float:
    m = as_matrix(m)
    if twisted:
        return max((max_norm(m @ p - pf @ m) for p, pf in mt.basis_pairs), default=0.0)
    return max((max_norm(commutator(m, a)) for a in mt.base.basis_matrices), default=0.0)


def check_transparency(mt: MinimalTwist, m: ComplexMatrix, twisted: bool, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance()
    return transparency_residual(mt, m, twisted) < tol.atol
