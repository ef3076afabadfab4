# src/services/clifford.py
"""
Clifford algebra in dimension four
----------------------------------
Euclidean gamma matrices in the chiral basis

    gamma^mu = [[0, sigma^mu], [sigma~^mu, 0]],
    sigma^mu = (I, -i sigma_j),  sigma~^mu = (I, i sigma_j)

with chirality gamma_M = diag(I2, -I2), their Lorentzian counterparts, the
fiber Krein operator, constant-coefficient forms on flat R^4 with orientation
dx^0 ^ dx^1 ^ dx^2 ^ dx^3, the Hodge star and the Clifford action.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from src.services.errors import UnsupportedError
from src.services.numerics import ComplexMatrix, anticommutator, identity, max_norm

log = logging.getLogger(__name__)

DIMENSION = 4

# gamma_M = CHIRALITY_PHASE * gamma^0 gamma^1 gamma^2 gamma^3 in this basis
CHIRALITY_PHASE = -1

# pinned Clifford weight of the dual 3-form; cancels the 1/(2m) of the torsion identity
DUAL_FORM_WEIGHT = 4

# negative directions of the Lorentzian metric, in the order they enter the Krein operator
LORENTZIAN_ORDER = (1, 2, 3, 0)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True, eq=False)
class GammaSet:
    gammas: tuple[ComplexMatrix, ...]
    chirality: ComplexMatrix
    pauli: tuple[ComplexMatrix, ...] = PAULI


def _chiral_gamma(sigma: ComplexMatrix, sigma_tilde: ComplexMatrix) -> ComplexMatrix:
    zero = np.zeros((2, 2), dtype=complex)
    return np.block([[zero, sigma], [sigma_tilde, zero]])


def build_gammas() -> GammaSet:
    eye = identity(2)
    gammas = [_chiral_gamma(eye, eye)]
    gammas += [_chiral_gamma(-1j * s, 1j * s) for s in PAULI]
    chirality = np.diag([1, 1, -1, -1]).astype(complex)
    product = gammas[0] @ gammas[1] @ gammas[2] @ gammas[3]
    if max_norm(chirality - CHIRALITY_PHASE * product) != 0.0:
        raise AssertionError("pinned chirality phase no longer matches the gamma product")
    return GammaSet(gammas=tuple(gammas), chirality=chirality)


def clifford_residual(gs: GammaSet) -> float:
    """max of the {gamma^mu, gamma^nu} = 2 delta I and chirality defects."""
    eye = identity(DIMENSION)
    worst = 0.0
    for mu, nu in itertools.product(range(DIMENSION), repeat=2):
        target = 2 * eye if mu == nu else 0 * eye
        worst = max(worst, max_norm(anticommutator(gs.gammas[mu], gs.gammas[nu]) - target))
    g = gs.chirality
    worst = max(worst, max_norm(g - g.conj().T), max_norm(g @ g - eye))
    return max([worst] + [max_norm(anticommutator(g, x)) for x in gs.gammas])


def lorentzian_gammas(gs: GammaSet) -> list[ComplexMatrix]:
    """gamma_L^0 = gamma^0, gamma_L^j = i gamma^j: signature (+, -, -, -)."""
    return [gs.gammas[0]] + [1j * x for x in gs.gammas[1:]]


MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


def krein_operator(n: int, k: int) -> ComplexMatrix:
    """
    i^{n(n-1)/2} gamma_L^{a_1} ... gamma_L^{a_k}, the first k negative
    directions taken in LORENTZIAN_ORDER. (4, 3) is the Lorentzian case.
    """
    if n != DIMENSION:
        raise UnsupportedError(f"Krein operator only implemented for n = {DIMENSION}, got {n}")
    if not 0 <= k <= n:
        raise UnsupportedError(f"k must lie in [0, {n}], got {k}")
    lg = lorentzian_gammas(build_gammas())
    out = (1j ** (n * (n - 1) // 2)) * identity(DIMENSION)
    for a in LORENTZIAN_ORDER[:k]:
        out = out @ lg[a]
    return out


def chiral_mixing_unitary() -> ComplexMatrix:
    """(1/sqrt 2) [[I, I], [-iI, iI]]: diagonalizes gamma^0 and the Krein operator alike."""
    eye = identity(2)
    return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2)


def krein_equivalence_witness() -> ComplexMatrix:
    """W with W gamma^0 W^dagger equal to the (4, 3) Krein operator."""
    u = chiral_mixing_unitary()
    return u @ u


# ==================================================================
# Constant forms
# ==================================================================

@dataclass(frozen=True)
class ConstantForm:
    degree: int
    coefficients: dict[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= DIMENSION:
            raise ValueError(f"degree must be in [0, {DIMENSION}]")
        for idx in self.coefficients:
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or any(not 0 <= i < DIMENSION for i in idx):
                raise ValueError(f"multi-index {idx} is not strictly increasing of length {self.degree}")

    def coefficient(self, idx: tuple[int, ...]) -> complex:
        return self.coefficients.get(tuple(idx), 0.0)

    def scale(self, z: complex) -> "ConstantForm":
        return ConstantForm(self.degree, {k: z * v for k, v in self.coefficients.items()})

    def max_abs(self) -> float:
        return max((abs(v) for v in self.coefficients.values()), default=0.0)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": {
                "".join(str(i) for i in k): [float(complex(v).real), float(complex(v).imag)]
                for k, v in sorted(self.coefficients.items())
            },
        }


def one_form(f) -> ConstantForm:
    return ConstantForm(1, {(mu,): complex(f[mu]) for mu in range(DIMENSION) if f[mu] != 0})


def monomials(degree: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(DIMENSION), degree))


def _permutation_sign(seq: tuple[int, ...]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def hodge_star(w: ConstantForm) -> ConstantForm:
    """*(dx^I) = sign(I, I^c) dx^{I^c}; ** = (-1)^{k(4-k)}."""
    out: dict[tuple[int, ...], complex] = {}
    for idx, c in w.coefficients.items():
        comp = tuple(i for i in range(DIMENSION) if i not in idx)
        out[comp] = out.get(comp, 0) + _permutation_sign(idx + comp) * c
    return ConstantForm(DIMENSION - w.degree, out)


def clifford_action(gs: GammaSet, w: ConstantForm, weight: float = 1.0) -> ComplexMatrix:
    """c(dx^{m1} ^ ... ^ dx^{mk}) = weight * gamma^{m1} ... gamma^{mk}, linearly extended."""
    out = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for idx, c in w.coefficients.items():
        m = identity(DIMENSION)
        for mu in idx:
            m = m @ gs.gammas[mu]
        out = out + c * m
    return weight * out


# ==================================================================
# Torsion
# ==================================================================

def torsion_fluctuation(gs: GammaSet, f) -> tuple[ComplexMatrix, ConstantForm]:
    """(-i f_mu gamma^mu gamma_M, -*(f_mu dx^mu)) for real f."""
    f = np.asarray(f, dtype=float)
    m = sum(-1j * f[mu] * gs.gammas[mu] @ gs.chirality for mu in range(DIMENSION))
    return m, hodge_star(one_form(f)).scale(-1)


def verify_clifford_identity(gs: GammaSet, f) -> float:
    """|-i f gamma gamma_M - ((-i)^{m+1} / 2m) c(*omega_f)| with m = 2 and the dual-form weight."""
    m_half = DIMENSION // 2
    lhs, _ = torsion_fluctuation(gs, f)
    dual = clifford_action(gs, hodge_star(one_form(f)), weight=DUAL_FORM_WEIGHT)
    rhs = ((-1j) ** (m_half + 1) / (2 * m_half)) * dual
    return max_norm(lhs - rhs)
