# src/services/algebra.py
"""
Finite-dimensional *-algebras
-----------------------------
An algebra is an ordered direct sum of summands:
  - "C"     complex numbers (1x1)
  - "H"     quaternions, realized in M2(C) as [[a, b], [-conj(b), conj(a)]]
  - "M(n)"  full complex n x n matrices

A Representation lists blocks (summand_index, multiplicity, conjugated);
block k contributes I_m (x) pi_s(x) to a block-diagonal matrix.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.services.errors import SchemaError, SpecMismatchError
from src.services.numerics import (
    ComplexMatrix,
    adjoint,
    as_matrix,
    direct_sum,
    identity,
    kron,
    max_norm,
    numerical_rank,
)

log = logging.getLogger(__name__)

_FULL_MATRIX = re.compile(r"^M\((\d+)\)$")


# ==================================================================
# Types
# ==================================================================

@dataclass(frozen=True)
class Summand:
    kind: str  # "C" | "H" | "M"
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("C", "H", "M"):
            raise SchemaError(f"unknown summand kind {self.kind!r}")
        if self.n < 1:
            raise SchemaError(f"matrix summand needs n >= 1, got {self.n}")

    @property
    def size(self) -> int:
        """Side length of the matrices carrying this summand."""
        return {"C": 1, "H": 2}.get(self.kind, self.n)

    @property
    def label(self) -> str:
        return f"M({self.n})" if self.kind == "M" else self.kind

    @classmethod
    def parse(cls, label: str) -> "Summand":
        if label in ("C", "H"):
            return cls(label)
        m = _FULL_MATRIX.match(label)
        if not m:
            raise SchemaError(f"unknown summand {label!r}; expected C, H or M(n)")
        return cls("M", int(m.group(1)))


COMPLEX = Summand("C")
QUATERNION = Summand("H")


def full_matrix(n: int) -> Summand:
    return Summand("M", n)


@dataclass(frozen=True)
class AlgebraSpec:
    summands: tuple[Summand, ...]

    def __post_init__(self):
        if not self.summands:
            raise SchemaError("an algebra needs at least one summand")

    @classmethod
    def of(cls, *labels: str) -> "AlgebraSpec":
        return cls(tuple(Summand.parse(x) for x in labels))

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.summands]


def quaternion(alpha: complex, beta: complex) -> ComplexMatrix:
    return np.array([[alpha, beta], [-np.conj(beta), np.conj(alpha)]], dtype=complex)


def quaternion_residual(q: ComplexMatrix) -> float:
    return max(abs(q[0, 0] - np.conj(q[1, 1])), abs(q[0, 1] + np.conj(q[1, 0])))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    spec: AlgebraSpec
    components: tuple[ComplexMatrix, ...]

    def __post_init__(self):
        if len(self.components) != len(self.spec.summands):
            raise SpecMismatchError(
                f"element has {len(self.components)} components, algebra has {len(self.spec.summands)}"
            )
        for s, c in zip(self.spec.summands, self.components):
            if c.shape != (s.size, s.size):
                raise SpecMismatchError(f"component for {s.label} has shape {c.shape}")

    def _check(self, other: "AlgebraElement") -> None:
        if other.spec != self.spec:
            raise SpecMismatchError("elements belong to different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, tuple(a + b for a, b in zip(self.components, other.components)))

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, tuple(a @ b for a, b in zip(self.components, other.components)))

    def scale(self, z: complex) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(z * c for c in self.components))

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(adjoint(c) for c in self.components))

    def quaternion_residual(self) -> float:
        return max(
            [quaternion_residual(c) for s, c in zip(self.spec.summands, self.components) if s.kind == "H"],
            default=0.0,
        )


def element(spec: AlgebraSpec, *components) -> AlgebraElement:
    """Build an element; scalars are promoted to multiples of the identity."""
    comps = []
    for s, c in zip(spec.summands, components):
        arr = np.asarray(c, dtype=complex)
        comps.append(arr * identity(s.size) if arr.ndim == 0 else as_matrix(arr))
    return AlgebraElement(spec, tuple(comps))


def unit(spec: AlgebraSpec) -> AlgebraElement:
    return element(spec, *([1.0] * len(spec.summands)))


@dataclass(frozen=True)
class Block:
    summand_index: int
    multiplicity: int = 1
    conjugated: bool = False


@dataclass(frozen=True)
class Representation:
    algebra: AlgebraSpec
    blocks: tuple[Block, ...]

    def __post_init__(self):
        for b in self.blocks:
            if not 0 <= b.summand_index < len(self.algebra.summands):
                raise SchemaError(f"block refers to missing summand {b.summand_index}")
            if b.multiplicity < 1:
                raise SchemaError(f"block multiplicity must be >= 1, got {b.multiplicity}")

    @classmethod
    def of(cls, algebra: AlgebraSpec, *blocks) -> "Representation":
        return cls(algebra, tuple(Block(*b) for b in blocks))

    @property
    def total_dim(self) -> int:
        return sum(b.multiplicity * self.algebra.summands[b.summand_index].size for b in self.blocks)

    @cached_property
    def basis_matrices(self) -> list[ComplexMatrix]:
        return [represent(self, x) for x in algebra_basis(self.algebra)]


# ==================================================================
# Operations
# ==================================================================

def represent(rep: Representation, x: AlgebraElement) -> ComplexMatrix:
    if x.spec != rep.algebra:
        raise SpecMismatchError(
            f"element of {x.spec.labels} cannot act through a representation of {rep.algebra.labels}"
        )
    parts = []
    for b in rep.blocks:
        comp = x.components[b.summand_index]
        if b.conjugated:
            comp = np.conj(comp)
        parts.append(kron(identity(b.multiplicity), comp))
    return direct_sum(*parts)


def _matrix_units(n: int) -> list[ComplexMatrix]:
    units = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            units.append(e)
    return units


def _summand_basis(s: Summand) -> list[ComplexMatrix]:
    if s.kind == "C":
        return [identity(1), 1j * identity(1)]
    if s.kind == "H":
        return [quaternion(1, 0), quaternion(1j, 0), quaternion(0, 1), quaternion(0, 1j)]
    units = _matrix_units(s.n)
    return units + [1j * e for e in units]


def algebra_basis(spec: AlgebraSpec) -> list[AlgebraElement]:
    """Basis of the algebra as a real vector space, summand by summand."""
    out = []
    for k, s in enumerate(spec.summands):
        zeros = [np.zeros((t.size, t.size), dtype=complex) for t in spec.summands]
        for b in _summand_basis(s):
            comps = list(zeros)
            comps[k] = b
            out.append(AlgebraElement(spec, tuple(comps)))
    return out


def check_faithful(rep: Representation) -> bool:
    """True iff x -> represent(x) is injective on the real span of the basis."""
    mats = rep.basis_matrices
    stacked = np.column_stack([np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in mats])
    rank = numerical_rank(stacked)
    log.debug("faithfulness: rank %d of %d", rank, len(mats))
    return rank == len(mats)


def random_element(spec: AlgebraSpec, seed: int | np.random.Generator) -> AlgebraElement:
    """Entries uniform in [-1, 1] + i[-1, 1]; deterministic for a fixed seed."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    comps = []
    for s in spec.summands:
        if s.kind == "H":
            a, b = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2)
            comps.append(quaternion(a, b))
        else:
            n = s.size
            comps.append(rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))
    return AlgebraElement(spec, tuple(comps))


def homomorphism_residual(rep: Representation, x: AlgebraElement, y: AlgebraElement) -> float:
    """max of the multiplicativity and *-compatibility defects on one pair."""
    px, py = represent(rep, x), represent(rep, y)
    return max(
        max_norm(represent(rep, x * y) - px @ py),
        max_norm(represent(rep, x.star()) - adjoint(px)),
    )
