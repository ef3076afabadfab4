# src/services/models.py
"""
Built-in models and the JSON model format
-----------------------------------------
Almost-commutative fibers are laid out finite index outermost:
H = H_F (x) C^4, so an operator F (x) S is kron(F, S).

Built-ins:
  - manifold fiber:   C acting on Dirac spinors, twisted by chirality
  - electrodynamics:  C + C on C^4_F (x) C^4, twisted by the grading
  - c-on-c3, c-m2-on-c10: representation-only counterexamples to expandability
  - sm-structural:    reduced lepton fiber with a Majorana block
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from src.services.algebra import AlgebraSpec, Block, Representation, Summand
from src.services.clifford import build_gammas
from src.services.errors import InvalidMassError, MatrixShapeError, SchemaError
from src.services.numerics import ComplexMatrix, direct_sum, identity, kron, matrix_from_json, matrix_to_json
from src.services.triple import FiniteTriple, RealStructure

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class ModelDescriptor:
    name: str
    triple: FiniteTriple
    twist_operator: ComplexMatrix | None = None
    notes: tuple[str, ...] = ()
    # named implementer candidates for the krein stage
    preferences: dict[str, ComplexMatrix] = field(default_factory=dict)
    # named operator blocks to test for transparency
    blocks: dict[str, ComplexMatrix] = field(default_factory=dict)


# ==================================================================
# Spinor building blocks
# ==================================================================

def charge_conjugation() -> ComplexMatrix:
    """gamma^0 gamma^2: real, unitary, squares to -I, commutes with gamma_M."""
    g = build_gammas().gammas
    return g[0] @ g[2]


def dirac_symbol(outer: int = 1) -> tuple[ComplexMatrix, ...]:
    """S_mu = I_outer (x) (-i gamma^mu), the symbol of -i gamma^mu d_mu."""
    return tuple(kron(identity(outer), -1j * g) for g in build_gammas().gammas)


def _unit(n: int, i: int, j: int) -> ComplexMatrix:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


# ==================================================================
# Built-ins
# ==================================================================

def manifold_fiber_twist() -> ModelDescriptor:
    gs = build_gammas()
    algebra = AlgebraSpec.of("C")
    triple = FiniteTriple(
        rep=Representation.of(algebra, (0, 4)),
        dirac=np.zeros((4, 4), dtype=complex),
        grading=gs.chirality,
        real=RealStructure(charge_conjugation(), eps=-1, eps_prime=1, eps_second=1),
        symbol=dirac_symbol(),
    )
    return ModelDescriptor(
        name="manifold-fiber",
        triple=triple,
        twist_operator=gs.chirality,
        notes=(
            "fiber of C^infty(M) acting as f I4 on Dirac spinors",
            "Dirac operator -i gamma^mu d_mu carried by its first-order symbol on 1-jets; bounded part 0",
            "twist by the chirality gamma_M; doubled algebra acts as diag(f I2, g I2)",
            "real structure gamma^0 gamma^2 composed with complex conjugation",
        ),
        preferences={f"gamma{mu}": g for mu, g in enumerate(gs.gammas)},
    )


def electrodynamics_twist(mass: complex = 0.8 + 0.3j) -> ModelDescriptor:
    gs = build_gammas()
    d = complex(mass)
    gamma_f = np.diag([1, -1, -1, 1]).astype(complex)
    d_f = np.array(
        [[0, d, 0, 0], [np.conj(d), 0, 0, 0], [0, 0, 0, np.conj(d)], [0, 0, d, 0]],
        dtype=complex,
    )
    j_f = np.block([[np.zeros((2, 2)), identity(2)], [identity(2), np.zeros((2, 2))]]).astype(complex)
    algebra = AlgebraSpec.of("C", "C")
    grading = kron(gamma_f, gs.chirality)
    triple = FiniteTriple(
        rep=Representation.of(algebra, (0, 8), (1, 8)),
        dirac=kron(d_f, gs.chirality),
        grading=grading,
        real=RealStructure(kron(j_f, charge_conjugation()), eps=-1, eps_prime=1, eps_second=-1),
        symbol=dirac_symbol(4),
    )
    return ModelDescriptor(
        name="electrodynamics",
        triple=triple,
        twist_operator=grading,
        notes=(
            "C + C acting as diag(f I8, g I8) on C^4_F (x) C^4",
            "finite Dirac block with one complex Dirac mass, anticommuting with gamma_F = diag(1, -1, -1, 1)",
            "grading gamma_F (x) gamma_M, used as twisting operator",
            "real structure: particle/antiparticle swap composed with spinor charge conjugation; signs (-1, +1, -1)",
        ),
        preferences={"gamma0": kron(identity(4), gs.gammas[0])},
    )


def toy_c_on_c3() -> ModelDescriptor:
    algebra = AlgebraSpec.of("C")
    triple = FiniteTriple(rep=Representation.of(algebra, (0, 3)), dirac=np.zeros((3, 3), dtype=complex))
    return ModelDescriptor(
        name="c-on-c3",
        triple=triple,
        twist_operator=np.diag([1, -1, -1]).astype(complex),
        notes=("C acting diagonally on C^3, twisted by diag(1, -1, -1)",),
    )


def toy_c_m2_on_c10() -> ModelDescriptor:
    algebra = AlgebraSpec.of("C", "M(2)")
    t = np.diag([1, 1, 1, 1, 1, -1, -1, -1, -1, -1]).astype(complex)
    triple = FiniteTriple(
        rep=Representation.of(algebra, (1, 1), (0, 3), (1, 2), (0, 1)),
        dirac=np.zeros((10, 10), dtype=complex),
    )
    return ModelDescriptor(
        name="c-m2-on-c10",
        triple=triple,
        twist_operator=t,
        notes=(
            "C + M2(C) acting as diag(m, c, c, c, m, m, c) on C^10",
            "T = diag(I2, 1, 1, 1, -I2, -I2, -1): balanced eigenspaces, unbalanced traces",
        ),
    )


# basis of H_F: nu_R, nu_L, e_R, e_L, then the conjugates in the same order
SM_GRADING = (-1, 1, -1, 1, 1, -1, 1, -1)
SM_TWIST = (-1, 1, -1, 1, -1, 1, -1, 1)


def sm_majorana_block(k_m: float) -> ComplexMatrix:
    """D_M: the single entry k_M linking nu_R to its conjugate."""
    return k_m * (_unit(8, 0, 4) + _unit(8, 4, 0))


def sm_structural_fiber(k_m: float = 1.0, m_nu: float = 0.3, m_e: float = 0.5) -> ModelDescriptor:
    if k_m == 0:
        raise InvalidMassError("the Majorana mass k_M must be non-zero")
    gs = build_gammas()
    g_m = gs.chirality

    yukawa = np.zeros((4, 4), dtype=complex)
    yukawa[0, 1] = yukawa[1, 0] = m_nu
    yukawa[2, 3] = yukawa[3, 2] = m_e
    d_0 = direct_sum(yukawa, np.conj(yukawa))
    d_m = sm_majorana_block(k_m)
    j_f = np.block([[np.zeros((4, 4)), identity(4)], [identity(4), np.zeros((4, 4))]]).astype(complex)

    algebra = AlgebraSpec.of("C", "C")
    # lambda on right particles and every antiparticle, q on left particles
    rep = Representation.of(algebra, (0, 4), (1, 4), (0, 4), (1, 4), (0, 16))
    triple = FiniteTriple(
        rep=rep,
        dirac=kron(d_0 + d_m, g_m),
        grading=kron(np.diag(SM_GRADING).astype(complex), g_m),
        real=RealStructure(kron(j_f, charge_conjugation()), eps=-1, eps_prime=1, eps_second=-1),
        symbol=dirac_symbol(8),
    )
    return ModelDescriptor(
        name="sm-structural",
        triple=triple,
        twist_operator=kron(np.diag(SM_TWIST).astype(complex), g_m),
        notes=(
            "one-generation lepton fiber nu_R, nu_L, e_R, e_L and conjugates, tensored with Dirac spinors",
            "C + C stands in for C + H: lambda on right particles and antiparticles, q on left particles",
            "D_F = D_0 (Dirac masses) + D_M (Majorana mass k_M between nu_R and its conjugate)",
            "inline twist T_F: +1 on left particles and antiparticles, -1 on right",
        ),
        blocks={"majorana": kron(d_m, g_m)},
    )


# ==================================================================
# JSON format
# ==================================================================

Matrix = list[list[list[float]]]


class RealDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    j_matrix: Matrix
    eps: Literal[1, -1]
    eps_prime: Literal[1, -1]
    eps_second: Literal[1, -1]


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    name: str
    algebra: list[str]
    representation: list[tuple[int, int, bool]]
    dirac: Matrix
    grading: Optional[Matrix] = None
    real: Optional[RealDocument] = None
    symbol: list[Matrix] = []
    twist_operator: Optional[Matrix] = None
    notes: list[str] = []
    preferences: dict[str, Matrix] = {}
    blocks: dict[str, Matrix] = {}


def _square(rows, n: int, path: str) -> ComplexMatrix:
    m = matrix_from_json(rows, path)
    if m.shape != (n, n):
        raise MatrixShapeError(f"expected {n}x{n}, got {m.shape[0]}x{m.shape[1]}", path)
    return m


def _error_path(err: ValidationError) -> str:
    loc = err.errors()[0]["loc"] if err.errors() else ()
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in loc)


def load_model(document: str | bytes | dict[str, Any]) -> ModelDescriptor:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e.msg}") from e
    try:
        doc = ModelDocument.model_validate(document)
    except ValidationError as e:
        raise SchemaError(e.errors()[0]["msg"], _error_path(e)) from e

    algebra = AlgebraSpec(tuple(Summand.parse(s) for s in doc.algebra))
    rep = Representation(algebra, tuple(Block(*b) for b in doc.representation))
    n = rep.total_dim
    real = None
    if doc.real is not None:
        real = RealStructure(
            _square(doc.real.j_matrix, n, "$.real.j_matrix"),
            doc.real.eps,
            doc.real.eps_prime,
            doc.real.eps_second,
        )
    triple = FiniteTriple(
        rep=rep,
        dirac=_square(doc.dirac, n, "$.dirac"),
        grading=None if doc.grading is None else _square(doc.grading, n, "$.grading"),
        real=real,
        symbol=tuple(_square(s, n, f"$.symbol[{i}]") for i, s in enumerate(doc.symbol)),
    )
    return ModelDescriptor(
        name=doc.name,
        triple=triple,
        twist_operator=None if doc.twist_operator is None else _square(doc.twist_operator, n, "$.twist_operator"),
        notes=tuple(doc.notes),
        preferences={k: _square(v, n, f"$.preferences.{k}") for k, v in doc.preferences.items()},
        blocks={k: _square(v, n, f"$.blocks.{k}") for k, v in doc.blocks.items()},
    )


def load_model_file(path: str | Path) -> ModelDescriptor:
    text = Path(path).read_text(encoding="utf-8")
    md = load_model(text)
    log.debug("loaded model %s from %s", md.name, path)
    return md


def to_document(md: ModelDescriptor) -> ModelDocument:
    st = md.triple
    real = None
    if st.real is not None:
        real = RealDocument(
            j_matrix=matrix_to_json(st.real.j_matrix),
            eps=st.real.eps,
            eps_prime=st.real.eps_prime,
            eps_second=st.real.eps_second,
        )
    return ModelDocument(
        name=md.name,
        algebra=st.rep.algebra.labels,
        representation=[(b.summand_index, b.multiplicity, b.conjugated) for b in st.rep.blocks],
        dirac=matrix_to_json(st.dirac),
        grading=None if st.grading is None else matrix_to_json(st.grading),
        real=real,
        symbol=[matrix_to_json(s) for s in st.symbol],
        twist_operator=None if md.twist_operator is None else matrix_to_json(md.twist_operator),
        notes=list(md.notes),
        preferences={k: matrix_to_json(v) for k, v in md.preferences.items()},
        blocks={k: matrix_to_json(v) for k, v in md.blocks.items()},
    )


def save_model(md: ModelDescriptor) -> str:
    """Canonical JSON: sorted keys, no whitespace, absent optionals omitted."""
    payload = to_document(md).model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
