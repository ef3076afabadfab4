# src/routes/demo.py
"""
demo command
------------
Self-contained reproductions on the built-in models:
  torsion         torsion fluctuation against the Clifford action of its Hodge dual
  krein-manifold  the Lorentzian Krein operator on Dirac spinors and its equivalence to gamma^0
  traces          trace obstructions to expandability for the two toy models
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Optional

import numpy as np
import typer

from src.config import settings
from src.routes.common import JsonOption, TolOption, emit, resolve_tolerance
from src.services.algebra import element, random_element, represent
from src.services.clifford import (
    build_gammas,
    clifford_residual,
    hodge_star,
    krein_equivalence_witness,
    krein_operator,
    one_form,
    torsion_fluctuation,
    verify_clifford_identity,
)
from src.services.krein import (
    expandability_necessary,
    flip_implementation_residual,
    krein_decompose,
    solve_implementers,
)
from src.services.models import manifold_fiber_twist, toy_c_m2_on_c10, toy_c_on_c3
from src.services.numerics import Tolerance, adjoint, hermitian_residual, identity, matrix_to_json, max_norm
from src.services.report import Report, ReportItem
from src.services.twist import (
    DoubledElement,
    build_minimal_twist,
    doubled_represent,
    in_real_span,
    selfadjoint_fluctuation_space,
)

log = logging.getLogger(__name__)

TORSION_SAMPLES = 100
TRACE_SAMPLES = 100
# the torsion identity is exact in the pinned conventions
TORSION_ATOL = 1e-12
HERMITIAN_ATOL = 1e-14


class DemoName(str, Enum):
    torsion = "torsion"
    krein_manifold = "krein-manifold"
    traces = "traces"


# ==================================================================
# torsion
# ==================================================================

def torsion_report(tol: Tolerance) -> Report:
    gs = build_gammas()
    md = manifold_fiber_twist()
    mt = build_minimal_twist(md.triple, md.twist_operator, tol)
    space = selfadjoint_fluctuation_space(mt, tol)

    rng = np.random.default_rng(settings.SEED)
    identity_gap = hermitian_gap = membership_gap = star_gap = 0.0
    for f in rng.standard_normal((TORSION_SAMPLES, 4)):
        m, _ = torsion_fluctuation(gs, f)
        identity_gap = max(identity_gap, verify_clifford_identity(gs, f))
        hermitian_gap = max(hermitian_gap, hermitian_residual(m))
        membership_gap = max(membership_gap, in_real_span(space.basis, m))
        w = one_form(f)
        twice = hodge_star(hodge_star(w))
        star_gap = max(star_gap, max(abs(twice.coefficient(k) + w.coefficient(k)) for k in w.coefficients))

    return Report(
        command="demo",
        model="torsion",
        items=[
            ReportItem.from_residual(
                "clifford_relations", clifford_residual(gs), tol.atol, "{gamma^mu, gamma^nu} = 2 delta"
            ),
            ReportItem.from_residual("torsion_identity", identity_gap, TORSION_ATOL, "-i f gamma gamma_M = c(*omega_f)"),
            ReportItem.from_residual("torsion_hermitian", hermitian_gap, HERMITIAN_ATOL, "torsion term selfadjoint"),
            ReportItem.from_residual(
                "torsion_in_selfadjoint_fluctuations", membership_gap, tol.atol, "twisted fluctuation of the fiber"
            ),
            ReportItem.from_residual("double_hodge_star", star_gap, tol.atol, "** = -1 on one-forms"),
        ],
        details={
            "samples": TORSION_SAMPLES,
            "seed": settings.SEED,
            "max_identity_residual": identity_gap,
            "selfadjoint_fluctuation_dimension": space.dimension,
            "selfadjoint_fluctuation_image": space.image_dimension,
        },
    )


# ==================================================================
# krein-manifold
# ==================================================================

def krein_manifold_report(tol: Tolerance) -> Report:
    atol = tol.atol
    gs = build_gammas()
    frak_j = krein_operator(4, 3)
    w = krein_equivalence_witness()
    eye2, zero2 = identity(2), np.zeros((2, 2), dtype=complex)
    expected = 1j * np.block([[zero2, eye2], [-eye2, zero2]])

    md = manifold_fiber_twist()
    mt = build_minimal_twist(md.triple, md.twist_operator, tol)
    analysis = krein_decompose(frak_j, tol)

    return Report(
        command="demo",
        model="krein-manifold",
        items=[
            ReportItem.from_residual(
                "krein_operator_value", max_norm(frak_j - expected), atol, "i [[0, I], [-I, 0]]"
            ),
            ReportItem.from_residual("krein_operator_hermitian", hermitian_residual(frak_j), atol),
            ReportItem.from_residual("krein_operator_involution", max_norm(frak_j @ frak_j - identity(4)), atol),
            ReportItem.flag("krein_operator_signature", analysis.signature == (2, 2), anchor="signature (2, 2)"),
            ReportItem.from_residual("witness_unitary", max_norm(adjoint(w) @ w - identity(4)), atol),
            ReportItem.from_residual(
                "witness_equivalence", max_norm(w @ gs.gammas[0] @ adjoint(w) - frak_j), atol, "W gamma^0 W^dagger"
            ),
            ReportItem.from_residual(
                "krein_operator_implements_flip", flip_implementation_residual(mt, frak_j), atol, "R pi'(d) R^-1"
            ),
            ReportItem.from_residual(
                "euclidean_krein_operator", max_norm(krein_operator(4, 0) + identity(4)), atol, "k = 0 gives -I"
            ),
        ],
        details={
            "krein_operator": matrix_to_json(frak_j),
            "witness": matrix_to_json(w),
            "signature": list(analysis.signature),
        },
    )


# ==================================================================
# traces
# ==================================================================

def _c_on_c3_items(tol: Tolerance) -> tuple[list[ReportItem], dict]:
    md = toy_c_on_c3()
    mt = build_minimal_twist(md.triple, md.twist_operator, tol)
    spec = md.triple.rep.algebra
    d = DoubledElement(element(spec, 1.0), element(spec, 2.0))
    tr = complex(np.trace(doubled_represent(mt, d)))
    tr_flip = complex(np.trace(doubled_represent(mt, d.flip())))
    space = solve_implementers(mt, tol)
    ex = expandability_necessary(mt, tol)
    items = [
        ReportItem.flag(
            "c-on-c3.trace_values", (tr, tr_flip) == (5, 4), abs(tr - tr_flip), "Tr pi' = 5, Tr pi' rho = 4"
        ),
        ReportItem.flag("c-on-c3.dims_differ", not ex.dims_equal, anchor="rank p+ = 1, rank p- = 2"),
        ReportItem.flag("c-on-c3.traces_differ", not ex.traces_equal, ex.trace_residual, "z against 2z"),
        ReportItem.flag("c-on-c3.no_implementer", space.empty, float(space.real_dimension)),
    ]
    table = {
        "z": [1, 2],
        "trace": tr.real,
        "trace_flipped": tr_flip.real,
        "eigenspace_dims": [ex.plus_dim, ex.minus_dim],
        "implementer_dimension": space.real_dimension,
    }
    return items, table


def _c_m2_items(tol: Tolerance) -> tuple[list[ReportItem], dict]:
    md = toy_c_m2_on_c10()
    mt = build_minimal_twist(md.triple, md.twist_operator, tol)
    spec = md.triple.rep.algebra
    rng = np.random.default_rng(settings.SEED)

    plus_gap = minus_gap = doubled_gap = 0.0
    trace_gap = np.inf
    for _ in range(TRACE_SAMPLES):
        a, b = random_element(spec, rng), random_element(spec, rng)
        c, m = a.components[0][0, 0], a.components[1]
        pa = represent(mt.base.rep, a)
        tr_plus = np.trace(mt.p_plus @ pa)
        tr_minus = np.trace(mt.p_minus @ pa)
        plus_gap = max(plus_gap, abs(tr_plus - (np.trace(m) + 3 * c)))
        minus_gap = max(minus_gap, abs(tr_minus - (2 * np.trace(m) + c)))
        trace_gap = min(trace_gap, abs(tr_plus - tr_minus))
        c2, m2 = b.components[0][0, 0], b.components[1]
        doubled = np.trace(doubled_represent(mt, DoubledElement(a, b)))
        doubled_gap = max(doubled_gap, abs(doubled - (np.trace(m) + 2 * np.trace(m2) + 3 * c + c2)))

    space = solve_implementers(mt, tol)
    ex = expandability_necessary(mt, tol)
    items = [
        ReportItem.from_residual("c-m2-on-c10.plus_trace", plus_gap, tol.atol, "Tr m + 3c"),
        ReportItem.from_residual("c-m2-on-c10.minus_trace", minus_gap, tol.atol, "2 Tr m + c"),
        ReportItem.from_residual("c-m2-on-c10.doubled_trace", doubled_gap, tol.atol, "Tr m1 + 2 Tr m2 + 3 c1 + c2"),
        ReportItem.flag("c-m2-on-c10.dims_equal", ex.dims_equal, anchor="rank p+ = rank p- = 5"),
        ReportItem.flag("c-m2-on-c10.traces_differ", trace_gap > tol.atol, float(trace_gap)),
        ReportItem.flag("c-m2-on-c10.no_implementer", space.empty, float(space.real_dimension)),
    ]
    table = {
        "samples": TRACE_SAMPLES,
        "plus_trace": "Tr m + 3c",
        "minus_trace": "2 Tr m + c",
        "implementer_dimension": space.real_dimension,
    }
    return items, table


def traces_report(tol: Tolerance) -> Report:
    c3_items, c3_table = _c_on_c3_items(tol)
    m2_items, m2_table = _c_m2_items(tol)
    return Report(
        command="demo",
        model="traces",
        items=c3_items + m2_items,
        details={"c-on-c3": c3_table, "c-m2-on-c10": m2_table},
    )


DEMOS = {
    DemoName.torsion: torsion_report,
    DemoName.krein_manifold: krein_manifold_report,
    DemoName.traces: traces_report,
}


def demo(
    name: DemoName = typer.Argument(..., help="Which demo to run"),
    as_json: bool = JsonOption,
    tol: Optional[float] = TolOption,
) -> None:
    """Run a self-contained reproduction on the built-in models."""
    tolerance = resolve_tolerance(tol)
    log.info("running demo %s", name.value)
    emit(DEMOS[name](tolerance), as_json)
