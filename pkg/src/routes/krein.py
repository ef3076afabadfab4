# src/routes/krein.py
"""
krein command: implementer space, chosen R and the Krein analysis of (., .)_R.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

import typer

from src.config import settings
from src.routes.common import (
    BuiltinOption,
    ByOption,
    JsonOption,
    PathArgument,
    TolOption,
    TwistSource,
    emit,
    input_error,
    resolve_model,
    resolve_tolerance,
    resolve_twist_operator,
)
from src.services.errors import NoHermitianInvertibleError, TwistKitError
from src.services.krein import (
    check_hermitian_product,
    flip_implementation_residual,
    hilbert_recovery_residual,
    indefiniteness_witness,
    krein_decompose,
    rho_unitarity_residual,
    select_hermitian_invertible,
    solve_implementers,
    twisted_product,
    twisted_unitary_algebra_dim,
    verify_fundamental_symmetry,
)
from src.services.models import ModelDescriptor
from src.services.numerics import ComplexMatrix, Tolerance, hermitian_residual, matrix_from_json, matrix_to_json, max_norm
from src.services.report import Report, ReportItem
from src.services.twist import build_minimal_twist

log = logging.getLogger(__name__)

PreferOption = typer.Option(None, "--prefer", help="Named preference of the model or an inline JSON matrix")


def resolve_preference(md: ModelDescriptor, prefer: Optional[str]) -> Optional[ComplexMatrix]:
    if prefer is None:
        return next(iter(md.preferences.values()), None)
    if prefer in md.preferences:
        return md.preferences[prefer]
    try:
        m = matrix_from_json(json.loads(prefer), "$.prefer")
    except json.JSONDecodeError as e:
        known = ", ".join(md.preferences) or "none"
        raise input_error(f"--prefer is neither a named preference ({known}) nor a JSON matrix") from e
    except TwistKitError as e:
        raise input_error(str(e)) from e
    n = md.triple.dim
    if m.shape != (n, n):
        raise input_error(f"--prefer matrix must be {n}x{n}, got {m.shape[0]}x{m.shape[1]}")
    return m


def build_krein_report(
    md: ModelDescriptor,
    preference: Optional[ComplexMatrix],
    by: Optional[TwistSource],
    tol: Tolerance,
) -> Report:
    atol = tol.atol
    t = resolve_twist_operator(md, by)
    try:
        mt = build_minimal_twist(md.triple, t, tol)
    except TwistKitError as e:
        raise input_error(str(e)) from e

    report = Report(command="krein", model=md.name)
    space = solve_implementers(mt, tol)
    report.details["implementer_dimension"] = space.real_dimension
    report.details["intertwiner_dimension"] = space.intertwiner_dimension
    report.items.append(
        ReportItem.from_residual(
            "implementers_off_diagonal", space.block_diagonal_residual, atol, "p+ R p+ = p- R p- = 0"
        )
    )
    if space.empty:
        report.items.append(ReportItem.flag("implementer_space_nonempty", False, anchor="R pi'(d) R^-1 = pi'(rho(d))"))
        return report

    try:
        r = select_hermitian_invertible(space, preference, tol)
    except NoHermitianInvertibleError as e:
        log.warning("no Hermitian invertible implementer for %s: %s", md.name, e)
        report.items.append(ReportItem.flag("hermitian_invertible_found", False))
        return report
    if preference is not None:
        report.items.append(
            ReportItem.flag("preference_accepted", max_norm(r - preference) == 0.0, anchor="preferred R")
        )

    analysis = krein_decompose(r, tol)
    p, q = analysis.signature
    unitary_dim = twisted_unitary_algebra_dim(r, tol)
    psi, psi_tilde = indefiniteness_witness(mt, r, tol)
    pos, neg = twisted_product(r, psi, psi).real, twisted_product(r, psi_tilde, psi_tilde).real
    fundamental_ok = verify_fundamental_symmetry(r, analysis.fundamental_symmetry, tol)
    rho_residual = rho_unitarity_residual(mt, r, tol)

    report.items.extend(
        [
            ReportItem.flag("hermitian", check_hermitian_product(r, tol), hermitian_residual(r), "R = R^dagger"),
            ReportItem.from_residual("implements_flip", flip_implementation_residual(mt, r), atol, "R pi'(d) R^-1"),
            ReportItem.flag("indefinite", analysis.indefinite, anchor="signature (p, q), p, q >= 1"),
            ReportItem.flag("fundamental_symmetry", fundamental_ok, anchor="F = P+ - P-"),
            ReportItem.from_residual(
                "hilbert_recovery", hilbert_recovery_residual(r, tol), atol, "<., .> = (., R^-1 .)_R"
            ),
            ReportItem.from_residual("rho_unitarity", rho_residual, atol, "rho(a^dagger) = (rho^-1(a))^dagger"),
            ReportItem.flag(
                "indefiniteness_witness",
                pos > atol and neg < -atol,
                min(pos, -neg),
                "(psi, psi)_R > 0 > (psi~, psi~)_R",
            ),
            ReportItem.flag(
                "unitary_algebra_dim", unitary_dim == (p + q) ** 2, float(unitary_dim), "dim u(p, q) = (p + q)^2"
            ),
        ]
    )
    report.details.update(
        {
            "chosen_R": matrix_to_json(r),
            "hermitian": bool(check_hermitian_product(r, tol)),
            "signature": [p, q],
            "lambda_min": analysis.lambda_min,
            "fundamental_symmetry_ok": bool(fundamental_ok),
            "unitary_algebra_dim": unitary_dim,
            "rho_unitarity": bool(rho_residual < atol),
        }
    )
    return report


def krein(
    path: Optional[Path] = PathArgument,
    builtin: Optional[str] = BuiltinOption,
    prefer: Optional[str] = PreferOption,
    by: Optional[TwistSource] = ByOption,
    as_json: bool = JsonOption,
    tol: Optional[float] = TolOption,
) -> None:
    """Solve for implementers of the flip and analyze the twisted inner product."""
    md = resolve_model(path, builtin)
    tolerance = resolve_tolerance(tol)
    log.debug("krein on %s with seed %d", md.name, settings.SEED)
    emit(build_krein_report(md, resolve_preference(md, prefer), by, tolerance), as_json)
