# src/routes/twist.py
from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from src.routes.common import (
    BuiltinOption,
    ByOption,
    JsonOption,
    PathArgument,
    TolOption,
    TwistSource,
    emit,
    resolve_model,
    resolve_tolerance,
    resolve_twist_operator,
)
from src.services.errors import NotFaithfulError
from src.services.krein import expandability_necessary
from src.services.models import ModelDescriptor
from src.services.numerics import Tolerance
from src.services.report import Report, ReportItem
from src.services.twist import (
    build_minimal_twist,
    transparency_residual,
    twisted_first_order_residual,
    twisted_one_form_space,
    twisting_operator_report,
)

log = logging.getLogger(__name__)


def build_twist_report(md: ModelDescriptor, by: Optional[TwistSource], tol: Tolerance) -> Report:
    atol = tol.atol
    st = md.triple
    t = resolve_twist_operator(md, by)
    report = Report(command="twist", model=md.name, items=list(twisting_operator_report(st, t, tol).items))
    if not report.ok:
        return report

    try:
        mt = build_minimal_twist(st, t, tol)
    except NotFaithfulError:
        report.items.append(ReportItem.flag("doubled_faithful", False, anchor="pi' faithful"))
        return report
    report.items.append(ReportItem.flag("doubled_faithful", True, anchor="pi' faithful"))

    if st.real is not None:
        report.items.append(
            ReportItem.from_residual(
                "twisted_first_order", twisted_first_order_residual(mt), atol, "twisted first-order condition"
            )
        )
    else:
        report.details["twisted_first_order"] = "skipped: no real structure"

    for name, block in md.blocks.items():
        report.items.append(
            ReportItem.from_residual(
                f"transparency[{name}]", transparency_residual(mt, block, twisted=True), atol, "M pi'(a) = pi'(rho(a)) M"
            )
        )
        report.items.append(
            ReportItem.from_residual(
                f"transparency_untwisted[{name}]", transparency_residual(mt, block, twisted=False), atol, "[M, pi(a)] = 0"
            )
        )

    ex = expandability_necessary(mt, tol)
    report.details["one_form_dimension"] = twisted_one_form_space(mt, tol).dimension
    report.details["expandability_necessary"] = {
        "plus_dim": ex.plus_dim,
        "minus_dim": ex.minus_dim,
        "dims_equal": ex.dims_equal,
        "traces_equal": ex.traces_equal,
    }
    if not (ex.dims_equal and ex.traces_equal):
        log.info("model %s fails a necessary expandability condition", md.name)
    return report


def twist(
    path: Optional[Path] = PathArgument,
    builtin: Optional[str] = BuiltinOption,
    by: Optional[TwistSource] = ByOption,
    as_json: bool = JsonOption,
    tol: Optional[float] = TolOption,
) -> None:
    """Build the minimal twist and check its operator, first order and transparency."""
    md = resolve_model(path, builtin)
    emit(build_twist_report(md, by, resolve_tolerance(tol)), as_json)
