# src/routes/validate.py
from __future__ import annotations

from pathlib import Path
from typing import Optional

from src.routes.common import BuiltinOption, JsonOption, PathArgument, TolOption, emit, resolve_model, resolve_tolerance
from src.services.report import Report
from src.services.triple import validate_triple


def build_validate_report(md, tol) -> Report:
    result = validate_triple(md.triple, tol)
    return Report(command="validate", model=md.name, items=result.items, details={"dimension": md.triple.dim})


def validate(
    path: Optional[Path] = PathArgument,
    builtin: Optional[str] = BuiltinOption,
    as_json: bool = JsonOption,
    tol: Optional[float] = TolOption,
) -> None:
    """Run the spectral-triple axiom battery on a model."""
    md = resolve_model(path, builtin)
    emit(build_validate_report(md, resolve_tolerance(tol)), as_json)
