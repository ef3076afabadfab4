# src/routes/common.py
"""
Shared plumbing for the CLI commands: model resolution, tolerance, output
and the exit-status contract (0 pass, 1 check failure, 2 input error).
"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Optional

import typer

from src.services.errors import TwistKitError
from src.services.models import ModelDescriptor, load_model_file
from src.services.numerics import ComplexMatrix, Tolerance
from src.services.registry import get_builtin
from src.services.report import Report
from src.services.twist import grading_as_twist

log = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 2

PathArgument = typer.Argument(None, help="Path to a model JSON document")
BuiltinOption = typer.Option(None, "--builtin", help="Name of a built-in model")
JsonOption = typer.Option(False, "--json", help="Emit the report as canonical JSON")
TolOption = typer.Option(None, "--tol", help="Absolute tolerance (overrides TWISTKIT_ATOL)")


def input_error(message: str) -> typer.Exit:
    typer.echo(f"error: {message}", err=True)
    return typer.Exit(code=EXIT_INPUT_ERROR)


def resolve_model(path: Optional[Path], builtin: Optional[str]) -> ModelDescriptor:
    if (path is None) == (builtin is None):
        raise input_error("give exactly one of a model path or --builtin NAME")
    try:
        if builtin is not None:
            return get_builtin(builtin)
        return load_model_file(path)
    except (TwistKitError, OSError) as e:
        log.warning("model load failed: %s", e)
        raise input_error(str(e)) from e


def resolve_tolerance(tol: Optional[float]) -> Tolerance:
    try:
        return Tolerance() if tol is None else Tolerance(tol)
    except TwistKitError as e:
        raise input_error(str(e)) from e


def emit(report: Report, as_json: bool) -> None:
    """Print the report and leave with its exit status."""
    typer.echo(report.to_json() if as_json else report.to_text())
    raise typer.Exit(code=report.exit_code)


class TwistSource(str, Enum):
    grading = "grading"
    inline = "inline"


ByOption = typer.Option(None, "--by", help="Twisting operator source (default: inline when present, else grading)")


def resolve_twist_operator(md: ModelDescriptor, by: Optional[TwistSource]) -> ComplexMatrix:
    if by is None:
        by = TwistSource.inline if md.twist_operator is not None else TwistSource.grading
    if by is TwistSource.inline:
        if md.twist_operator is None:
            raise input_error(f"model {md.name!r} has no inline twist_operator")
        return md.twist_operator
    try:
        return grading_as_twist(md.triple)
    except TwistKitError as e:
        raise input_error(str(e)) from e
