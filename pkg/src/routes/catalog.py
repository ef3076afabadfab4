# src/routes/catalog.py
from __future__ import annotations

import typer

from src.routes.common import input_error
from src.services.errors import UnknownModelError
from src.services.models import save_model
from src.services.registry import BUILTIN_MODELS, get_builtin


def models() -> None:
    """List the built-in models with their notes."""
    for name in sorted(BUILTIN_MODELS):
        md = get_builtin(name)
        typer.echo(f"{name}  (dim {md.triple.dim})")
        for note in md.notes:
            typer.echo(f"    - {note}")


def export(name: str = typer.Argument(..., help="Built-in model to serialize")) -> None:
    """Print a built-in model as a canonical JSON model document."""
    try:
        md = get_builtin(name)
    except UnknownModelError as e:
        raise input_error(str(e)) from e
    typer.echo(save_model(md))
