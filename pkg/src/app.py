# src/app.py
"""
twistkrein command line
-----------------------
    python -m src.app validate --builtin electrodynamics
    python -m src.app twist --builtin sm-structural --by grading
    python -m src.app krein --builtin manifold-fiber --prefer gamma0 --json
    python -m src.app demo torsion

Exit status: 0 all items pass, 1 some check fails, 2 input error.
"""

from __future__ import annotations

from typing import Optional

import typer

from src.config import configure_logging
from src.routes.catalog import export, models
from src.routes.demo import demo
from src.routes.krein import krein
from src.routes.twist import twist
from src.routes.validate import validate

app = typer.Typer(add_completion=False, help="Finite spectral triples, minimal twists and Krein products.")


@app.callback()
def _root(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override TWISTKIT_LOG_LEVEL"),
) -> None:
    configure_logging(log_level)


# ==================================================================
# ✅ COMMAND REGISTRATION
# ==================================================================
app.command("validate")(validate)
app.command("twist")(twist)
app.command("krein")(krein)
app.command("demo")(demo)
app.command("models")(models)
app.command("export")(export)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
