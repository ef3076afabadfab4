# src/services/registry.py
"""
Registry of built-in models, addressable by name from the CLI.
"""

from __future__ import annotations

from typing import Callable

from src.services.errors import UnknownModelError
from src.services.models import (
    ModelDescriptor,
    electrodynamics_twist,
    manifold_fiber_twist,
    sm_structural_fiber,
    toy_c_m2_on_c10,
    toy_c_on_c3,
)

BUILTIN_MODELS: dict[str, Callable[[], ModelDescriptor]] = {
    "manifold-fiber": manifold_fiber_twist,
    "electrodynamics": electrodynamics_twist,
    "c-on-c3": toy_c_on_c3,
    "c-m2-on-c10": toy_c_m2_on_c10,
    "sm-structural": sm_structural_fiber,
}


def get_builtin(name: str) -> ModelDescriptor:
    try:
        factory = BUILTIN_MODELS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_MODELS))
        raise UnknownModelError(f"unknown built-in model {name!r}; choose from {known}") from None
    return factory()
