# src/services/errors.py
"""
Error hierarchy
---------------
Every fault raised by the library derives from TwistKitError so the CLI can
map it to exit status 2. Failed checks are never raised: they are report
items.
"""

from __future__ import annotations


class TwistKitError(Exception):
    """Base class for all library faults."""


class InvalidToleranceError(TwistKitError, ValueError):
    pass


class NonSquareError(TwistKitError, ValueError):
    pass


class NotHermitianError(TwistKitError, ValueError):
    def __init__(self, residual: float, what: str = "matrix"):
        super().__init__(f"{what} is not Hermitian (residual {residual:.3e})")
        self.residual = residual


class SpecMismatchError(TwistKitError, ValueError):
    pass


class DimensionMismatchError(TwistKitError, ValueError):
    pass


class NoRealStructureError(TwistKitError):
    def __init__(self, message: str = "triple carries no real structure"):
        super().__init__(message)


class NoGradingError(TwistKitError):
    def __init__(self, message: str = "triple carries no grading"):
        super().__init__(message)


class InvalidTwistOperatorError(TwistKitError, ValueError):
    def __init__(self, invariant: str, residual: float | None = None):
        detail = f" (residual {residual:.3e})" if residual is not None else ""
        super().__init__(f"twisting operator fails '{invariant}'{detail}")
        self.invariant = invariant
        self.residual = residual


class NotFaithfulError(TwistKitError):
    pass


class NotAOneFormError(TwistKitError, ValueError):
    def __init__(self, residual: float):
        super().__init__(f"operator is not a one-form (projection residual {residual:.3e})")
        self.residual = residual


class NoHermitianInvertibleError(TwistKitError):
    pass


class SingularError(TwistKitError, ValueError):
    def __init__(self, lambda_min: float):
        super().__init__(f"operator is singular (smallest |eigenvalue| {lambda_min:.3e})")
        self.lambda_min = lambda_min


class UnsupportedError(TwistKitError, NotImplementedError):
    pass


class InvalidMassError(TwistKitError, ValueError):
    pass


class UnknownModelError(TwistKitError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown model"


class SchemaError(TwistKitError, ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class MatrixShapeError(SchemaError):
    pass
