"""Exception hierarchy.

Every error the engine raises derives from `SupermechError`, so callers can
catch the whole family; the CLI maps the classes to exit codes.
"""

from __future__ import annotations

from collections.abc import Sequence


class SupermechError(RuntimeError):
    """Base class for supermech errors."""


class ConfigError(SupermechError):
    """Configuration error."""


class UnknownVariableError(SupermechError, KeyError):
    """A scalar operation referenced an undeclared even variable."""

    def __init__(self, name: str) -> None:
        super().__init__(f"unknown variable {name!r}")
        self.name = name

    def __str__(self) -> str:
        return self.args[0]


class UnknownCoordinateError(SupermechError, KeyError):
    """A coordinate name is not part of the coordinate system."""

    def __init__(self, name: str, label: str) -> None:
        super().__init__(f"unknown coordinate {name!r} in chart {label!r}")
        self.name = name
        self.label = label

    def __str__(self) -> str:
        return self.args[0]


class CoordinateMismatchError(SupermechError, ValueError):
    """Two operands live over different coordinate systems."""


class ParityError(SupermechError, ValueError):
    """An object does not have the parity an operation requires."""


class NotInvertibleError(SupermechError, ArithmeticError):
    """A superfunction with zero body was inverted."""


class SingularBodyError(NotInvertibleError):
    """A graded matrix whose body matrix is singular was inverted."""


class NonInvertibleTransitionError(SupermechError, ValueError):
    """A transition morphism has singular body Jacobian blocks."""


class NonHomogeneousLagrangianError(ParityError):
    """The Lagrangian mixes even and odd parts."""


class DegenerateLagrangianError(SupermechError):
    """The Lagrangian is not regular, so the dynamics are not unique."""

    def __init__(self, reasons: Sequence[str]) -> None:
        self.reasons = tuple(reasons)
        super().__init__("degenerate Lagrangian: " + "; ".join(self.reasons))


class NotAffineError(SupermechError):
    """The momentum map is not affine in the velocities."""


class NotHyperregularError(SupermechError):
    """The Legendre map has no symbolic inverse."""


class ModelError(SupermechError, ValueError):
    """A model or atlas file is well-formed but semantically invalid."""


class ModelSyntaxError(ModelError):
    """A model, atlas or expression text failed to parse."""

    def __init__(self, message: str, *, line: int, column: int) -> None:
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownIdentifierError(ModelError):
    """An expression used an identifier that is not declared."""

    def __init__(self, name: str, *, line: int = 0, column: int = 0) -> None:
        self.name = name
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}unknown identifier {name!r}")
