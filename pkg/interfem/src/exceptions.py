"""
Exception classes for interfem

This module provides the exception hierarchy raised by the geometry, mesh,
finite-element, transmission, analysis and campaign layers, together with the
mapping from exceptions onto command-line exit codes.
"""

from typing import Optional, Any, Dict


class InterfemError(Exception):
    """Base exception class for all interfem errors."""

    category = "internal"

    def __init__(self, message: str, error_code: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class ConfigurationError(InterfemError):
    """Raised when a run configuration is semantically invalid."""

    category = "validation"


class ValidationError(ConfigurationError):
    """Raised when input validation fails."""
    pass


class ParseError(InterfemError):
    """Raised when a configuration file or an expression cannot be parsed."""

    category = "parse"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 error_code: Optional[str] = "PARSE_ERROR"):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}", error_code=error_code,
                         details={"line": line, "column": column})
        self.line = line
        self.column = column


class OutsideDomain(ValidationError):
    """Raised when a point lies outside the closed outer domain."""
    pass


class UnknownInterface(ValidationError):
    """Raised when an interface id does not exist in the mesh or partition."""
    pass


class MissingAuxiliary(ValidationError):
    """Raised when an inclusion has no auxiliary Neumann solution."""
    pass


class NumericalError(InterfemError):
    """Raised when a numerical stage fails."""

    category = "numerical"


class MeshFailure(NumericalError):
    """Raised when a mesh cannot be generated or refined within the quality floor."""
    pass


class SingularElement(NumericalError):
    """Raised when an element has a nonpositive Jacobian."""
    pass


class NoConvergence(NumericalError):
    """Raised when a Krylov solve does not reach its tolerance."""

    def __init__(self, message: str, iterations: Optional[int] = None, residual: Optional[float] = None):
        super().__init__(message, error_code="NO_CONVERGENCE",
                         details={"iterations": iterations, "residual": residual})
        self.iterations = iterations
        self.residual = residual


class IncompatibleData(NumericalError):
    """Raised when a pure Neumann right-hand side violates solvability."""
    pass


class OrientationError(NumericalError):
    """Raised when the interface sign cannot be pinned by the manufactured self-test."""
    pass


class EvalError(NumericalError):
    """Raised when an expression evaluates to an undefined value."""
    pass


class EmptyRegion(NumericalError):
    """Raised when a clipped ball has no quadrature support."""
    pass


class DegenerateLadder(NumericalError):
    """Raised when an oscillation ladder is identically zero."""

    def __init__(self, message: str, beta: float = float("inf")):
        super().__init__(message, error_code="DEGENERATE_LADDER", details={"beta": beta})
        self.beta = beta


class SerializationError(InterfemError):
    """Raised when reading or writing artifacts fails."""

    category = "io"


_EXIT_CODES = {
    "parse": 2,
    "validation": 3,
    "numerical": 4,
    "io": 5,
}


def error_category(error: BaseException) -> str:
    """Return the machine-parsable category of an error."""
    if isinstance(error, InterfemError):
        return error.category
    if isinstance(error, OSError):
        return "io"
    return "internal"


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception onto the command-line exit code.

    Args:
        error: The exception raised by a campaign

    Returns:
        2 for parse errors, 3 for validation errors, 4 for numerical failures,
        5 for I/O failures and 1 for anything else
    """
    return _EXIT_CODES.get(error_category(error), 1)
