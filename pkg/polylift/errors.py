"""
Exception hierarchy shared by the library, the CLI and the service.

Every error carries the process exit code the CLI reports for it.
"""
from typing import Any, Optional


class PolyliftError(Exception):
    """Base class for all library errors"""

    exit_code = 1


# Input errors

class ModelError(PolyliftError):
    """Invalid system description (DSL, JSON or in-memory data)"""

    exit_code = 2


class DegreeZeroTerm(ModelError):
    """A monomial of total degree 0: the origin would not be an equilibrium"""


class ExponentLengthMismatch(ModelError):
    """Exponent vector length differs from the state dimension"""


class DimensionMismatch(ModelError):
    """A vector or matrix does not match the system dimension"""


class DocumentError(ModelError):
    """Malformed JSON system document"""


class DSLSyntaxError(ModelError):
    """Syntax error in the equation DSL, located by line and column (1-based)"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownIdentifier(DSLSyntaxError):
    """Identifier that is neither a state variable nor a declared parameter"""


class ConstantTermError(DSLSyntaxError):
    """Equation whose expansion keeps a nonzero constant term"""


# Size guard

class AssemblyLimitExceeded(PolyliftError):
    """Requested matrix would exceed the configured index space"""

    exit_code = 3

    def __init__(self, rows: int, cols: int, limit: int):
        super().__init__(
            f"matrix of shape {rows}x{cols} exceeds the index space limit {limit}"
        )
        self.rows = rows
        self.cols = cols
        self.limit = limit


# Numeric usage errors

class NonSquareMatrix(PolyliftError):
    """Operation defined for square matrices only"""


class MissingAlpha(PolyliftError):
    """E1 quantities need an a-priori solution bound alpha"""


class HorizonExceeded(PolyliftError):
    """Evaluation time lies at or beyond the validity horizon"""


class NotQuadratic(PolyliftError):
    """Operation defined for quadratic systems (degree 2) only"""


class BlowUp(PolyliftError):
    """Integration stopped because the state left the finite range"""

    def __init__(self, t: float, trajectory: Optional[Any] = None):
        super().__init__(f"solution blew up at t={t!r}")
        self.t = t
        self.trajectory = trajectory
