"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class CactusError(Exception):
    """Base class for all package errors."""


class OrderMismatchError(CactusError, ValueError):
    """Two power series with different truncation orders were combined."""


class GrammarSyntaxError(CactusError, ValueError):
    """The grammar source could not be parsed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class GrammarValidationError(CactusError, ValueError):
    """A grammar system failed static validation."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics) or "invalid grammar")


class IllFoundedError(CactusError, RuntimeError):
    """Fixed-point iteration did not stabilise."""


class SemanticsError(CactusError, ArithmeticError):
    """A computed enumeration violates integrality or non-negativity."""


class ResourceError(CactusError, RuntimeError):
    """A brute-force guard or table bound was exceeded."""


class ZeroCountError(CactusError, ValueError):
    """The requested size has no objects in the family."""

    def __init__(self, message: str, nearest: tuple[int, ...] = ()):
        self.nearest = tuple(nearest)
        super().__init__(message)


class NotACactusError(CactusError, ValueError):
    """The input graph is not a (connected) cactus."""

    def __init__(self, message: str, certificate: object = None):
        self.certificate = certificate
        super().__init__(message)


class StructureError(CactusError, ValueError):
    """A graph-labeled tree or sampled structure is malformed."""


class InvalidTreeError(CactusError, ValueError):
    """A graph-labeled tree fails the cactus split-tree conditions."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))
