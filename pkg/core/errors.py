from typing import Dict, Optional


class ThickslideError(Exception):
    """Base class for every error raised by the library."""


class ExprSyntaxError(ThickslideError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownIdentifierError(ThickslideError):
    def __init__(self, name: str, line: int = 1, column: int = 1):
        self.name = name
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: unknown identifier '{name}'")


class ArityMismatchError(ThickslideError):
    pass


class EmptyIntervalError(ThickslideError):
    pass


class SystemDefinitionError(ThickslideError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsplittableBoxError(ThickslideError):
    pass


class DomainError(ThickslideError):
    pass


class UnsupportedDimensionError(ThickslideError):
    pass


class PavingBudgetError(ThickslideError):
    """Raised when the paver worklist outgrows the box budget."""

    def __init__(self, budget: int, counts: Dict[str, int], pending: int):
        self.budget = budget
        self.counts = counts
        self.pending = pending
        super().__init__(
            f"box budget {budget} exceeded with {pending} boxes pending "
            f"(emitted so far: {counts})"
        )


class SystemSyntaxError(ExprSyntaxError):
    """Malformed statement in a system definition file."""
