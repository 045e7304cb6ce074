"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class SemipredError(Exception):
    """Base class for all errors raised by semipred."""


class MalformedTableError(SemipredError, ValueError):
    def __init__(self, message: str, cell: tuple[int, int] | None = None):
        self.cell = cell
        if cell is not None:
            message = f"cell {cell}: {message}"
        super().__init__(message)


class AssociativityError(SemipredError, ValueError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        a, b, c = triple
        super().__init__(f"associativity fails at (a, b, c) = ({a}, {b}, {c})")


class NotAGroupError(SemipredError, ValueError):
    NO_IDENTITY = "no identity"
    MISSING_INVERSE = "missing inverse"
    NOT_LATIN = "not Latin square"

    def __init__(self, reason: str, element: int | None = None):
        self.reason = reason
        self.element = element
        detail = reason if element is None else f"{reason} (element {element})"
        super().__init__(f"not a group: {detail}")


class NormalizationError(SemipredError, ValueError):
    """Sandwich matrix is not normalized (row 0 / column 0 must be the identity)."""


class NotSimpleError(SemipredError, ValueError):
    pass


class NotHomogroupError(SemipredError, ValueError):
    pass


class BudgetExceededError(SemipredError):
    def __init__(self, bound: str, limit: int, actual: int):
        self.bound = bound
        self.limit = limit
        self.actual = actual
        super().__init__(f"budget exceeded: {bound} = {actual} > {limit}")


class FormatError(SemipredError, ValueError):
    """Parse failure in one of the text formats; carries a 1-based line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class UnknownVariableError(SemipredError, KeyError):
    def __str__(self) -> str:
        return f"unknown variable: {self.args[0]!r}"


class QiViolatedError(SemipredError):
    """Raised when a reduction requires the quasi-identities but they fail."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class QiHoldsError(SemipredError):
    """Raised when a counterexample is requested but both quasi-identities hold."""
