"""Exception hierarchy shared by every layer of the package."""
from __future__ import annotations


class ContactGeomError(Exception):
    """Base class for all package errors."""


class DivisionByZero(ContactGeomError, ZeroDivisionError):
    pass


class PoleAtPoint(ContactGeomError, ZeroDivisionError):
    pass


class UnknownVariable(ContactGeomError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ChartMismatch(ContactGeomError, ValueError):
    pass


class ParseError(ContactGeomError, ValueError):
    """Malformed expression or document.

    ``location`` is a free-form pointer (a column, a JSON field path or a line)
    that the CLI prints next to the message.
    """

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location:
            return f"{self.location}: {self.message}"
        return self.message


class DegenerateMetric(ContactGeomError, ValueError):
    pass


class SlotMismatch(ContactGeomError, ValueError):
    pass


class InvariantViolation(ContactGeomError, ValueError):
    def __init__(self, message: str, axiom: str | None = None, residual: object = None):
        super().__init__(message)
        self.axiom = axiom
        self.residual = residual


class NotContact(ContactGeomError):
    pass


class ZeroParameter(ContactGeomError, ValueError):
    pass


class ConsistencyError(ContactGeomError, AssertionError):
    """Two independent routes to the same verdict disagreed."""
