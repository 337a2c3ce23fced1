"""Error hierarchy shared across the package.

Three kinds matter to callers: ``parse`` (malformed input text), ``domain``
(valid request that the mathematics refuses), and ``internal`` (a broken
invariant that indicates a bug).  The CLI maps parse errors to exit code 2
and everything else to exit code 1; the service maps them onto structured
HTTP error bodies.
"""
from __future__ import annotations


class ClkError(Exception):
    """Base class for all package errors."""

    kind = "domain"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(ClkError):
    """Malformed descriptor or flag text; carries the offending position."""

    kind = "parse"

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DomainError(ClkError):
    """The request is well-formed but mathematically inadmissible here."""

    kind = "domain"


class InternalError(ClkError):
    """An internal invariant failed; a bug, not a user error."""

    kind = "internal"


class LaurentSymmetryError(DomainError):
    """A Laurent polynomial is not expressible in trace coordinates.

    ``residue`` holds the antisymmetric part that obstructs the rewrite.
    """

    def __init__(self, message: str, residue=None):
        super().__init__(message)
        self.residue = residue
