"""Exception hierarchy for gridpersist."""

from __future__ import annotations

from typing import Any


class GridPersistError(Exception):
    """Base class for every error raised by gridpersist."""


class DegenerateGeometryError(GridPersistError, ValueError):
    """Raised when a circumcircle is requested for degenerate input."""


class DuplicatePointError(GridPersistError, ValueError):
    """Raised when two ids share the same coordinates.

    Attributes:
        first: Id already present
        second: Id that collided with it
    """

    def __init__(self, first: int, second: int, x: float, y: float):
        super().__init__(
            f"Points {first} and {second} share coordinates ({x!r}, {y!r})"
        )
        self.first = first
        self.second = second


class ProtocolError(GridPersistError):
    """Raised when a worker receives a message it cannot accept."""


class InconsistencyError(GridPersistError):
    """Raised when distributed state disagrees with itself."""


class LiftError(InconsistencyError):
    """Raised when an extension lift cannot be completed."""


class ExpansionError(GridPersistError):
    """Raised when cover expansion keeps triggering with the whole box covered."""


class CollapseError(GridPersistError):
    """Raised when the second page does not satisfy the collapse hypothesis.

    Attributes:
        term: Name of the offending term, e.g. ``"E2[0][1]"``
        generator: The infinite interval found in that term
        partial: Second-page barcodes computed before the check, by term name
    """

    def __init__(self, term: str, generator: Any, partial: dict[str, Any] | None = None):
        super().__init__(f"Collapse check failed: {term} holds infinite bar {generator}")
        self.term = term
        self.generator = generator
        self.partial = partial or {}


class ParseError(GridPersistError, ValueError):
    """Raised for malformed point or barcode files.

    Attributes:
        line: 1-based line number of the offending line
    """

    def __init__(self, message: str, line: int, path: str | None = None):
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.path = path
