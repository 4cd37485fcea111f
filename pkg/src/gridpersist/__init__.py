"""gridpersist - distributed persistent homology of planar point clouds."""

from __future__ import annotations

__version__ = "0.1.0"

from gridpersist.barcode_algebra import Interval  # noqa: E402
from gridpersist.config import GridConfig, RunConfig  # noqa: E402
from gridpersist.errors import (  # noqa: E402
    CollapseError,
    DuplicatePointError,
    GridPersistError,
    InconsistencyError,
    ParseError,
    ProtocolError,
)
from gridpersist.geometry import Point2  # noqa: E402
from gridpersist.oracle import compare, sequential_persistence  # noqa: E402
from gridpersist.runtime import RunResult, run  # noqa: E402

__all__ = [
    "CollapseError",
    "DuplicatePointError",
    "GridConfig",
    "GridPersistError",
    "InconsistencyError",
    "Interval",
    "ParseError",
    "Point2",
    "ProtocolError",
    "RunConfig",
    "RunResult",
    "__version__",
    "compare",
    "run",
    "sequential_persistence",
]
