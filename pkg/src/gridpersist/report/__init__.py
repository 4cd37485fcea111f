"""Rich console reports for the command line."""

from gridpersist.report.reporter import Reporter
from gridpersist.report.theme import Theme

__all__ = ["Reporter", "Theme"]
