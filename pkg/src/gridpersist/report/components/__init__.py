"""Report components."""

from gridpersist.report.components.barcode import BarcodeSummary
from gridpersist.report.components.base import Component
from gridpersist.report.components.header import Header
from gridpersist.report.components.key_value import KeyValue
from gridpersist.report.components.table import Table
from gridpersist.report.components.text import Error, Info, Message, Success, WarningText

__all__ = [
    "BarcodeSummary",
    "Component",
    "Error",
    "Header",
    "Info",
    "KeyValue",
    "Message",
    "Success",
    "Table",
    "WarningText",
]
