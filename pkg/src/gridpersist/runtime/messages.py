"""Phases of the distributed run and the messages exchanged in them."""

from __future__ import annotations

from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any

from gridpersist.alpha import Edge, Simplex
from gridpersist.barcode_algebra import BasisElement, Interval
from gridpersist.cover import GridSpec, Zones
from gridpersist.geometry import Point2
from gridpersist.spectral import GenKey, InclusionBlock, LiftRequest


class Phase(IntEnum):
    """Workflow phases in execution order."""

    POINT_DISTRIBUTION = 1
    LAYER_POINTS = 2
    TRIPLE_INTERSECTION_SHARE = 3
    CRITICAL_NON_GABRIEL = 4
    BARCODE_AND_MATRICES = 5
    E2_BROADCAST = 6
    LIFT_COORDINATES = 7
    WITHHELD_INTERVALS = 8
    FINAL_BARCODE = 9

    @property
    def label(self) -> str:
        return "".join(part.title() for part in self.name.split("_"))


@dataclass(frozen=True)
class PointsPayload:
    grid: GridSpec
    points: Mapping[int, Point2]


@dataclass(frozen=True)
class LayerPayload:
    round: int
    points: Mapping[int, Point2]


@dataclass(frozen=True)
class TriplesPayload:
    triples: Sequence[tuple[Zones, frozenset[Simplex]]]


@dataclass(frozen=True)
class CriticalPayload:
    critical: Mapping[Edge, float]


@dataclass(frozen=True)
class BarcodePayload:
    """Local barcodes and inclusion blocks for one row of the first page.

    Attributes:
        dim: Row of the first page
        owned: Nerve simplices whose smallest zone is the sender
        barcodes: Shipped generators per owned simplex
        blocks: Inclusion blocks computed by the sender
        withheld_infinite: Withheld infinite generators, reported for the collapse check
    """

    dim: int
    owned: Sequence[Zones]
    barcodes: Mapping[Zones, Sequence[BasisElement]]
    blocks: Sequence[InclusionBlock]
    withheld_infinite: Sequence[BasisElement] = ()


@dataclass(frozen=True)
class E2Payload:
    requests: Sequence[LiftRequest]
    classes: Sequence[BasisElement] | None = None


@dataclass(frozen=True)
class LiftPayload:
    lifted: Mapping[Hashable, frozenset[GenKey]]
    withheld: Mapping[GenKey, Interval] = field(default_factory=dict)


@dataclass(frozen=True)
class WithheldPayload:
    zone: int
    generators: Mapping[int, Sequence[BasisElement]]


@dataclass(frozen=True)
class FinalPayload:
    dim: int
    generators: Sequence[BasisElement]


PAYLOADS: dict[Phase, type] = {
    Phase.POINT_DISTRIBUTION: PointsPayload,
    Phase.LAYER_POINTS: LayerPayload,
    Phase.TRIPLE_INTERSECTION_SHARE: TriplesPayload,
    Phase.CRITICAL_NON_GABRIEL: CriticalPayload,
    Phase.BARCODE_AND_MATRICES: BarcodePayload,
    Phase.E2_BROADCAST: E2Payload,
    Phase.LIFT_COORDINATES: LiftPayload,
    Phase.WITHHELD_INTERVALS: WithheldPayload,
    Phase.FINAL_BARCODE: FinalPayload,
}


@dataclass(frozen=True)
class WorkerMessage:
    """One message on a sender-to-receiver channel.

    Attributes:
        phase: Phase the message belongs to
        sender: Sending worker id
        receiver: Receiving worker id
        payload: Phase-specific payload
    """

    phase: Phase
    sender: int
    receiver: int
    payload: Any

    def __post_init__(self) -> None:
        expected = PAYLOADS[self.phase]
        if not isinstance(self.payload, expected):
            raise TypeError(
                f"{self.phase.label} messages carry {expected.__name__}, "
                f"got {type(self.payload).__name__}"
            )
