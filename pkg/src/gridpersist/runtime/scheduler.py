"""Drives the workers through the phases of a distributed run."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, TypeVar

from gridpersist.config import RunConfig
from gridpersist.errors import CollapseError, ExpansionError, InconsistencyError
from gridpersist.geometry import Point2
from gridpersist.runtime.entries import Barcodes, LocalizedInterval
from gridpersist.runtime.messages import Phase
from gridpersist.runtime.network import Network
from gridpersist.runtime.worker import RoundContext, Worker, coordinator
from gridpersist.spectral import ROWS

logger = logging.getLogger(__name__)

T = TypeVar("T")

_AFTER_EXPANSION = (
    Phase.TRIPLE_INTERSECTION_SHARE,
    Phase.CRITICAL_NON_GABRIEL,
    Phase.BARCODE_AND_MATRICES,
    Phase.E2_BROADCAST,
    Phase.LIFT_COORDINATES,
    Phase.WITHHELD_INTERVALS,
    Phase.FINAL_BARCODE,
)


@dataclass
class RunResult:
    """Output of a distributed run.

    Attributes:
        barcodes: Nonempty bars per degree, in standard order
        localized: Every bar with the term or zone it came from
        timings: Wall time per phase label, in seconds
        stats: Counters collected along the way
    """

    barcodes: Barcodes
    localized: list[LocalizedInterval] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)


class Scheduler:
    """Runs one worker per zone over an in-process network.

    Args:
        config: Run options
    """

    def __init__(self, config: RunConfig):
        self.config = config
        count = config.grid.workers
        self.workers = [Worker(w, count, config.optimised_entries) for w in range(count)]
        self.network = Network(count, config.seed)
        self.timings: dict[str, float] = {}

    def _each(self, fn: Callable[[Worker], T]) -> list[T]:
        if self.config.threads == 1:
            return [fn(w) for w in self.workers]
        with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
            return list(pool.map(fn, self.workers))

    def step(self, phase: Phase, context: RoundContext | None = None) -> None:
        """Run one emit-deliver-absorb step of ``phase``."""
        start = time.perf_counter()
        self.network.open(phase)
        for messages in self._each(lambda w: w.emit(phase, context)):
            for message in messages:
                self.network.send(message)
        inboxes = self.network.deliver()
        self._each(lambda w: w.absorb(phase, inboxes[w.wid], context))
        self.timings[phase.label] = self.timings.get(phase.label, 0.0) + time.perf_counter() - start

    def expand(self) -> int:
        """Run point-layer rounds until no zone needs one.

        Returns:
            The number of rounds run

        Raises:
            ExpansionError: If some zone is still active past the grid extent
        """
        grid = self.workers[0].grid
        assert grid is not None
        limit = max(grid.nx, grid.ny) + 1
        rounds = 0
        while True:
            active = frozenset(w.wid for w in self.workers if w.is_active)
            if not active:
                return rounds
            if rounds > limit:
                raise ExpansionError(f"Zones {sorted(active)} kept expanding past the grid")
            logger.debug("Layer round %d, active zones %s", rounds, sorted(active))
            self.step(Phase.LAYER_POINTS, RoundContext(rounds, active))
            rounds += 1

    def _second_page_sizes(self) -> dict[str, int]:
        sizes: dict[str, int] = {}
        for q in ROWS:
            page = self.workers[coordinator(q, len(self.workers))].second(q)
            if page is not None:
                sizes.update((name, len(bars)) for name, bars in page.barcodes().items())
        return sizes

    def run(self, points: Mapping[int, Point2]) -> RunResult:
        """Compute the barcodes of ``points``.

        Raises:
            CollapseError: If the collapse check fails; ``partial`` holds the
                second-page barcodes of both rows
            GridPersistError: On any other failure of the protocol
        """
        self.workers[0].load(points, self.config.grid)
        self.step(Phase.POINT_DISTRIBUTION)
        rounds = self.expand()
        for phase in _AFTER_EXPANSION:
            try:
                self.step(phase)
            except CollapseError as exc:
                head = self.workers[coordinator(0, len(self.workers))].second(0)
                if head is not None:
                    exc.partial.update(head.barcodes())
                raise
        gatherer = self.workers[coordinator(0, len(self.workers))]
        if gatherer.barcodes is None:
            raise InconsistencyError("The run finished without a final barcode")
        stats = {
            "points": len(points),
            "workers": len(self.workers),
            "rounds": rounds,
            "zone_rounds": [w.rounds for w in self.workers],
            "messages": self.network.sent,
            "withheld": sum(len(g) for w in self.workers for g in w.withheld.values()),
            "disconnected": [w.wid for w in self.workers if not w.connected],
            "e2_bars": self._second_page_sizes(),
        }
        logger.info(
            "Run finished: %d bars in degree 0, %d in degree 1",
            len(gatherer.barcodes.get(0, [])),
            len(gatherer.barcodes.get(1, [])),
        )
        return RunResult(gatherer.barcodes, gatherer.localized, dict(self.timings), stats)


def run(points: Mapping[int, Point2], config: RunConfig | None = None) -> RunResult:
    """Distributed barcodes of a planar point set in degrees 0 and 1."""
    return Scheduler(config or RunConfig()).run(points)
