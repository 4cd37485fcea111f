"""One worker of the distributed run: its zone state and per-phase handlers."""

from __future__ import annotations

import logging
from collections.abc import Callable, Hashable, Mapping, Sequence
from dataclasses import dataclass, field

from gridpersist.alpha import (
    Edge,
    FilteredComplex2D,
    intersection_alpha_and_critical,
    local_alpha_with_list,
    reconcile,
)
from gridpersist.barcode_algebra import BasisElement, Interval
from gridpersist.config import GridConfig
from gridpersist.cover import (
    GridSpec,
    IntersectionComplex,
    NerveComplex,
    SubcomplexK,
    ZoneExpansion,
    Zones,
    compute_grid,
    is_connected,
    patch_intersections,
    preliminary_intersections,
)
from gridpersist.errors import DuplicatePointError, ProtocolError
from gridpersist.geometry import Point2
from gridpersist.runtime.entries import Barcodes, LocalizedInterval, apply_optimised_entries, gather
from gridpersist.runtime.messages import (
    BarcodePayload,
    CriticalPayload,
    E2Payload,
    FinalPayload,
    LayerPayload,
    LiftPayload,
    Phase,
    PointsPayload,
    TriplesPayload,
    WithheldPayload,
    WorkerMessage,
)
from gridpersist.spectral import (
    ROWS,
    FirstPage,
    GenKey,
    InclusionBlock,
    LiftRequest,
    SecondPage,
    assemble_first_page,
    collapse_check,
    extension_matrix,
    inclusion_block,
    lift_for_zone,
    lift_requests,
    local_barcode,
    second_page,
    solve_extension,
)
from gridpersist.z2matrix import PersistenceData, persistence_with_representatives

logger = logging.getLogger(__name__)

Inbox = Sequence[WorkerMessage]


def coordinator(row: int, workers: int) -> int:
    """Worker assembling a row of the spectral sequence."""
    return min(row, workers - 1)


@dataclass(frozen=True)
class RoundContext:
    """Scheduler state handed to the point-layer phase.

    Attributes:
        round: Expansion round being run
        active: Zones that still need another ring of points
    """

    round: int = 0
    active: frozenset[int] = frozenset()


@dataclass
class RowState:
    """What a row coordinator accumulates."""

    owned: list[Zones] = field(default_factory=list)
    barcodes: dict[tuple[Zones, int], list[BasisElement]] = field(default_factory=dict)
    blocks: list[InclusionBlock] = field(default_factory=list)
    withheld_infinite: list[BasisElement] = field(default_factory=list)
    first: FirstPage | None = None
    second: SecondPage | None = None


class Worker:
    """State and phase handlers of the worker for one zone.

    Every phase is split in two: ``emit`` returns the messages the worker
    sends, ``absorb`` consumes its inbox once every channel has been drained.
    Workers 0 and ``min(1, M-1)`` additionally coordinate rows 0 and 1.

    Args:
        wid: Worker id, equal to its zone id
        workers: Number of workers in the run
        optimised_entries: Withhold generators that enter no differential
    """

    def __init__(self, wid: int, workers: int, optimised_entries: bool = True):
        self.wid = wid
        self.workers = workers
        self.optimised_entries = optimised_entries
        self.input: dict[int, Point2] | None = None
        self.grid_config: GridConfig | None = None

        self.grid: GridSpec | None = None
        self.own: dict[int, Point2] = {}
        self.own_cells: dict[tuple[int, int], list[int]] = {}
        self.expansion: ZoneExpansion | None = None
        self.subcomplex: SubcomplexK | None = None
        self.connected = True
        self.pairs: dict[Zones, set[tuple[int, ...]]] = {}
        self.triples: dict[Zones, set[tuple[int, ...]]] = {}
        self.intersections: dict[Zones, IntersectionComplex] = {}
        self.complexes: dict[Zones, FilteredComplex2D] = {}
        self.critical: dict[Edge, float] = {}
        self.local: dict[Zones, PersistenceData] = {}
        self.withheld: dict[int, list[BasisElement]] = {q: [] for q in ROWS}
        self.requests: list[LiftRequest] = []
        self.shipped_with_lifts: set[GenKey] = set()

        self.rows: dict[int, RowState] = {
            q: RowState() for q in ROWS if coordinator(q, workers) == wid
        }
        self.classes: list[BasisElement] = []
        self.lifted: dict[Hashable, frozenset[GenKey]] = {}
        self.lifted_withheld: dict[GenKey, Interval] = {}
        self.extension: list[BasisElement] = []
        self.withheld_streams: dict[int, Mapping[int, Sequence[BasisElement]]] = {}
        self.barcodes: Barcodes | None = None
        self.localized: list[LocalizedInterval] = []

    def load(self, points: Mapping[int, Point2], grid: GridConfig) -> None:
        """Hand the input to the worker that distributes it."""
        self.input = dict(points)
        self.grid_config = grid

    @property
    def is_active(self) -> bool:
        return self.expansion is not None and self.expansion.needs_expansion()

    @property
    def rounds(self) -> int:
        return self.expansion.rounds if self.expansion is not None else 0

    def second(self, row: int) -> SecondPage | None:
        state = self.rows.get(row)
        return state.second if state is not None else None

    def _send(self, phase: Phase, receiver: int, payload: object) -> WorkerMessage:
        return WorkerMessage(phase, self.wid, receiver, payload)

    def emit(self, phase: Phase, context: RoundContext | None = None) -> list[WorkerMessage]:
        """Messages this worker sends in ``phase``."""
        handler: Callable[..., list[WorkerMessage]] = getattr(self, f"_emit_{phase.name.lower()}")
        return handler(context or RoundContext())

    def absorb(self, phase: Phase, inbox: Inbox, context: RoundContext | None = None) -> None:
        """Consume the inbox of ``phase``, ordered by sender.

        Raises:
            ProtocolError: If a message belongs to another phase
        """
        for message in inbox:
            if message.phase != phase or message.receiver != self.wid:
                raise ProtocolError(
                    f"Worker {self.wid} got {message.phase.label} for {message.receiver} "
                    f"during {phase.label}"
                )
        ordered = sorted(inbox, key=lambda m: m.sender)
        handler: Callable[..., None] = getattr(self, f"_absorb_{phase.name.lower()}")
        handler(ordered, context or RoundContext())

    # Point distribution

    def _emit_point_distribution(self, _: RoundContext) -> list[WorkerMessage]:
        if self.input is None:
            return []
        grid_config = self.grid_config or GridConfig()
        seen: dict[tuple[float, float], int] = {}
        for pid, p in sorted(self.input.items()):
            first = seen.setdefault((p.x, p.y), pid)
            if first != pid:
                raise DuplicatePointError(first, pid, p.x, p.y)
        _, grid, assignment = compute_grid(
            self.input, grid_config.m1, grid_config.m2, grid_config.density
        )
        logger.info(
            "Distributing %d points over %d zones", len(self.input), len(assignment.zones)
        )
        return [
            self._send(
                Phase.POINT_DISTRIBUTION,
                zone,
                PointsPayload(grid, {pid: self.input[pid] for pid in sorted(ids)}),
            )
            for zone, ids in enumerate(assignment.zones)
        ]

    def _absorb_point_distribution(self, inbox: Inbox, _: RoundContext) -> None:
        if len(inbox) != 1 or inbox[0].sender != 0:
            raise ProtocolError(f"Worker {self.wid} expected its points from worker 0")
        payload: PointsPayload = inbox[0].payload
        self.grid = payload.grid
        self.own = dict(payload.points)
        for pid, p in self.own.items():
            self.own_cells.setdefault(self.grid.cell_of(p), []).append(pid)
        self.expansion = ZoneExpansion(self.wid, self.grid, self.own)
        logger.debug("Worker %d owns %d points", self.wid, len(self.own))

    # Expansion rounds

    def _emit_layer_points(self, context: RoundContext) -> list[WorkerMessage]:
        if self.grid is None:
            raise ProtocolError(f"Worker {self.wid} has no grid yet")
        out = []
        for zone in sorted(context.active - {self.wid}):
            ring = self.grid.ring(zone, context.round)
            cells = sorted(c for c in ring if c in self.own_cells)
            points = {pid: self.own[pid] for c in cells for pid in self.own_cells[c]}
            if points:
                out.append(self._send(Phase.LAYER_POINTS, zone, LayerPayload(context.round, points)))
        return out

    def _absorb_layer_points(self, inbox: Inbox, context: RoundContext) -> None:
        if self.wid not in context.active:
            if inbox:
                raise ProtocolError(f"Worker {self.wid} got points while stable")
            return
        assert self.expansion is not None
        layer: dict[int, Point2] = {}
        for message in inbox:
            payload: LayerPayload = message.payload
            if payload.round != context.round:
                raise ProtocolError(
                    f"Worker {self.wid} got round {payload.round} points during {context.round}"
                )
            layer.update(payload.points)
        self.expansion.absorb(layer)

    # Intersections

    def _emit_triple_intersection_share(self, _: RoundContext) -> list[WorkerMessage]:
        assert self.expansion is not None and self.grid is not None
        k = self.expansion.subcomplex()
        self.subcomplex = k
        if k.simplices and not is_connected(k.simplices):
            self.connected = False
            logger.warning("Subcomplex of zone %d is not connected", self.wid)
        logger.debug(
            "Zone %d stable after %d rounds with %d simplices",
            self.wid, k.rounds, len(k.simplices),
        )
        self.pairs, self.triples = preliminary_intersections(k, self.grid)
        outgoing: dict[int, list[tuple[Zones, frozenset[tuple[int, ...]]]]] = {}
        for zones, simplices in sorted(self.triples.items()):
            for member in zones:
                if member != self.wid:
                    outgoing.setdefault(member, []).append((zones, frozenset(simplices)))
        return [
            self._send(Phase.TRIPLE_INTERSECTION_SHARE, member, TriplesPayload(triples))
            for member, triples in sorted(outgoing.items())
        ]

    def _absorb_triple_intersection_share(self, inbox: Inbox, _: RoundContext) -> None:
        shared = [(zones, frozenset(s)) for zones, s in self.triples.items()]
        for message in inbox:
            payload: TriplesPayload = message.payload
            shared.extend(payload.triples)
        pairwise, triples = patch_intersections(self.wid, self.pairs, shared)
        self.intersections = {inter.zones: inter for inter in [*pairwise, *triples]}

    # Filtration values

    def _emit_critical_non_gabriel(self, _: RoundContext) -> list[WorkerMessage]:
        assert self.subcomplex is not None
        k = self.subcomplex
        if not k.simplices:
            return []
        fc, non_gabriel = local_alpha_with_list(k.simplices, k.points)
        self.complexes = {(self.wid,): fc}
        for zones, inter in sorted(self.intersections.items()):
            fc_sigma, critical = intersection_alpha_and_critical(inter.simplices, k.points, non_gabriel)
            self.complexes[zones] = fc_sigma
            self.critical.update(critical)
        if not self.critical:
            return []
        neighbours = sorted({z for zones in self.intersections for z in zones} - {self.wid})
        return [
            self._send(Phase.CRITICAL_NON_GABRIEL, n, CriticalPayload(dict(self.critical)))
            for n in neighbours
        ]

    def _absorb_critical_non_gabriel(self, inbox: Inbox, _: RoundContext) -> None:
        lists = [self.critical, *(m.payload.critical for m in inbox)]
        changed = reconcile(self.complexes.values(), lists)
        if changed:
            logger.debug("Zone %d reconciled %d filtration values", self.wid, changed)

    # First page

    def _emit_barcode_and_matrices(self, _: RoundContext) -> list[WorkerMessage]:
        self.local = {
            zones: persistence_with_representatives(fc) for zones, fc in sorted(self.complexes.items())
        }
        owned = [zones for zones in self.local if zones[0] == self.wid]
        out = []
        for q in ROWS:
            barcodes = {zones: local_barcode(zones, self.local[zones], q) for zones in owned}
            blocks = [
                inclusion_block(tau, sigma, q, self.local[tau], self.local[sigma])
                for tau in owned
                for sigma in self.local
                if len(sigma) == len(tau) + 1 and set(tau) < set(sigma)
            ]
            withheld_infinite: list[BasisElement] = []
            own = (self.wid,)
            if self.optimised_entries and own in barcodes:
                barcodes[own], self.withheld[q] = apply_optimised_entries(
                    barcodes[own], [b for b in blocks if b.tau == own]
                )
                if q == 1:
                    withheld_infinite = [g for g in self.withheld[q] if g.interval.is_infinite]
                logger.debug(
                    "Zone %d withholds %d of its PH_%d generators",
                    self.wid, len(self.withheld[q]), q,
                )
            out.append(
                self._send(
                    Phase.BARCODE_AND_MATRICES,
                    coordinator(q, self.workers),
                    BarcodePayload(q, owned, barcodes, blocks, withheld_infinite),
                )
            )
        return out

    def _absorb_barcode_and_matrices(self, inbox: Inbox, _: RoundContext) -> None:
        for message in inbox:
            payload: BarcodePayload = message.payload
            state = self.rows.get(payload.dim)
            if state is None:
                raise ProtocolError(f"Worker {self.wid} does not coordinate row {payload.dim}")
            state.owned.extend(payload.owned)
            for zones, generators in payload.barcodes.items():
                state.barcodes[(zones, payload.dim)] = list(generators)
            state.blocks.extend(payload.blocks)
            state.withheld_infinite.extend(payload.withheld_infinite)
        for q, state in self.rows.items():
            senders = sum(1 for m in inbox if m.payload.dim == q)
            if senders != self.workers:
                raise ProtocolError(f"Row {q} heard from {senders} of {self.workers} workers")
            nerve = NerveComplex.from_simplices(state.owned)
            state.first = assemble_first_page(nerve, state.barcodes, state.blocks, rows=(q,))
            logger.info(
                "Row %d first page: nerve %s, %d local generators",
                q,
                [len(nerve[d]) for d in range(nerve.dimension + 1)],
                sum(len(g) for g in state.barcodes.values()),
            )

    # Second page

    def _emit_e2_broadcast(self, _: RoundContext) -> list[WorkerMessage]:
        for state in self.rows.values():
            assert state.first is not None
            state.second = second_page(state.first)
        row0 = self.rows.get(0)
        if row0 is None:
            return []
        assert row0.first is not None and row0.second is not None
        requests = lift_requests(row0.first, row0.second)
        classes = row0.second.term(1, 0).generators
        logger.info("E2[1][0] has %d bars, %d to lift", len(classes), len(requests))
        out = []
        for w in range(self.workers):
            restricted = [r for r in (req.restricted(w) for req in requests) if r.chains or r.correction]
            payload = E2Payload(restricted, classes if w == coordinator(1, self.workers) else None)
            out.append(self._send(Phase.E2_BROADCAST, w, payload))
        return out

    def _absorb_e2_broadcast(self, inbox: Inbox, _: RoundContext) -> None:
        if len(inbox) != 1 or inbox[0].sender != coordinator(0, self.workers):
            raise ProtocolError(f"Worker {self.wid} expected one second-page broadcast")
        payload: E2Payload = inbox[0].payload
        self.requests = list(payload.requests)
        if payload.classes is not None:
            self.classes = list(payload.classes)
        row1 = self.rows.get(1)
        if row1 is not None:
            assert row1.second is not None
            collapse_check(row1.second, row1.withheld_infinite)

    # Extension

    def _emit_lift_coordinates(self, _: RoundContext) -> list[WorkerMessage]:
        lifted = lift_for_zone(self.wid, self.requests, self.local) if self.requests else {}
        withheld = {g.key: g.interval for g in self.withheld[1]}
        used = {key for keys in lifted.values() for key in keys if key in withheld}
        self.shipped_with_lifts = used
        return [
            self._send(
                Phase.LIFT_COORDINATES,
                coordinator(1, self.workers),
                LiftPayload(lifted, {key: withheld[key] for key in sorted(used)}),
            )
        ]

    def _absorb_lift_coordinates(self, inbox: Inbox, _: RoundContext) -> None:
        row1 = self.rows.get(1)
        if row1 is None:
            if inbox:
                raise ProtocolError(f"Worker {self.wid} got lifts but does not coordinate row 1")
            return
        for message in inbox:
            payload: LiftPayload = message.payload
            for key, coords in payload.lifted.items():
                self.lifted[key] = self.lifted.get(key, frozenset()) ^ coords
            self.lifted_withheld.update(payload.withheld)
        assert row1.first is not None and row1.second is not None
        data = extension_matrix(row1.first, row1.second, self.classes, self.lifted, self.lifted_withheld)
        self.extension = solve_extension(data)
        logger.info(
            "Extension solved: %d generators in degree 1",
            sum(1 for g in self.extension if not g.interval.is_empty),
        )

    # Output

    def _emit_withheld_intervals(self, _: RoundContext) -> list[WorkerMessage]:
        generators = {
            0: list(self.withheld[0]),
            1: [g for g in self.withheld[1] if g.key not in self.shipped_with_lifts],
        }
        return [
            self._send(
                Phase.WITHHELD_INTERVALS,
                coordinator(0, self.workers),
                WithheldPayload(self.wid, generators),
            )
        ]

    def _absorb_withheld_intervals(self, inbox: Inbox, _: RoundContext) -> None:
        for message in inbox:
            payload: WithheldPayload = message.payload
            self.withheld_streams[payload.zone] = payload.generators

    def _emit_final_barcode(self, _: RoundContext) -> list[WorkerMessage]:
        if 1 not in self.rows:
            return []
        return [
            self._send(
                Phase.FINAL_BARCODE, coordinator(0, self.workers), FinalPayload(1, self.extension)
            )
        ]

    def _absorb_final_barcode(self, inbox: Inbox, _: RoundContext) -> None:
        row0 = self.rows.get(0)
        if row0 is None:
            return
        if len(inbox) != 1:
            raise ProtocolError(f"Worker {self.wid} expected one final degree-1 barcode")
        assert row0.second is not None
        final: FinalPayload = inbox[0].payload
        streams: list[tuple[int, Sequence[BasisElement]]] = [
            (0, row0.second.term(0, 0).generators),
            (final.dim, final.generators),
        ]
        for _zone, generators in sorted(self.withheld_streams.items()):
            streams.extend(generators.items())
        self.barcodes, self.localized = gather(streams)
