"""Ordered per-pair channels between in-process workers."""

from __future__ import annotations

import logging
from collections import deque

import numpy as np

from gridpersist.errors import ProtocolError
from gridpersist.runtime.messages import Phase, WorkerMessage

logger = logging.getLogger(__name__)

Channel = tuple[int, int]


class Network:
    """Message transport for one run.

    Each sender-receiver pair has a FIFO channel. With a seed, delivery
    interleaves channels in a random order while keeping each channel's own
    order, which is how tests shake out scheduling assumptions.

    Args:
        workers: Number of workers
        seed: Seed of the delivery fuzzer, None for a fixed order
    """

    def __init__(self, workers: int, seed: int | None = None):
        self.workers = workers
        self.phase: Phase | None = None
        self.sent = 0
        self._rng = np.random.default_rng(seed) if seed is not None else None
        self._channels: dict[Channel, deque[WorkerMessage]] = {}
        self._last_received: dict[int, Phase] = {}

    def open(self, phase: Phase) -> None:
        """Start accepting messages of ``phase``.

        Raises:
            ProtocolError: If phases go backwards or messages are still pending
        """
        if self.phase is not None and phase < self.phase:
            raise ProtocolError(f"Cannot reopen {phase.label} after {self.phase.label}")
        if self.pending:
            raise ProtocolError(f"{self.pending} messages of {self.phase} were never delivered")
        self.phase = phase

    @property
    def pending(self) -> int:
        return sum(len(q) for q in self._channels.values())

    def send(self, message: WorkerMessage) -> None:
        """Queue a message on its channel.

        Raises:
            ProtocolError: If the phase is not open or an endpoint is unknown
        """
        if message.phase != self.phase:
            raise ProtocolError(
                f"Worker {message.sender} sent a {message.phase.label} message during "
                f"{self.phase.label if self.phase else 'no phase'}"
            )
        for end in (message.sender, message.receiver):
            if not 0 <= end < self.workers:
                raise ProtocolError(f"Unknown worker {end} on a {message.phase.label} message")
        self._channels.setdefault((message.sender, message.receiver), deque()).append(message)
        self.sent += 1

    def deliver(self) -> dict[int, list[WorkerMessage]]:
        """Drain every channel into per-receiver inboxes."""
        inboxes: dict[int, list[WorkerMessage]] = {w: [] for w in range(self.workers)}
        live = sorted(c for c, q in self._channels.items() if q)
        while live:
            pick = int(self._rng.integers(len(live))) if self._rng is not None else 0
            channel = live[pick]
            message = self._channels[channel].popleft()
            if not self._channels[channel]:
                live.pop(pick)
            last = self._last_received.get(message.receiver)
            if last is not None and message.phase < last:
                raise ProtocolError(
                    f"Worker {message.receiver} got {message.phase.label} after {last.label}"
                )
            self._last_received[message.receiver] = message.phase
            inboxes[message.receiver].append(message)
        logger.debug(
            "Delivered %s: %d messages",
            self.phase.label if self.phase else "-",
            sum(len(box) for box in inboxes.values()),
        )
        return inboxes
