"""In-process workers exchanging messages phase by phase."""

from gridpersist.runtime.entries import LocalizedInterval, apply_optimised_entries, gather
from gridpersist.runtime.messages import Phase, WorkerMessage
from gridpersist.runtime.network import Network
from gridpersist.runtime.scheduler import RunResult, Scheduler, run
from gridpersist.runtime.worker import RoundContext, Worker, coordinator

__all__ = [
    "LocalizedInterval",
    "Network",
    "Phase",
    "RoundContext",
    "RunResult",
    "Scheduler",
    "Worker",
    "WorkerMessage",
    "apply_optimised_entries",
    "coordinator",
    "gather",
    "run",
]
