"""Run metrics, recomputed from a trace alone."""

from __future__ import annotations
import numpy as np
from dataclasses import dataclass, asdict, fields
from ftrt.lib.errors import MalformedTraceError
from ftrt.api.timeline import CopyKind
from .trace import EventKind
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List, Tuple
    from ftrt.api.timeline import Interval
    from .trace import TraceEvent


@dataclass(frozen=True)
class Metrics:
    """Counters and ratios of one run.

    Attributes:
        processors (int): Processor count (BEGIN events).
        horizon (int): Instant of the END event.
        arrived (int): ARRIVE events.
        committed (int): COMMIT events.
        rejected (int): REJECT events.
        guarantee_ratio (float): committed / arrived, 0 when nothing arrived.
        busy_time (int): Slot-units actually executed, killed work included up to the crash.
        utilization (float): busy_time / (processors * horizon).
        backup_demand (int): Slot-units of every backup reservation made, re-placements included.
        reserved_backup_time (int): backup_demand minus the units a new backup shared with
            backups still live on its processor.
        backup_slots_saved (int): backup_demand - reserved_backup_time.
        overload_savings (int): Distinct (processor, slot) cells held by two or more live backups at once.
        reclaimed_backup_time (int): Slot-units of deallocated backups.
        misses (int): MISS events.
        promotions (int): PROMOTE events.
        backup_completions (int): Tasks completed by their backup.
        overloaded_commits (int): COMMIT events whose backup shares a slot.
        warnings (int): WARN events.
    """
    processors: int = 0
    horizon: int = 0
    arrived: int = 0
    committed: int = 0
    rejected: int = 0
    guarantee_ratio: float = 0.0
    busy_time: int = 0
    utilization: float = 0.0
    backup_demand: int = 0
    reserved_backup_time: int = 0
    backup_slots_saved: int = 0
    overload_savings: int = 0
    reclaimed_backup_time: int = 0
    misses: int = 0
    promotions: int = 0
    backup_completions: int = 0
    overloaded_commits: int = 0
    warnings: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'Metrics':
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


_RELEASING_NOTES = ('unplaced', 'backup_conflict', 'backup_lost')


def _replay_backups(ops: List[Tuple[int, int, Interval]], processors: int, horizon: int) -> Tuple[int, int]:
    """Replay backup holds and releases on a (processor, slot) count grid.

    Args:
        ops: (+1 or -1, processor, slot) in trace order.

    Returns:
        Units a new backup shared with live ones, and the number of cells
        ever held by two or more live backups.
    """
    width = max([horizon] + [iv.end for _, _, iv in ops])
    live = np.zeros((max(processors, 1), max(width, 1)), dtype=np.int32)
    doubled = np.zeros(live.shape, dtype=bool)
    shared_units = 0
    for sign, proc, iv in ops:
        if not 1 <= proc <= live.shape[0]:
            raise MalformedTraceError(f"backup slot on unknown processor {proc}")
        cells = live[proc - 1, iv.start:iv.end]
        if sign > 0:
            shared_units += int(np.count_nonzero(cells))
            cells += 1
            doubled[proc - 1, iv.start:iv.end] |= cells >= 2
        else:
            cells -= 1
    return shared_units, int(np.count_nonzero(doubled))


def compute_metrics(trace: List[TraceEvent]) -> Metrics:
    """Count everything `Metrics` holds from the events of one run.

    A backup is live from its RESERVE or REPLACE until it is deallocated,
    moved, cancelled, lost or completed.

    Raises:
        MalformedTraceError: If a slot-carrying event has no slot or a
            deallocation refers to an unknown backup.
    """
    counts: Dict[EventKind, int] = {kind: 0 for kind in EventKind}
    horizon = 0
    busy = 0
    running: Dict[int, int] = {}
    ops: List[Tuple[int, int, Interval]] = []
    live: Dict[int, Tuple[int, Interval]] = {}
    demand = 0
    reclaimed = 0
    backup_completions = 0
    overloaded = 0

    def release(task):
        if task in live:
            proc, slot = live.pop(task)
            ops.append((-1, proc, slot))

    for event in trace:
        counts[event.kind] += 1
        kind = event.kind
        if kind is EventKind.END:
            horizon = event.t
        elif kind is EventKind.START:
            running[event.proc] = event.t
        elif kind is EventKind.COMPLETE:
            if event.proc in running:
                busy += event.t - running.pop(event.proc)
            if event.copy is CopyKind.BACKUP:
                backup_completions += 1
                release(event.task)
        elif kind is EventKind.CRASH:
            if event.proc in running:
                busy += event.t - running.pop(event.proc)
        elif kind in (EventKind.RESERVE, EventKind.REPLACE):
            if event.slot is None:
                raise MalformedTraceError(f"{kind.value} without a slot at t={event.t}")
            if event.copy is CopyKind.BACKUP:
                release(event.task)
                live[event.task] = (event.proc, event.slot)
                ops.append((1, event.proc, event.slot))
                demand += event.slot.length
        elif kind is EventKind.DEALLOC:
            if event.task not in live:
                raise MalformedTraceError(f"DEALLOC of task {event.task} that holds no backup")
            reclaimed += live[event.task][1].length
            release(event.task)
        elif kind is EventKind.WARN and event.note in _RELEASING_NOTES:
            release(event.task)
        elif kind is EventKind.COMMIT and event.note == 'overloaded':
            overloaded += 1

    processors = counts[EventKind.BEGIN]
    arrived = counts[EventKind.ARRIVE]
    committed = counts[EventKind.COMMIT]
    shared_units, doubled = _replay_backups(ops, processors, horizon) if ops else (0, 0)
    capacity = processors * horizon
    return Metrics(processors=processors,
                   horizon=horizon,
                   arrived=arrived,
                   committed=committed,
                   rejected=counts[EventKind.REJECT],
                   guarantee_ratio=committed / arrived if arrived else 0.0,
                   busy_time=busy,
                   utilization=busy / capacity if capacity else 0.0,
                   backup_demand=demand,
                   reserved_backup_time=demand - shared_units,
                   backup_slots_saved=shared_units,
                   overload_savings=doubled,
                   reclaimed_backup_time=reclaimed,
                   misses=counts[EventKind.MISS],
                   promotions=counts[EventKind.PROMOTE],
                   backup_completions=backup_completions,
                   overloaded_commits=overloaded,
                   warnings=counts[EventKind.WARN])
