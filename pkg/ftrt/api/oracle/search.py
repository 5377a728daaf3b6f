"""Exhaustive primary/backup placement for small instances."""

from __future__ import annotations
import logging
from fractions import Fraction
from ftrt import get_setting
from ftrt.lib.errors import OracleCapExceeded
from ftrt.api.timeline.interval import CopyKind, Interval, Reservation
from .checker import Schedule, verify_schedule, expected_backup_length
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List, Optional, Tuple
    from ftrt.api.model import TaskSpec


logger = logging.getLogger(__name__)


def _check_caps(tasks: List[TaskSpec], processors: int, horizon: int) -> None:
    caps = get_setting('oracle')
    if len(tasks) > caps['max_tasks']:
        raise OracleCapExceeded(f"{len(tasks)} tasks exceed the exhaustive cap of {caps['max_tasks']}")
    if processors > caps['max_processors']:
        raise OracleCapExceeded(f"{processors} processors exceed the exhaustive cap of {caps['max_processors']}")
    if horizon > caps['max_horizon']:
        raise OracleCapExceeded(f"horizon {horizon} exceeds the exhaustive cap of {caps['max_horizon']}")


class _Occupancy:
    """Per-processor map of slot -> (task, kind) entries placed so far."""

    def __init__(self, processors: int):
        self.cells: Dict[int, Dict[int, List[Tuple[int, CopyKind]]]] = {
            p: {} for p in range(1, processors + 1)}
        self.primary_proc: Dict[int, int] = {}

    def primary_fits(self, proc: int, start: int, end: int) -> bool:
        row = self.cells[proc]
        return all(not row.get(s) for s in range(start, end))

    def backup_fits(self, task: int, proc: int, start: int, end: int) -> bool:
        own = self.primary_proc[task]
        row = self.cells[proc]
        for s in range(start, end):
            for other, kind in row.get(s, ()):
                if kind is CopyKind.PRIMARY or self.primary_proc[other] == own:
                    return False
        return True

    def place(self, res: Reservation) -> None:
        row = self.cells[res.processor]
        for s in range(res.start, res.end):
            row.setdefault(s, []).append((res.task, res.kind))
        if res.kind is CopyKind.PRIMARY:
            self.primary_proc[res.task] = res.processor

    def remove(self, res: Reservation) -> None:
        row = self.cells[res.processor]
        for s in range(res.start, res.end):
            row[s].remove((res.task, res.kind))
        if res.kind is CopyKind.PRIMARY:
            del self.primary_proc[res.task]


def brute_force_feasible(tasks: List[TaskSpec], processors: int, horizon: int,
                         backup_scale: Fraction = Fraction(1)) -> Optional[Schedule]:
    """Search every (processor, start) for each primary and backup.

    Tasks are placed in EDF order; the first complete placement that passes
    `verify_schedule` is returned as the witness.

    Returns:
        A witness schedule committing every task, or None if none exists.

    Raises:
        OracleCapExceeded: Beyond the configured `oracle` caps.
    """
    tasks = list(tasks)
    _check_caps(tasks, processors, horizon)
    ordered = sorted(tasks, key=lambda t: (t.d, t.id))
    occupancy = _Occupancy(processors)
    placed: List[Reservation] = []
    explored = 0

    def candidates(task: TaskSpec, kind: CopyKind, length: int, lo: int, exclude: Optional[int]):
        hi = min(task.d, horizon)
        for proc in range(1, processors + 1):
            if proc == exclude:
                continue
            for start in range(lo, hi - length + 1):
                yield Reservation(task.id, kind, proc, Interval(start, start + length))

    def search(i: int) -> bool:
        nonlocal explored
        explored += 1
        if i == len(ordered):
            return not verify_schedule(tasks, placed, processors, backup_scale)
        task = ordered[i]
        for pri in candidates(task, CopyKind.PRIMARY, task.c, task.r, None):
            if not occupancy.primary_fits(pri.processor, pri.start, pri.end):
                continue
            occupancy.place(pri)
            placed.append(pri)
            length = expected_backup_length(task.c, backup_scale)
            for bk in candidates(task, CopyKind.BACKUP, length, pri.end, pri.processor):
                if not occupancy.backup_fits(task.id, bk.processor, bk.start, bk.end):
                    continue
                occupancy.place(bk)
                placed.append(bk)
                if search(i + 1):
                    return True
                placed.pop()
                occupancy.remove(bk)
            placed.pop()
            occupancy.remove(pri)
        return False

    found = search(0)
    logger.debug("exhaustive search over %d task(s) visited %d node(s): %s",
                 len(tasks), explored, "feasible" if found else "infeasible")
    if not found:
        return None
    return Schedule(tasks=tasks, reservations=list(placed), processors=processors, backup_scale=backup_scale)
