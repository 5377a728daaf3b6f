"""Multiprocessor reservation timeline.

`SystemTimeline` is an immutable value: every mutating operation returns a
new instance and leaves the receiver untouched, so a failed admission can
simply keep the old value.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from ftrt.lib.errors import ReservationConflict, ReservationNotFound, InvalidParamsError
from .interval import CopyKind, Interval, Reservation
from .processor import ProcessorTimeline, free_gaps
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple
    from ftrt.api.model import TaskSpec
    Placement = Tuple[int, Interval]


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SystemTimeline:
    """One `ProcessorTimeline` per processor, ids 1..P.

    Attributes:
        processors (Tuple[ProcessorTimeline, ...]): Per-processor state.
        promoted (FrozenSet[int]): Tasks whose backup has been activated.
            A promoted backup is mandatory work and may not be shared.
    """
    processors: Tuple[ProcessorTimeline, ...]
    promoted: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def create(cls, count: int) -> 'SystemTimeline':
        if count < 1:
            raise InvalidParamsError(f"Processor count must be >= 1 (got {count})")
        return cls(processors=tuple(ProcessorTimeline(p) for p in range(1, count + 1)))

    @property
    def count(self) -> int:
        return len(self.processors)

    def processor(self, proc: int) -> ProcessorTimeline:
        if not 1 <= proc <= self.count:
            raise ReservationConflict('UnknownProcessor', f"P{proc}")
        return self.processors[proc - 1]

    @property
    def live(self) -> List[ProcessorTimeline]:
        return [p for p in self.processors if not p.failed]

    @cached_property
    def _index(self) -> Dict[Tuple[int, CopyKind], Reservation]:
        return {res.key: res for res in self.reservations()}

    def reservations(self) -> Iterator[Reservation]:
        for proc in self.processors:
            yield from proc.reservations

    def find(self, task: int, kind: CopyKind) -> Optional[Reservation]:
        return self._index.get((task, kind))

    def primary_of(self, task: int) -> Optional[Reservation]:
        return self._index.get((task, CopyKind.PRIMARY))

    def backup_of(self, task: int) -> Optional[Reservation]:
        return self._index.get((task, CopyKind.BACKUP))

    def _with_processor(self, proc: ProcessorTimeline, **changes) -> 'SystemTimeline':
        procs = list(self.processors)
        procs[proc.processor - 1] = proc
        return replace(self, processors=tuple(procs), **changes)

    def _exclusive(self, res: Reservation) -> bool:
        return res.kind is CopyKind.PRIMARY or res.task in self.promoted

    def _shareable_with(self, res: Reservation, primary_proc: int) -> bool:
        """Whether a backup whose primary runs on `primary_proc` may overlap `res`."""
        if self._exclusive(res):
            return False
        owner = self.primary_of(res.task)
        return owner is not None and owner.processor != primary_proc

    def reserve(self, res: Reservation) -> 'SystemTimeline':
        """Return a timeline that also holds `res`.

        Raises:
            ReservationConflict: `kind` names the first broken rule.
        """
        proc = self.processor(res.processor)
        if proc.failed:
            raise ReservationConflict('FailedProcessor', res)
        existing = self.find(res.task, res.kind)
        if existing is not None:
            raise ReservationConflict('DuplicateReservation', res, [existing])
        primary = None
        if res.kind is CopyKind.BACKUP:
            primary = self.primary_of(res.task)
            if primary is None:
                raise ReservationConflict('MissingPrimary', res)
            if primary.processor == res.processor:
                raise ReservationConflict('SpaceExclusion', res, [primary])
            if res.start < primary.end:
                raise ReservationConflict('TimeExclusion', res, [primary])
        for other in proc.overlapping(res.interval):
            if res.kind is CopyKind.PRIMARY or self._exclusive(other):
                raise ReservationConflict('PrimaryOverlap', res, [other])
            if not self._shareable_with(other, primary.processor):
                raise ReservationConflict('ForbiddenOverload', res, [other])
        return self._with_processor(proc.with_reservation(res))

    def release(self, task: int, kind: CopyKind) -> 'SystemTimeline':
        res = self.find(task, kind)
        if res is None:
            raise ReservationNotFound(task, kind.value)
        return self._with_processor(self.processor(res.processor).without(res))

    def find_primary_slot(self, r: int, d: int, c: int) -> Optional[Placement]:
        """Earliest-start free slot of length `c` inside [r, d), lowest processor on ties."""
        if d - r < c:
            return None
        window = Interval(r, d)
        best = None
        for proc in self.live:
            for gap in proc.gaps(window):
                if gap.length >= c:
                    key = (gap.start, proc.processor)
                    if best is None or key < best:
                        best = key
                    break
        if best is None:
            return None
        start, p = best
        return p, Interval(start, start + c)

    def find_latest_backup_slot(self, window: Interval, c: int,
                                excluded_proc: int) -> Optional[Placement]:
        """Latest-start free slot of length `c` inside `window`, off `excluded_proc`."""
        if window.length < c:
            return None
        best = None
        for proc in self.live:
            if proc.processor == excluded_proc:
                continue
            for gap in reversed(proc.gaps(window)):
                if gap.length >= c:
                    key = (-(gap.end - c), proc.processor)
                    if best is None or key < best:
                        best = key
                    break
        if best is None:
            return None
        neg_start, p = best
        return p, Interval(-neg_start, -neg_start + c)

    def find_overload_slot(self, task: TaskSpec, primary_proc: int,
                           window: Interval, c: int) -> Optional[Placement]:
        """Slot of length `c` that shares time with existing backups.

        Candidates overlap at least one backup, overlap nothing exclusive and
        only share with backups whose primaries are off `primary_proc`.
        Ranked by total shared time, then latest start, then lowest task id
        among the shared backups, then lowest processor.
        """
        if window.length < c:
            return None
        best = None
        for proc in self.live:
            if proc.processor == primary_proc:
                continue
            shareable, blocked = [], []
            for res in proc.overlapping(window):
                if res.task != task.id and self._shareable_with(res, primary_proc):
                    shareable.append(res)
                else:
                    blocked.append(res.interval)
            if not shareable:
                continue
            for gap in free_gaps(blocked, window.start, window.end):
                for start in range(gap.start, gap.end - c + 1):
                    slot = Interval(start, start + c)
                    shared = [b for b in shareable if b.interval.overlaps(slot)]
                    if not shared:
                        continue
                    total = sum(b.interval.overlap(slot) for b in shared)
                    key = (-total, -start, min(b.task for b in shared), proc.processor)
                    if best is None or key < best[0]:
                        best = (key, proc.processor, slot)
        if best is None:
            return None
        return best[1], best[2]

    def mark_failed(self, proc: int, t: int, recover_at: Optional[int] = None) -> 'SystemTimeline':
        target = self.processor(proc)
        return self._with_processor(replace(target, failed=True, failed_at=t, recover_at=recover_at))

    def mark_recovered(self, proc: int) -> 'SystemTimeline':
        target = self.processor(proc)
        return self._with_processor(replace(target, failed=False, failed_at=None, recover_at=None))

    def promote(self, task: int) -> 'SystemTimeline':
        return replace(self, promoted=self.promoted | {task})

    def prune(self, t: int) -> 'SystemTimeline':
        """Drop reservations that ended at or before `t`."""
        procs = tuple(p.pruned(t) for p in self.processors)
        if all(a is b for a, b in zip(procs, self.processors)):
            return self
        pruned = replace(self, processors=procs)
        live_tasks = {res.task for res in pruned.reservations()}
        return replace(pruned, promoted=frozenset(self.promoted & live_tasks))
