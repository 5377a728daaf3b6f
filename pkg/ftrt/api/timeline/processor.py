from __future__ import annotations
from dataclasses import dataclass, replace
from .interval import Interval
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Iterable, List, Optional, Tuple
    from .interval import Reservation, CopyKind


def free_gaps(busy: Iterable[Interval], lo: int, hi: int) -> List[Interval]:
    """Maximal sub-intervals of [lo, hi) covered by none of `busy`."""
    gaps = []
    cursor = lo
    for iv in sorted(busy):
        if iv.end <= cursor:
            continue
        if iv.start >= hi:
            break
        if iv.start > cursor:
            gaps.append(Interval(cursor, iv.start))
        cursor = max(cursor, iv.end)
        if cursor >= hi:
            break
    if cursor < hi:
        gaps.append(Interval(cursor, hi))
    return gaps


def _order(res: Reservation):
    return (res.start, res.end, res.kind.value, res.task)


@dataclass(frozen=True)
class ProcessorTimeline:
    """Ordered reservations of one processor plus its failure status.

    Attributes:
        processor (int): 1-based processor id.
        reservations (Tuple[Reservation, ...]): Sorted by start time.
        failed (bool): Whether the processor is currently down.
        failed_at (Optional[int]): Crash instant of the current outage.
        recover_at (Optional[int]): Scheduled recovery for non-permanent faults.
    """
    processor: int
    reservations: Tuple[Reservation, ...] = ()
    failed: bool = False
    failed_at: Optional[int] = None
    recover_at: Optional[int] = None

    def overlapping(self, interval: Interval) -> List[Reservation]:
        found = []
        for res in self.reservations:
            if res.start >= interval.end:
                break
            if res.interval.overlaps(interval):
                found.append(res)
        return found

    def find(self, task: int, kind: CopyKind) -> Optional[Reservation]:
        for res in self.reservations:
            if res.task == task and res.kind is kind:
                return res
        return None

    def gaps(self, window: Interval) -> List[Interval]:
        return free_gaps((r.interval for r in self.reservations), window.start, window.end)

    def with_reservation(self, res: Reservation) -> 'ProcessorTimeline':
        return replace(self, reservations=tuple(sorted(self.reservations + (res,), key=_order)))

    def without(self, res: Reservation) -> 'ProcessorTimeline':
        return replace(self, reservations=tuple(r for r in self.reservations if r != res))

    def pruned(self, t: int) -> 'ProcessorTimeline':
        kept = tuple(r for r in self.reservations if r.end > t)
        if len(kept) == len(self.reservations):
            return self
        return replace(self, reservations=kept)
