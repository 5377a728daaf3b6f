"""Schedule verifier written against slot cells rather than the timeline code.

Every reservation is expanded into the set of integer slots it covers; two
reservations overlap iff their cell sets on one processor intersect. Only the
plain data types (`Reservation`, `CopyKind`) are shared with the timeline.
"""

from __future__ import annotations
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from ftrt.lib.errors import UnknownTaskError
from ftrt.api.model import TaskSpec
from ftrt.api.timeline.interval import CopyKind, Reservation
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, Iterable, List, Optional, Set, Tuple
    from ftrt.api.engine import SimReport


P, B = CopyKind.PRIMARY, CopyKind.BACKUP


@dataclass(frozen=True)
class Violation:
    """One broken rule, citing the reservations involved.

    `FaultVulnerable` violations also carry the strike (processor, time) and
    the task that would miss its deadline.
    """
    kind: str
    reservations: Tuple[Reservation, ...] = ()
    details: str = ''
    processor: Optional[int] = None
    strike: Optional[int] = None
    victim: Optional[int] = None

    def __str__(self):
        cited = ', '.join(str(r) for r in self.reservations)
        text = f"{self.kind}: {cited}" if cited else self.kind
        return f"{text} ({self.details})" if self.details else text


@dataclass(frozen=True)
class Schedule:
    """A fixed set of reservations for a task set.

    Attributes:
        tasks (List[TaskSpec]): Tasks the reservations may refer to.
        reservations (List[Reservation]): The placed copies.
        processors (int): Processor count.
        backup_scale (Fraction): Expected backup length as a fraction of c.
    """
    tasks: List[TaskSpec]
    reservations: List[Reservation]
    processors: int
    backup_scale: Fraction = field(default=Fraction(1))

    @property
    def horizon(self) -> int:
        ends = [t.d for t in self.tasks] + [r.end for r in self.reservations]
        return max(ends, default=0)

    @classmethod
    def from_report(cls, report: SimReport) -> 'Schedule':
        """The admission-time layout of every committed task of a run.

        Slots of deallocated backups may be reused by later arrivals, so the
        layout is a complete schedule only when all tasks arrive together.
        """
        reservations = []
        for decision in report.decisions:
            if decision.committed:
                reservations.extend(r for r in (decision.primary, decision.backup) if r is not None)
        policy = report.config.get('policy', {})
        return cls(tasks=report.tasks, reservations=reservations, processors=report.processors,
                   backup_scale=Fraction(str(policy.get('backup_scale', 1))))

    def verify(self) -> List[Violation]:
        return verify_schedule(self.tasks, self.reservations, self.processors, self.backup_scale)


def _cells(res: Reservation) -> Set[int]:
    return set(range(res.start, res.end))


def expected_backup_length(c: int, backup_scale: Fraction) -> int:
    return max(1, math.ceil(c * Fraction(backup_scale)))


def _copies(reservations: Iterable[Reservation]) -> Dict[int, Dict[CopyKind, List[Reservation]]]:
    copies: Dict[int, Dict[CopyKind, List[Reservation]]] = defaultdict(lambda: {P: [], B: []})
    for res in reservations:
        copies[res.task][res.kind].append(res)
    return copies


def check_reservations(tasks: Iterable[TaskSpec], reservations: Iterable[Reservation], processors: int,
                       backup_scale: Fraction = Fraction(1), partial: bool = False) -> List[Violation]:
    """Structural checks only: copies, windows, exclusions and overlaps.

    With `partial`, a primary without a backup is not reported, which makes
    the check usable on every prefix of a reservation sequence.

    Raises:
        UnknownTaskError: If a reservation refers to a task not in `tasks`.
    """
    by_id = {t.id: t for t in tasks}
    reservations = list(reservations)
    for res in reservations:
        if res.task not in by_id:
            raise UnknownTaskError(res.task)
    violations: List[Violation] = []
    copies = _copies(reservations)

    for task_id in sorted(copies):
        task = by_id[task_id]
        primaries, backups = copies[task_id][P], copies[task_id][B]
        for kind, found in ((P, primaries), (B, backups)):
            if len(found) > 1:
                violations.append(Violation('DuplicateCopy', tuple(found), f"T{task_id} has {len(found)} {kind.label}"))
        if backups and not primaries:
            violations.append(Violation('MissingCopy', tuple(backups), f"T{task_id} has no primary"))
        if primaries and not backups and not partial:
            violations.append(Violation('MissingCopy', tuple(primaries), f"T{task_id} has no backup"))
        for res in primaries + backups:
            length = task.c if res.kind is P else expected_backup_length(task.c, backup_scale)
            if res.start < task.r or res.end > task.d or res.end - res.start != length:
                violations.append(Violation('WindowViolation', (res,),
                                            f"needs length {length} inside [{task.r},{task.d})"))
        for pri in primaries[:1]:
            for bk in backups[:1]:
                if bk.processor == pri.processor:
                    violations.append(Violation('SpaceExclusion', (pri, bk), f"both on P{pri.processor}"))
                if bk.start < pri.end:
                    violations.append(Violation('TimeExclusion', (pri, bk),
                                                f"backup starts at {bk.start} before primary ends at {pri.end}"))

    for res in reservations:
        if not 1 <= res.processor <= processors:
            violations.append(Violation('UnknownProcessor', (res,), f"P{res.processor} not in 1..{processors}"))

    primary_proc = {tid: c[P][0].processor for tid, c in copies.items() if c[P]}
    by_proc: Dict[int, List[Reservation]] = defaultdict(list)
    for res in reservations:
        by_proc[res.processor].append(res)
    for proc in sorted(by_proc):
        placed = by_proc[proc]
        for i, first in enumerate(placed):
            for second in placed[i + 1:]:
                if not _cells(first) & _cells(second):
                    continue
                pair = (first, second)
                if P in (first.kind, second.kind):
                    violations.append(Violation('PrimaryOverlap', pair, f"on P{proc}"))
                    continue
                p1, p2 = primary_proc.get(first.task), primary_proc.get(second.task)
                if p1 is None or p2 is None or p1 == p2:
                    violations.append(Violation('ForbiddenOverload', pair,
                                                f"primaries share P{p1}" if p1 == p2 else "primary unknown"))
    return violations


def fault_victims(tasks: Iterable[TaskSpec], reservations: Iterable[Reservation],
                  processor: int, strike: int) -> List[int]:
    """Tasks of a fixed schedule that miss their deadline when `processor` dies at `strike`.

    The failed processor stays down. A primary on it is lost unless it ended
    by `strike`; its backup then has to run in its own slot. Backups sharing a
    slot are served in (start, task) order and the rest are lost.
    """
    by_id = {t.id: t for t in tasks}
    copies = _copies(reservations)
    victims = []
    promoted: Dict[int, List[Reservation]] = defaultdict(list)
    for task_id in sorted(copies):
        primaries, backups = copies[task_id][P], copies[task_id][B]
        if not primaries:
            continue
        pri = primaries[0]
        if pri.processor != processor or strike >= pri.end:
            continue
        bk = backups[0] if backups else None
        if (bk is None or bk.processor == processor or bk.start < strike
                or bk.end > by_id[task_id].d):
            victims.append(task_id)
            continue
        promoted[bk.processor].append(bk)
    for host in sorted(promoted):
        served: List[Set[int]] = []
        for bk in sorted(promoted[host], key=lambda r: (r.start, r.task)):
            cells = _cells(bk)
            if any(cells & other for other in served):
                victims.append(bk.task)
            else:
                served.append(cells)
    return sorted(victims)


def verify_schedule(tasks: Iterable[TaskSpec], reservations: Iterable[Reservation], processors: int,
                    backup_scale: Fraction = Fraction(1)) -> List[Violation]:
    """Structural checks plus a replay of every single permanent fault.

    A task already cited by a structural violation is not reported again as
    fault vulnerable; each remaining victim is reported once, at its first
    (processor, strike) in sweep order.
    """
    tasks = list(tasks)
    reservations = list(reservations)
    violations = check_reservations(tasks, reservations, processors, backup_scale)
    cited = {res.task for v in violations for res in v.reservations}
    horizon = max([t.d for t in tasks] + [r.end for r in reservations], default=0)
    copies = _copies(reservations)
    for proc in range(1, processors + 1):
        for strike in range(horizon + 1):
            for victim in fault_victims(tasks, reservations, proc, strike):
                if victim in cited:
                    continue
                cited.add(victim)
                involved = tuple(copies[victim][P] + copies[victim][B])
                violations.append(Violation('FaultVulnerable', involved,
                                            f"T{victim} misses when P{proc} fails at t={strike}",
                                            processor=proc, strike=strike, victim=victim))
    return violations
