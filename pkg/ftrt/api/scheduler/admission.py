"""Constructive EDF admission with primary/backup placement.

A task is admitted by placing its primary at the earliest free slot in
[r, d), then its backup in [primary end, d): first by sharing an existing
backup slot (when the policy allows overloading), otherwise in the latest
free slot. A rejected task leaves the timeline exactly as it was.
"""

from __future__ import annotations
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from ftrt.lib.errors import ReservationConflict, InvariantBreach
from ftrt.api.timeline import CopyKind, Interval, Reservation
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, Iterable, List, Optional, Tuple
    from ftrt.api.model import TaskSpec
    from ftrt.api.timeline import SystemTimeline
    from .policy import SchedulerPolicy


logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    COMMITTED = 'committed'
    REJECTED = 'rejected'


class RejectReason(str, Enum):
    NO_PRIMARY = 'no primary slot'
    NO_BACKUP = 'no backup slot'

    @property
    def token(self) -> str:
        return self.value.replace(' ', '_')

    @classmethod
    def from_token(cls, token: str) -> 'RejectReason':
        return cls(token.replace('_', ' '))


@dataclass(frozen=True)
class AdmissionDecision:
    """Result of one admission attempt.

    A committed decision carries the primary and, under fault tolerance,
    the backup reservation; a rejected one carries only the reason.
    """
    task: int
    outcome: Outcome
    primary: Optional[Reservation] = None
    backup: Optional[Reservation] = None
    overloaded: bool = False
    reason: Optional[RejectReason] = None

    @property
    def committed(self) -> bool:
        return self.outcome is Outcome.COMMITTED

    @classmethod
    def rejected(cls, task: int, reason: RejectReason) -> 'AdmissionDecision':
        return cls(task=task, outcome=Outcome.REJECTED, reason=reason)

    def to_dict(self) -> dict:
        return {'task': self.task,
                'outcome': self.outcome.value,
                'primary': None if self.primary is None else self.primary.to_dict(),
                'backup': None if self.backup is None else self.backup.to_dict(),
                'overloaded': self.overloaded,
                'reason': None if self.reason is None else self.reason.value}

    @classmethod
    def from_dict(cls, data: dict) -> 'AdmissionDecision':
        return cls(task=int(data['task']),
                   outcome=Outcome(data['outcome']),
                   primary=None if data.get('primary') is None else Reservation.from_dict(data['primary']),
                   backup=None if data.get('backup') is None else Reservation.from_dict(data['backup']),
                   overloaded=bool(data.get('overloaded', False)),
                   reason=None if data.get('reason') is None else RejectReason(data['reason']))


def _commit(system: SystemTimeline, res: Reservation) -> SystemTimeline:
    try:
        return system.reserve(res)
    except ReservationConflict as e:
        logger.error("Placement search returned a slot reserve refuses: %s", e)
        raise InvariantBreach(f"placement and reservation rules disagree: {e.message}")


def place_backup(system: SystemTimeline, task: TaskSpec, primary: Reservation, length: int,
                 overloading: bool) -> Optional[Tuple[Reservation, bool]]:
    """Find a backup slot in [primary end, d) for an already reserved primary.

    Returns:
        The backup reservation (not yet reserved) and whether it shares a slot,
        or None if no legal placement exists.
    """
    if task.d - primary.end < length:
        return None
    window = Interval(primary.end, task.d)
    if overloading:
        found = system.find_overload_slot(task, primary.processor, window, length)
        if found is not None:
            return Reservation(task.id, CopyKind.BACKUP, found[0], found[1]), True
    found = system.find_latest_backup_slot(window, length, primary.processor)
    if found is not None:
        return Reservation(task.id, CopyKind.BACKUP, found[0], found[1]), False
    return None


def admit(system: SystemTimeline, task: TaskSpec,
          policy: SchedulerPolicy) -> Tuple[SystemTimeline, AdmissionDecision]:
    """Admit one task against `system` under `policy`.

    Returns:
        The new timeline and the decision. On rejection the returned timeline
        is the very object that was passed in.
    """
    found = system.find_primary_slot(task.r, task.d, task.c)
    if found is None:
        logger.debug("T%d rejected: no primary slot in [%d,%d)", task.id, task.r, task.d)
        return system, AdmissionDecision.rejected(task.id, RejectReason.NO_PRIMARY)
    primary = Reservation(task.id, CopyKind.PRIMARY, found[0], found[1])
    tentative = _commit(system, primary)
    if not policy.fault_tolerance:
        logger.debug("T%d committed: %s", task.id, primary)
        return tentative, AdmissionDecision(task.id, Outcome.COMMITTED, primary=primary)

    placed = place_backup(tentative, task, primary, policy.backup_length(task.c), policy.overloading)
    if placed is None:
        logger.debug("T%d rejected: no backup slot after %s", task.id, primary)
        return system, AdmissionDecision.rejected(task.id, RejectReason.NO_BACKUP)
    backup, overloaded = placed
    committed = _commit(tentative, backup)
    logger.debug("T%d committed: %s %s%s", task.id, primary, backup, " (overloaded)" if overloaded else "")
    return committed, AdmissionDecision(task.id, Outcome.COMMITTED, primary=primary,
                                        backup=backup, overloaded=overloaded)


def edf_order(tasks: Iterable[TaskSpec]) -> List[TaskSpec]:
    return sorted(tasks, key=lambda t: (t.d, t.id))


def admit_batch(system: SystemTimeline, tasks: List[TaskSpec],
                policy: SchedulerPolicy) -> Tuple[SystemTimeline, List[AdmissionDecision]]:
    """Admit tasks arriving together, earliest deadline first.

    Decisions come back in input order.
    """
    by_id = {}
    for task in edf_order(tasks):
        system, by_id[task.id] = admit(system, task, policy)
    return system, [by_id[t.id] for t in tasks]


def reject_reason_report(decisions: Iterable[AdmissionDecision]) -> Dict[str, int]:
    counts = Counter(d.reason.value for d in decisions if not d.committed and d.reason is not None)
    return dict(sorted(counts.items()))
