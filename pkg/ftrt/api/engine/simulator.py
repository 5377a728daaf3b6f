"""Deterministic discrete-time runtime.

Each instant t = 0..horizon is processed as one tick, always in this order:

1. recoveries, then faults (RECOVER, FAULT, CRASH)
2. crash handling (PROMOTE, REPLACE or WARN)
3. completions and deallocations (COMPLETE, DEALLOC)
4. arrivals and admission (ARRIVE, RESERVE, COMMIT or REJECT)
5. starts (START)
6. deadline check (MISS)

A crash at t kills a reservation running over [start, end) iff
start < t < end; one ending exactly at t has finished and completes.
"""

from __future__ import annotations
import copy
import logging
from collections import defaultdict
from ftrt.lib.errors import InvariantBreach, InvalidParamsError, ReservationConflict
from ftrt.api.scheduler import admit_batch
from ftrt.api.timeline import CopyKind, Interval, Reservation, SystemTimeline
from .metrics import compute_metrics
from .report import SimReport, ReservationRecord, ReservationStatus, inputs_digest
from .trace import EventKind, TraceEvent
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List, Optional, Set, Tuple
    from ftrt.api.model import TaskSpec, FaultEvent
    from ftrt.api.scheduler import AdmissionDecision
    from .config import SimConfig


logger = logging.getLogger(__name__)


class Simulator:
    """State of one run.

    Args:
        sim_config (SimConfig): The run to perform; validated and resolved on entry.
    """
    def __init__(self, sim_config: SimConfig):
        self.source = sim_config.validate()
        self.config = sim_config.resolved()
        self.policy = self.config.policy
        self.horizon: int = self.config.end
        self.system = SystemTimeline.create(self.config.processors)
        self.tasks: Dict[int, TaskSpec] = {t.id: t for t in self.config.task_set}

        self._arrivals: Dict[int, List[TaskSpec]] = defaultdict(list)
        for task in sorted(self.config.task_set, key=lambda x: (x.a, x.id)):
            self._arrivals[task.a].append(task)
        self._faults: Dict[int, List[FaultEvent]] = defaultdict(list)
        for fault in self.config.fault_script:
            self._faults[fault.t].append(fault)
        self._deadlines: Dict[int, List[int]] = defaultdict(list)

        self.pending: Set[int] = set()
        self.completed: Set[int] = set()
        self.running: Dict[int, Reservation] = {}
        self.decisions: List[AdmissionDecision] = []
        self.records: List[ReservationRecord] = []
        self._record_of: Dict[Tuple[int, CopyKind], ReservationRecord] = {}
        self.trace: List[TraceEvent] = []

    # bookkeeping

    def _emit(self, events: List[TraceEvent], t: int, kind: EventKind,
              res: Optional[Reservation] = None, **kwargs) -> None:
        if res is not None:
            kwargs.setdefault('task', res.task)
            kwargs.setdefault('proc', res.processor)
            kwargs.setdefault('copy', res.kind)
        events.append(TraceEvent(t=t, kind=kind, **kwargs))

    def _track(self, res: Reservation) -> None:
        record = ReservationRecord(res.task, res.kind, res.processor, res.interval)
        self.records.append(record)
        self._record_of[res.key] = record

    def _mark(self, res: Reservation, status: ReservationStatus) -> None:
        self._record_of[res.key].status = status

    def _drop(self, res: Reservation, status: ReservationStatus) -> None:
        self.system = self.system.release(res.task, res.kind)
        self._mark(res, status)

    def _reserve(self, res: Reservation) -> None:
        try:
            self.system = self.system.reserve(res)
        except ReservationConflict as e:
            logger.error("Re-placement refused by the timeline: %s", e)
            raise InvariantBreach(f"placement and reservation rules disagree: {e.message}")

    # tick phases

    def _apply_faults(self, t: int, events: List[TraceEvent]) -> List[int]:
        for proc in self.system.processors:
            if proc.failed and proc.recover_at == t:
                self.system = self.system.mark_recovered(proc.processor)
                self._emit(events, t, EventKind.RECOVER, proc=proc.processor)
        crashed = []
        for fault in sorted(self._faults.pop(t, ()), key=lambda f: f.processor):
            p = fault.processor
            self._emit(events, t, EventKind.FAULT, proc=p, note=fault.fault_class.value)
            current = self.system.processor(p)
            if current.failed:
                if current.recover_at is not None:
                    recover = None if fault.recover_at is None else max(current.recover_at, fault.recover_at)
                    self.system = self.system.mark_failed(p, current.failed_at, recover)
                continue
            self.system = self.system.mark_failed(p, t, fault.recover_at)
            self._emit(events, t, EventKind.CRASH, proc=p)
            crashed.append(p)
        return crashed

    def _promote(self, task_id: int, t: int, events: List[TraceEvent]) -> None:
        backup = self.system.backup_of(task_id)
        if backup is None:
            logger.info("t=%d: T%d lost its primary and has no backup", t, task_id)
            return
        host = self.system.processor(backup.processor)
        clashing = [o for o in host.overlapping(backup.interval)
                    if o.task != task_id and o.task in self.system.promoted]
        if clashing:
            logger.warning("t=%d: backup of T%d shares its slot with the running backup of T%d",
                           t, task_id, clashing[0].task)
            self._drop(backup, ReservationStatus.CANCELLED)
            self._emit(events, t, EventKind.WARN, backup, note='backup_conflict')
            return
        self.system = self.system.promote(task_id)
        self._emit(events, t, EventKind.PROMOTE, backup)

    def _replace_backup(self, backup: Reservation, t: int, events: List[TraceEvent]) -> None:
        task = self.tasks[backup.task]
        primary = self.system.primary_of(task.id)
        self.system = self.system.release(task.id, CopyKind.BACKUP)
        length = backup.interval.length
        found, overloaded = None, False
        if primary is not None and task.d - primary.end >= length:
            window = Interval(primary.end, task.d)
            found = self.system.find_latest_backup_slot(window, length, primary.processor)
            if found is None and self.policy.overloading:
                found = self.system.find_overload_slot(task, primary.processor, window, length)
                overloaded = found is not None
        if found is None:
            self._mark(backup, ReservationStatus.CANCELLED)
            logger.warning("t=%d: backup of T%d hosted on crashed P%d could not be re-placed; "
                           "T%d continues without a backup", t, task.id, backup.processor, task.id)
            self._emit(events, t, EventKind.WARN, backup, note='unplaced')
            return
        self._mark(backup, ReservationStatus.MOVED)
        moved = Reservation(task.id, CopyKind.BACKUP, found[0], found[1])
        self._reserve(moved)
        self._track(moved)
        self._emit(events, t, EventKind.REPLACE, moved, slot=moved.interval,
                   note='overloaded' if overloaded else None)

    def _handle_crash(self, p: int, t: int, events: List[TraceEvent]) -> None:
        hosted = self.system.processor(p).reservations
        running = self.running.get(p)
        for res in hosted:
            if res.kind is not CopyKind.PRIMARY or res.task not in self.pending:
                continue
            if res == running:
                if res.end == t:
                    continue
                del self.running[p]
                self._drop(res, ReservationStatus.KILLED)
            else:
                self._drop(res, ReservationStatus.CANCELLED)
            self._promote(res.task, t, events)
        for res in hosted:
            if res.kind is not CopyKind.BACKUP:
                continue
            if res.task in self.system.promoted:
                if res == running:
                    if res.end == t:
                        continue
                    del self.running[p]
                    self._drop(res, ReservationStatus.KILLED)
                else:
                    self._drop(res, ReservationStatus.CANCELLED)
                logger.warning("t=%d: P%d crashed under the promoted backup of T%d", t, p, res.task)
                self._emit(events, t, EventKind.WARN, res, note='backup_lost')
            else:
                self._replace_backup(res, t, events)

    def _complete(self, t: int, events: List[TraceEvent]) -> None:
        for p in sorted(self.running):
            res = self.running[p]
            if res.end != t:
                continue
            del self.running[p]
            self._mark(res, ReservationStatus.EXECUTED)
            self._emit(events, t, EventKind.COMPLETE, res)
            self.pending.discard(res.task)
            self.completed.add(res.task)
            if res.kind is CopyKind.PRIMARY and res.task not in self.system.promoted:
                backup = self.system.backup_of(res.task)
                if backup is not None:
                    self._drop(backup, ReservationStatus.DEALLOCATED)
                    self._emit(events, t, EventKind.DEALLOC, backup)

    def _admit(self, t: int, events: List[TraceEvent]) -> None:
        batch = self._arrivals.pop(t, None)
        if not batch:
            return
        for task in batch:
            self._emit(events, t, EventKind.ARRIVE, task=task.id)
        self.system, decisions = admit_batch(self.system, batch, self.policy)
        for decision in decisions:
            self.decisions.append(decision)
            if not decision.committed:
                self._emit(events, t, EventKind.REJECT, task=decision.task, note=decision.reason.token)
                continue
            for res in (decision.primary, decision.backup):
                if res is not None:
                    self._track(res)
                    self._emit(events, t, EventKind.RESERVE, res, slot=res.interval)
            self._emit(events, t, EventKind.COMMIT, task=decision.task,
                       note='overloaded' if decision.overloaded else None)
            self.pending.add(decision.task)
            self._deadlines[self.tasks[decision.task].d].append(decision.task)

    def _start(self, t: int, events: List[TraceEvent]) -> None:
        for proc in self.system.processors:
            if proc.failed:
                continue
            for res in proc.reservations:
                if res.start > t:
                    break
                if res.start < t:
                    continue
                if res.kind is CopyKind.BACKUP and res.task not in self.system.promoted:
                    continue
                busy = self.running.get(proc.processor)
                if busy is not None:
                    logger.error("t=%d: %s starts while %s still runs", t, res, busy)
                    raise InvariantBreach(f"two reservations execute on P{proc.processor} at t={t}: "
                                          f"{busy} and {res}")
                self.running[proc.processor] = res
                self._emit(events, t, EventKind.START, res)

    def _check_deadlines(self, t: int, events: List[TraceEvent]) -> None:
        for task_id in sorted(self._deadlines.pop(t, ())):
            if task_id in self.pending:
                self.pending.discard(task_id)
                self._emit(events, t, EventKind.MISS, task=task_id)

    def inject(self, fault: FaultEvent) -> None:
        """Schedule `fault` in a run that has not reached `fault.t` yet."""
        if not 1 <= fault.processor <= self.config.processors:
            raise InvalidParamsError(f"fault targets unknown processor {fault.processor}")
        self._faults[fault.t].append(fault)

    def fork(self) -> 'Simulator':
        """An independent copy of the run so far, with an empty trace."""
        trace, self.trace = self.trace, []
        try:
            return copy.deepcopy(self)
        finally:
            self.trace = trace

    @property
    def settled(self) -> bool:
        """Nothing is pending and nothing is left to arrive or strike."""
        return not (self.pending or self._arrivals or self._faults)

    def tick(self, t: int) -> List[TraceEvent]:
        """Process instant `t` and return the events it produced."""
        events: List[TraceEvent] = []
        for p in self._apply_faults(t, events):
            self._handle_crash(p, t, events)
        self._complete(t, events)
        self._admit(t, events)
        self._start(t, events)
        self._check_deadlines(t, events)
        self.system = self.system.prune(t)
        self.trace.extend(events)
        return events

    def run(self) -> SimReport:
        for p in range(1, self.config.processors + 1):
            self.trace.append(TraceEvent(t=0, kind=EventKind.BEGIN, proc=p))
        for t in range(self.horizon + 1):
            self.tick(t)
        self.trace.append(TraceEvent(t=self.horizon, kind=EventKind.END))

        metrics = compute_metrics(self.trace)
        logger.info("run finished (policy=%s, P=%d, horizon=%d): %d/%d committed, %d missed",
                    self.policy.name, self.config.processors, self.horizon,
                    metrics.committed, metrics.arrived, metrics.misses)
        return SimReport(config=self.source.to_dict(),
                         trace=list(self.trace),
                         metrics=metrics,
                         decisions=list(self.decisions),
                         reservations=list(self.records),
                         inputs_sha256=inputs_digest(self.config.processors, self.horizon,
                                                     self.config.task_set, self.config.fault_script))


def tick(state: Simulator, t: int) -> Tuple[Simulator, List[TraceEvent]]:
    return state, state.tick(t)


def run(sim_config: SimConfig) -> SimReport:
    return Simulator(sim_config).run()
