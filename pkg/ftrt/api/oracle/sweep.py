"""Worst case over every single permanent processor fault."""

from __future__ import annotations
import logging
from dataclasses import dataclass
from ftrt.api.model import FaultEvent
from ftrt.api.scheduler import SchedulerPolicy
from ftrt.api.engine import EventKind, SimConfig, SimReport, Simulator, run
from .checker import Schedule, fault_victims
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List, Optional, Tuple, Union


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepResult:
    """Outcome of a fault sweep.

    Attributes:
        worst_misses (int): Largest miss count over all strike points.
        worst (Optional[Tuple[int, int]]): First (processor, strike time) reaching it, None when it is 0.
        points (int): Number of (processor, strike time) pairs evaluated.
    """
    worst_misses: int
    worst: Optional[Tuple[int, int]]
    points: int


def strike_points(report: SimReport, processor: Optional[int] = None) -> List[int]:
    """Strike times that cover every distinct fault outcome of a run.

    Between two consecutive event instants of a fault-free run nothing starts,
    ends or arrives, so a fault anywhere in (e, e') behaves as one at e + 1.
    With `processor`, only its own events and the admission instants count:
    a crash of that processor is not affected by what the others do between
    two arrivals.
    """
    times = {0}
    for event in report.trace:
        if processor is None or event.proc in (None, processor):
            times.update((event.t, event.t + 1))
    return sorted(t for t in times if 0 <= t <= report.horizon)


def _base_config(report: SimReport) -> SimConfig:
    return SimConfig(processors=report.processors,
                     horizon=report.horizon,
                     tasks=report.tasks,
                     faults=[],
                     policy=SchedulerPolicy.from_dict(report.config['policy']),
                     seed=int(report.config.get('seed', 0)))


def _misses_after(branch: Simulator, t: int, horizon: int) -> int:
    misses = 0
    for u in range(t, horizon + 1):
        misses += sum(1 for e in branch.tick(u) if e.kind is EventKind.MISS)
        if branch.settled:
            break
    return misses


def _sweep_report(report: SimReport, exhaustive: bool) -> SweepResult:
    base = _base_config(report)
    clean = report if not report.faults else run(base)
    processors = range(1, report.processors + 1)
    if exhaustive:
        every = set(range(report.horizon + 1))
        times = {p: every for p in processors}
    else:
        times = {p: set(strike_points(clean, p)) for p in processors}

    outcomes: Dict[Tuple[int, int], int] = {}
    state = Simulator(base)
    for t in range(report.horizon + 1):
        for p in processors:
            if t in times[p]:
                branch = state.fork()
                branch.inject(FaultEvent(p, t))
                outcomes[(p, t)] = _misses_after(branch, t, report.horizon)
        state.tick(t)

    worst, worst_at = 0, None
    for key in sorted(outcomes):
        if outcomes[key] > worst:
            worst, worst_at = outcomes[key], key
    return SweepResult(worst, worst_at, len(outcomes))


def _sweep_schedule(schedule: Schedule) -> SweepResult:
    worst, worst_at, points = 0, None, 0
    for proc in range(1, schedule.processors + 1):
        for t in range(schedule.horizon + 1):
            points += 1
            misses = len(fault_victims(schedule.tasks, schedule.reservations, proc, t))
            if misses > worst:
                worst, worst_at = misses, (proc, t)
    return SweepResult(worst, worst_at, points)


def fault_sweep(target: Union[SimReport, Schedule], exhaustive: bool = False) -> SweepResult:
    """Inject one permanent fault at every (processor, strike time) and keep the worst.

    A `SimReport` is re-simulated with its own tasks and policy; a `Schedule`
    is replayed with its reservations held fixed. `exhaustive` only matters
    for reports, where it visits every instant instead of `strike_points`.
    """
    if isinstance(target, Schedule):
        result = _sweep_schedule(target)
    else:
        result = _sweep_report(target, exhaustive)
    logger.debug("fault sweep over %d point(s): worst %d miss(es) at %s",
                 result.points, result.worst_misses, result.worst)
    return result
