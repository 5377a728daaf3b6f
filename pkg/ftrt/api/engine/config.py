from __future__ import annotations
from dataclasses import dataclass, field, replace
from functools import cached_property
from ftrt import get_setting
from ftrt.lib.errors import InvalidParamsError
from ftrt.api.model import generate_workload, validate_tasks
from ftrt.api.scheduler import SchedulerPolicy
from .faults import expand_fault_rates
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List, Optional
    from ftrt.api.model import TaskSpec, WorkloadParams, FaultEvent, FaultClassRates


@dataclass(frozen=True)
class SimConfig:
    """Everything a run depends on.

    Tasks come either as an explicit list or from `workload` (drawn with
    `seed`); faults either as an explicit script or as per-processor rates
    expanded with `seed`. When `horizon` is None it defaults to the latest
    deadline.

    Attributes:
        processors (int): Processor count P.
        horizon (Optional[int]): Last simulated instant.
        tasks (Optional[List[TaskSpec]]): Explicit task set.
        workload (Optional[WorkloadParams]): Generator parameters, used when `tasks` is None.
        faults (Optional[List[FaultEvent]]): Explicit fault script.
        fault_rates (Optional[Dict[int, FaultClassRates]]): Stochastic faults per processor.
        policy (SchedulerPolicy): Admission policy.
        seed (int): Seed for the workload generator and the fault machines.
    """
    processors: int = field(default_factory=lambda: get_setting('simulation', 'processors'))
    horizon: Optional[int] = None
    tasks: Optional[List[TaskSpec]] = None
    workload: Optional[WorkloadParams] = None
    faults: Optional[List[FaultEvent]] = None
    fault_rates: Optional[Dict[int, FaultClassRates]] = None
    policy: SchedulerPolicy = field(default_factory=SchedulerPolicy)
    seed: int = 0

    @cached_property
    def task_set(self) -> List[TaskSpec]:
        if self.tasks is not None:
            return list(self.tasks)
        if self.workload is not None:
            return generate_workload(self.workload.with_seed(self.seed))
        return []

    @cached_property
    def end(self) -> int:
        if self.horizon is not None:
            return self.horizon
        return max((t.d for t in self.task_set), default=0)

    @cached_property
    def fault_script(self) -> List[FaultEvent]:
        if self.faults is not None:
            return sorted(self.faults, key=lambda e: (e.t, e.processor))
        if self.fault_rates:
            return expand_fault_rates(self.fault_rates, self.end, self.seed)
        return []

    def validate(self) -> 'SimConfig':
        """Check the run can start.

        Raises:
            InvalidParamsError: On an out-of-range count, horizon or fault target.
            InvalidTaskError: On an invalid or duplicated task.
        """
        if self.processors < 1:
            raise InvalidParamsError(f"processors must be >= 1 (got {self.processors})")
        if self.policy.fault_tolerance and self.processors < 2:
            raise InvalidParamsError("fault tolerance needs at least 2 processors "
                                     f"(got {self.processors})")
        if self.horizon is not None and self.horizon < 0:
            raise InvalidParamsError(f"horizon must be >= 0 (got {self.horizon})")
        if self.tasks is not None and self.workload is not None:
            raise InvalidParamsError("give either tasks or workload, not both")
        if self.faults is not None and self.fault_rates is not None:
            raise InvalidParamsError("give either faults or fault_rates, not both")
        for proc in (self.fault_rates or {}):
            if not 1 <= proc <= self.processors:
                raise InvalidParamsError(f"fault rates given for unknown processor {proc}")
        tasks = validate_tasks(self.task_set)
        latest = max((t.d for t in tasks), default=0)
        if self.end < latest:
            raise InvalidParamsError(f"horizon {self.end} ends before the latest deadline {latest}")
        for event in self.fault_script:
            if not 1 <= event.processor <= self.processors:
                raise InvalidParamsError(f"fault targets unknown processor {event.processor}")
        return self

    def resolved(self) -> 'SimConfig':
        """The same run with the task list and the fault script spelled out."""
        return replace(self, horizon=self.end, tasks=self.task_set, workload=None,
                       faults=self.fault_script, fault_rates=None)

    def with_policy(self, policy: SchedulerPolicy) -> 'SimConfig':
        return replace(self, policy=policy)

    def with_faults(self, faults: List[FaultEvent]) -> 'SimConfig':
        return replace(self, faults=list(faults), fault_rates=None)

    def to_dict(self) -> dict:
        data = {'processors': self.processors,
                'horizon': self.end,
                'policy': self.policy.to_dict(),
                'seed': self.seed,
                'tasks': [t.to_dict() for t in self.task_set],
                'faults': [e.to_dict() for e in self.fault_script]}
        if self.workload is not None:
            data['workload'] = self.workload.to_dict()
        if self.fault_rates is not None:
            data['fault_rates'] = {str(p): r.to_dict() for p, r in sorted(self.fault_rates.items())}
        return data

