"""Seeded generator of random aperiodic workloads."""

from __future__ import annotations
import numpy as np
from dataclasses import dataclass, asdict, field
from ftrt import get_setting
from ftrt.lib.errors import InvalidParamsError
from .task import TaskSpec, validate_task
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import List, Tuple


def _default(key):
    return field(default_factory=lambda: tuple(get_setting('workload', key)))


@dataclass(frozen=True)
class WorkloadParams:
    """Ranges (inclusive) the generator draws uniformly from.

    Attributes:
        task_count (int): Number of tasks to generate.
        arrival_window (Tuple[int, int]): Range of arrival times.
        c_range (Tuple[int, int]): Range of computation times.
        laxity_range (Tuple[int, int]): Range of d - r - c.
        ready_offset (Tuple[int, int]): Range of r - a.
        processors (int): Processor count the workload is meant for.
        seed (int): Generator seed.
    """
    task_count: int = field(default_factory=lambda: get_setting('workload', 'task_count'))
    arrival_window: Tuple[int, int] = _default('arrival_window')
    c_range: Tuple[int, int] = _default('c_range')
    laxity_range: Tuple[int, int] = _default('laxity_range')
    ready_offset: Tuple[int, int] = _default('ready_offset')
    processors: int = field(default_factory=lambda: get_setting('workload', 'processors'))
    seed: int = 0

    def validate(self) -> 'WorkloadParams':
        if self.task_count < 0:
            raise InvalidParamsError(f"task_count must be >= 0 (got {self.task_count})")
        if self.processors < 1:
            raise InvalidParamsError(f"processors must be >= 1 (got {self.processors})")
        bounds = {'arrival_window': 0, 'c_range': 1, 'laxity_range': 0, 'ready_offset': 0}
        for name, lowest in bounds.items():
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InvalidParamsError(f"{name} is empty ({lo} > {hi})")
            if lo < lowest:
                raise InvalidParamsError(f"{name} must start at >= {lowest} (got {lo})")
        return self

    def with_seed(self, seed: int) -> 'WorkloadParams':
        return WorkloadParams(**{**asdict(self), 'seed': seed})

    def to_dict(self) -> dict:
        data = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in data.items()}

    @classmethod
    def from_dict(cls, data: dict) -> 'WorkloadParams':
        kwargs = {}
        for key in ('task_count', 'processors', 'seed'):
            if key in data:
                kwargs[key] = int(data[key])
        if 'count' in data:
            kwargs['task_count'] = int(data['count'])
        for key in ('arrival_window', 'c_range', 'laxity_range', 'ready_offset'):
            if key in data:
                lo, hi = data[key]
                kwargs[key] = (int(lo), int(hi))
        return cls(**kwargs)


def generate_workload(params: WorkloadParams) -> List[TaskSpec]:
    """Draw `params.task_count` tasks, sorted by arrival time.

    Ids are assigned 1..n in arrival order (ties keep draw order), so equal
    parameters always give the identical list.
    """
    params.validate()
    n = params.task_count
    if n == 0:
        return []
    rng = np.random.default_rng(params.seed)

    def draw(bounds):
        lo, hi = bounds
        return rng.integers(lo, hi + 1, size=n)

    arrivals = draw(params.arrival_window)
    offsets = draw(params.ready_offset)
    costs = draw(params.c_range)
    laxities = draw(params.laxity_range)

    order = np.argsort(arrivals, kind='stable')
    tasks = []
    for task_id, i in enumerate(order, start=1):
        a = int(arrivals[i])
        r = a + int(offsets[i])
        c = int(costs[i])
        tasks.append(validate_task(TaskSpec(id=task_id, a=a, r=r, d=r + c + int(laxities[i]), c=c)))
    return tasks
