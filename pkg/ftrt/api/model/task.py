"""Aperiodic task tuples and their validation.

A task is the tuple (a, r, d, c) of arrival time, ready time, absolute
deadline and worst-case computation time, all in integer time units.
"""

from __future__ import annotations
from dataclasses import dataclass, asdict
from ftrt.lib.errors import InvalidTaskError
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Iterable, List


@dataclass(frozen=True)
class TaskSpec:
    """One dynamic aperiodic task.

    Attributes:
        id (int): Identifier, unique within a scenario.
        a (int): Arrival time; admission happens at this instant.
        r (int): Ready time; no copy may start before it.
        d (int): Absolute deadline; every copy must end by it.
        c (int): Worst-case computation time of the primary copy.
    """
    id: int
    a: int
    r: int
    d: int
    c: int

    @property
    def laxity(self) -> int:
        return self.d - self.r - self.c

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'TaskSpec':
        return cls(**{k: data[k] for k in ('id', 'a', 'r', 'd', 'c')})


def _violations(spec: TaskSpec) -> List[str]:
    violations = []
    for name in ('id', 'a', 'r', 'd', 'c'):
        value = getattr(spec, name)
        if isinstance(value, bool) or not isinstance(value, int):
            violations.append(f"{name} must be an integer (got {value!r})")
    if violations:
        return violations
    if spec.c < 1:
        violations.append(f"c >= 1 violated (c={spec.c})")
    if spec.a < 0:
        violations.append(f"a >= 0 violated (a={spec.a})")
    if spec.r < spec.a:
        violations.append(f"r >= a violated (r={spec.r}, a={spec.a})")
    if spec.d < spec.r + spec.c:
        violations.append(f"d >= r + c violated (d={spec.d}, r + c={spec.r + spec.c})")
    return violations


def validate_task(spec: TaskSpec) -> TaskSpec:
    """Return `spec` unchanged if every task inequality holds.

    Raises:
        InvalidTaskError: Lists each violated inequality.
    """
    if violations := _violations(spec):
        raise InvalidTaskError(task_id=spec.id, violations=violations)
    return spec


def validate_tasks(tasks: Iterable[TaskSpec]) -> List[TaskSpec]:
    """Validate every task and the uniqueness of their ids."""
    tasks = list(tasks)
    seen = set()
    for spec in tasks:
        validate_task(spec)
        if spec.id in seen:
            raise InvalidTaskError(task_id=spec.id, violations=[f"id {spec.id} is not unique"])
        seen.add(spec.id)
    return tasks
