import pytest
from pathlib import Path
from ftrt import setup_logging
from ftrt.api.model import TaskSpec
from ftrt.api.scheduler import SchedulerPolicy
from ftrt.api.engine import SimConfig


def pytest_configure(config):
    setup_logging(path=Path(__file__).parent / 'logging.yaml')


def tasks_from(*rows):
    """TaskSpecs from (a, r, d, c) rows, ids 1..n."""
    return [TaskSpec(i, a, r, d, c) for i, (a, r, d, c) in enumerate(rows, start=1)]


@pytest.fixture
def three_tasks():
    return tasks_from((0, 0, 6, 2), (0, 0, 6, 2), (0, 0, 8, 2))


@pytest.fixture
def six_tasks():
    return tasks_from((0, 0, 6, 2), (0, 0, 6, 2), (0, 0, 10, 4),
                      (0, 4, 12, 2), (2, 2, 10, 4), (2, 2, 18, 5))


@pytest.fixture
def overload_policy():
    return SchedulerPolicy.preset('pb-overload')


@pytest.fixture
def three_task_config(three_tasks, overload_policy):
    return SimConfig(processors=3, horizon=8, tasks=three_tasks, faults=[], policy=overload_policy)


@pytest.fixture
def six_task_config(six_tasks, overload_policy):
    return SimConfig(processors=3, horizon=18, tasks=six_tasks, faults=[], policy=overload_policy)
