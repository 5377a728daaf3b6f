import logging
import pytest
from ftrt import get_setting
from ftrt.lib.errors import InvalidTaskError, InvalidParamsError, UnclassifiableFaultError, ScenarioError, ConfigError
from ftrt.api.model import (TaskSpec, validate_task, validate_tasks, FaultClass, FaultClassRates,
                            FaultEvent, classify_fault, WorkloadParams, generate_workload,
                            parse_task_lines, dump_task_lines)


def test_validate_task_accepts_slack_task():
    spec = TaskSpec(1, a=0, r=0, d=4, c=2)
    assert validate_task(spec) is spec
    assert spec.laxity == 2


def test_validate_task_reports_each_inequality():
    with pytest.raises(InvalidTaskError) as e:
        validate_task(TaskSpec(1, a=0, r=0, d=4, c=5))
    assert e.value.task_id == 1
    assert any('d >= r + c' in v for v in e.value.violations)

    with pytest.raises(InvalidTaskError) as e:
        validate_task(TaskSpec(2, a=3, r=1, d=9, c=2))
    assert [v for v in e.value.violations if 'r >= a' in v]
    assert 'task 2' in e.value.message

    with pytest.raises(InvalidTaskError) as e:
        validate_task(TaskSpec(3, a=-1, r=0, d=0, c=0))
    assert len(e.value.violations) >= 2


def test_validate_task_rejects_non_integers():
    with pytest.raises(InvalidTaskError) as e:
        validate_task(TaskSpec(1, a=0, r=0.5, d=4, c=2))
    assert 'r must be an integer' in e.value.violations[0]


def test_validate_tasks_requires_unique_ids():
    with pytest.raises(InvalidTaskError):
        validate_tasks([TaskSpec(1, 0, 0, 4, 2), TaskSpec(1, 0, 0, 6, 2)])


def test_classify_fault_table_rows():
    assert classify_fault(FaultClassRates(0.1, 0, 0, 0)) is FaultClass.PERMANENT
    assert classify_fault(FaultClassRates(0.1, 0, 0.5, 0)) is FaultClass.TRANSIENT
    assert classify_fault(FaultClassRates(0.1, 0.2, 0, 0.3)) is FaultClass.INTERMITTENT
    with pytest.raises(UnclassifiableFaultError):
        classify_fault(FaultClassRates(0, 0, 0, 0))
    with pytest.raises(InvalidParamsError):
        classify_fault(FaultClassRates(0.1, -0.1, 0, 0))


def test_fault_event_duration_rules():
    assert FaultEvent(1, 3).recover_at is None
    assert FaultEvent(2, 3, FaultClass.TRANSIENT, duration=2).recover_at == 5
    with pytest.raises(InvalidParamsError):
        FaultEvent(1, 3, FaultClass.PERMANENT, duration=2)
    with pytest.raises(InvalidParamsError):
        FaultEvent(1, 3, FaultClass.INTERMITTENT)
    with pytest.raises(InvalidParamsError):
        FaultEvent(1, -1)
    event = FaultEvent.from_dict({'proc': 2, 't': 4, 'class': 'Transient', 'duration': 3})
    assert event == FaultEvent(2, 4, FaultClass.TRANSIENT, 3)


def test_generate_workload_empty():
    assert generate_workload(WorkloadParams(task_count=0, seed=7)) == []


def test_generate_workload_is_deterministic():
    params = WorkloadParams(task_count=5, seed=42)
    assert generate_workload(params) == generate_workload(params)


def test_generate_workload_tasks_are_valid_and_sorted():
    params = WorkloadParams(task_count=20, c_range=(1, 4), laxity_range=(2, 10), seed=1)
    tasks = generate_workload(params)
    logging.info("first generated tasks: %s", tasks[:3])
    assert len(tasks) == 20
    assert [t.id for t in tasks] == list(range(1, 21))
    assert [t.a for t in tasks] == sorted(t.a for t in tasks)
    for task in tasks:
        validate_task(task)
        assert 1 <= task.c <= 4
        assert 2 <= task.laxity <= 10


def test_generate_workload_property_over_random_params():
    import numpy as np
    rng = np.random.default_rng(2024)
    for _ in range(50):
        lo_c = int(rng.integers(1, 4))
        params = WorkloadParams(task_count=int(rng.integers(0, 30)),
                                arrival_window=(0, int(rng.integers(0, 50))),
                                c_range=(lo_c, lo_c + int(rng.integers(0, 5))),
                                laxity_range=(0, int(rng.integers(0, 12))),
                                ready_offset=(0, int(rng.integers(0, 3))),
                                seed=int(rng.integers(0, 10_000)))
        tasks = generate_workload(params)
        assert tasks == generate_workload(params)
        validate_tasks(tasks)


def test_workload_params_validation():
    with pytest.raises(InvalidParamsError):
        WorkloadParams(task_count=3, c_range=(0, 2)).validate()
    with pytest.raises(InvalidParamsError):
        WorkloadParams(task_count=3, laxity_range=(5, 2)).validate()
    params = WorkloadParams.from_dict({'count': 4, 'c_range': [2, 3]})
    assert params.task_count == 4 and params.c_range == (2, 3)


def test_parse_task_lines():
    text = """
    # id a r d c
    1 0 0 6 2
    2 0 0 6 2   # trailing comment

    3 0 0 8 2
    """
    tasks = parse_task_lines(text.splitlines())
    assert tasks == [TaskSpec(1, 0, 0, 6, 2), TaskSpec(2, 0, 0, 6, 2), TaskSpec(3, 0, 0, 8, 2)]
    assert parse_task_lines(dump_task_lines(tasks).splitlines()) == tasks


def test_parse_task_lines_diagnostics():
    with pytest.raises(ScenarioError) as e:
        parse_task_lines(["1 0 0 6 2", "2 0 0 4 5"], source='tasks.txt')
    assert e.value.line == 2
    assert 'tasks.txt' in e.value.message and 'd >= r + c' in e.value.message

    with pytest.raises(ScenarioError) as e:
        parse_task_lines(["1 0 0 6"])
    assert e.value.line == 1

    with pytest.raises(ScenarioError) as e:
        parse_task_lines(["1 0 0 6 2", "1 0 0 8 2"])
    assert 'already defined on line 1' in e.value.message


def test_packaged_settings():
    assert get_setting('oracle', 'max_tasks') == 6
    policy = get_setting('scheduler', 'policy')
    policy['overloading'] = False
    assert get_setting('scheduler', 'policy')['overloading'] is True
    with pytest.raises(ConfigError) as e:
        get_setting('oracle', 'max_depth')
    assert 'oracle.max_depth' in str(e.value)
