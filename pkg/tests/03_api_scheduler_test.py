import logging
import numpy as np
import pytest
from fractions import Fraction
from ftrt.lib.errors import InvalidParamsError
from ftrt.api.model import TaskSpec, WorkloadParams, generate_workload
from ftrt.api.timeline import CopyKind, Interval, Reservation, SystemTimeline
from ftrt.api.scheduler import (SchedulerPolicy, RejectReason, AdmissionDecision,
                                admit, admit_batch, edf_order, place_backup, reject_reason_report)
from ftrt.api.oracle import check_reservations
from .conftest import tasks_from

P, B = CopyKind.PRIMARY, CopyKind.BACKUP


def placements(decisions):
    return {d.task: (d.primary, d.backup, d.overloaded) for d in decisions}


def test_policy_presets_and_backup_length():
    assert SchedulerPolicy.preset('edf').fault_tolerance is False
    assert SchedulerPolicy.preset('pb').overloading is False
    assert SchedulerPolicy.preset('pb-overload').name == 'pb-overload'
    half = SchedulerPolicy(overloading=True, backup_scale='1/2', fault_tolerance=True)
    assert half.backup_scale == Fraction(1, 2)
    assert half.name == 'custom'
    assert half.backup_length(3) == 2
    assert half.backup_length(1) == 1
    assert SchedulerPolicy.from_dict(half.to_dict()) == half
    with pytest.raises(InvalidParamsError):
        SchedulerPolicy.preset('rm')
    with pytest.raises(InvalidParamsError):
        SchedulerPolicy(backup_scale=0)
    with pytest.raises(InvalidParamsError):
        SchedulerPolicy(backup_scale=Fraction(3, 2))
    with pytest.raises(InvalidParamsError):
        SchedulerPolicy.from_dict({'overloading': 'yes'})


def test_edf_order_breaks_ties_by_id(three_tasks):
    assert [t.id for t in edf_order(reversed(three_tasks))] == [1, 2, 3]


def test_admit_batch_three_tasks_with_overloading(three_tasks, overload_policy):
    system, decisions = admit_batch(SystemTimeline.create(3), three_tasks, overload_policy)
    assert all(d.committed for d in decisions)
    placed = placements(decisions)
    assert placed[1] == (Reservation(1, P, 1, Interval(0, 2)), Reservation(1, B, 2, Interval(4, 6)), False)
    assert placed[2] == (Reservation(2, P, 2, Interval(0, 2)), Reservation(2, B, 1, Interval(4, 6)), False)
    assert placed[3] == (Reservation(3, P, 3, Interval(0, 2)), Reservation(3, B, 2, Interval(4, 6)), True)
    assert system.processor(2).reservations[-2:] == (placed[1][1], placed[3][1])


def test_admit_batch_three_tasks_without_overloading(three_tasks):
    _, decisions = admit_batch(SystemTimeline.create(3), three_tasks, SchedulerPolicy.preset('pb'))
    placed = placements(decisions)
    assert placed[3] == (Reservation(3, P, 3, Interval(0, 2)), Reservation(3, B, 1, Interval(6, 8)), False)


def test_admit_batch_plain_edf_reserves_no_backups(three_tasks):
    system, decisions = admit_batch(SystemTimeline.create(3), three_tasks, SchedulerPolicy.preset('edf'))
    assert all(d.committed and d.backup is None for d in decisions)
    assert [r.kind for r in system.reservations()] == [P, P, P]


def test_rejection_leaves_timeline_untouched():
    policy = SchedulerPolicy.preset('pb')
    system, decisions = admit_batch(SystemTimeline.create(2), tasks_from((0, 0, 4, 2), (0, 0, 4, 2)), policy)
    assert all(d.committed for d in decisions)

    after, decision = admit(system, TaskSpec(3, 0, 0, 4, 2), policy)
    assert after is system
    assert decision.reason is RejectReason.NO_PRIMARY

    empty = SystemTimeline.create(2)
    after, decision = admit(empty, TaskSpec(1, 0, 0, 2, 2), policy)
    assert after is empty
    assert decision.reason is RejectReason.NO_BACKUP
    assert decision.reason.token == 'no_backup_slot'
    assert RejectReason.from_token('no_primary_slot') is RejectReason.NO_PRIMARY


def test_place_backup_needs_room_after_primary():
    task = TaskSpec(1, 0, 0, 5, 2)
    primary = Reservation(1, P, 1, Interval(0, 2))
    system = SystemTimeline.create(2).reserve(primary)
    assert place_backup(system, task, primary, 2, True) == (Reservation(1, B, 2, Interval(3, 5)), False)
    assert place_backup(system, task, primary, 4, True) is None


def test_decisions_come_back_in_input_order(six_tasks, overload_policy):
    shuffled = [six_tasks[i] for i in (5, 2, 0, 4, 1, 3)]
    _, decisions = admit_batch(SystemTimeline.create(3), shuffled, overload_policy)
    assert [d.task for d in decisions] == [6, 3, 1, 5, 2, 4]


def test_reject_reason_report():
    decisions = [AdmissionDecision.rejected(1, RejectReason.NO_BACKUP),
                 AdmissionDecision.rejected(2, RejectReason.NO_PRIMARY),
                 AdmissionDecision.rejected(3, RejectReason.NO_BACKUP)]
    assert reject_reason_report(decisions) == {'no backup slot': 2, 'no primary slot': 1}
    assert AdmissionDecision.from_dict(decisions[0].to_dict()) == decisions[0]


def test_committed_placements_pass_independent_checker():
    rng = np.random.default_rng(3)
    policies = [SchedulerPolicy.preset('pb'), SchedulerPolicy.preset('pb-overload'),
                SchedulerPolicy(overloading=True, backup_scale=Fraction(1, 2), fault_tolerance=True)]
    committed_total = 0
    for _ in range(150):
        processors = int(rng.integers(2, 5))
        tasks = generate_workload(WorkloadParams(task_count=int(rng.integers(1, 15)),
                                                 arrival_window=(0, 0),
                                                 c_range=(1, 4), laxity_range=(0, 8),
                                                 seed=int(rng.integers(0, 100_000))))
        policy = policies[int(rng.integers(0, len(policies)))]
        system, decisions = admit_batch(SystemTimeline.create(processors), tasks, policy)
        committed = {d.task for d in decisions if d.committed}
        committed_total += len(committed)
        assert {r.task for r in system.reservations()} == committed
        assert not check_reservations([t for t in tasks if t.id in committed], system.reservations(),
                                      processors, policy.backup_scale)
        for d in decisions:
            if d.overloaded:
                shared = [r for r in system.processor(d.backup.processor).overlapping(d.backup.interval)
                          if r.kind is B and r.task != d.task]
                assert shared
    logging.info("checked %d committed tasks", committed_total)

