"""Independent verifier, exhaustive feasibility search and single-fault sweep."""

from .checker import (Violation, Schedule, check_reservations, verify_schedule,
                      fault_victims, expected_backup_length)
from .search import brute_force_feasible
from .sweep import SweepResult, fault_sweep, strike_points

__all__ = ['Violation', 'Schedule', 'check_reservations', 'verify_schedule', 'fault_victims',
           'expected_backup_length', 'brute_force_feasible', 'SweepResult', 'fault_sweep', 'strike_points']
