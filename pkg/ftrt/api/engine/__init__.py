"""Discrete-time simulation of arrivals, execution, deallocation, faults and promotion."""

from .config import SimConfig
from .faults import FaultState, fault_machine_step, expand_fault_rates
from .trace import EventKind, TraceEvent, parse_event, parse_trace, format_trace
from .metrics import Metrics, compute_metrics
from .report import SimReport, ReservationRecord, ReservationStatus, inputs_digest
from .simulator import Simulator, run, tick

__all__ = ['SimConfig', 'FaultState', 'fault_machine_step', 'expand_fault_rates',
           'EventKind', 'TraceEvent', 'parse_event', 'parse_trace', 'format_trace',
           'Metrics', 'compute_metrics', 'SimReport', 'ReservationRecord', 'ReservationStatus',
           'inputs_digest', 'Simulator', 'run', 'tick']
