"""Task and fault domain types.

Exposes the aperiodic task tuple with its validation, the fault taxonomy
with rate-based classification, the seeded workload generator and the
line-oriented task file format.
"""

from .task import TaskSpec, validate_task, validate_tasks
from .fault import FaultClass, FaultClassRates, FaultEvent, classify_fault
from .workload import WorkloadParams, generate_workload
from .taskfile import parse_task_lines, load_task_file, dump_task_lines

__all__ = ['TaskSpec', 'validate_task', 'validate_tasks',
           'FaultClass', 'FaultClassRates', 'FaultEvent', 'classify_fault',
           'WorkloadParams', 'generate_workload',
           'parse_task_lines', 'load_task_file', 'dump_task_lines']
