"""Run reports and their JSON form.

A report echoes the resolved configuration (explicit tasks and fault
script), the full trace, the metrics, every admission decision and the
final status of every reservation ever made.
"""

from __future__ import annotations
import json
import hashlib
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from ftrt import __version__
from ftrt.lib.errors import MalformedReportError, MalformedTraceError, Error
from ftrt.api.model import TaskSpec, FaultEvent
from ftrt.api.scheduler import AdmissionDecision
from ftrt.api.timeline import CopyKind, Interval
from .metrics import Metrics, compute_metrics
from .trace import parse_trace, format_trace
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import List, Union
    from .trace import TraceEvent


class ReservationStatus(str, Enum):
    RESERVED = 'reserved'
    EXECUTED = 'executed'
    DEALLOCATED = 'deallocated'
    KILLED = 'killed'
    CANCELLED = 'cancelled'
    MOVED = 'moved'


@dataclass
class ReservationRecord:
    task: int
    kind: CopyKind
    processor: int
    interval: Interval
    status: ReservationStatus = ReservationStatus.RESERVED

    def to_dict(self) -> dict:
        return {'task': self.task, 'kind': self.kind.value, 'proc': self.processor,
                'start': self.interval.start, 'end': self.interval.end, 'status': self.status.value}

    @classmethod
    def from_dict(cls, data: dict) -> 'ReservationRecord':
        return cls(task=int(data['task']), kind=CopyKind(data['kind']), processor=int(data['proc']),
                   interval=Interval(int(data['start']), int(data['end'])),
                   status=ReservationStatus(data['status']))


def inputs_digest(processors: int, horizon: int, tasks: List[TaskSpec], faults: List[FaultEvent]) -> str:
    """SHA-256 over the canonical JSON of everything but the policy."""
    canonical = json.dumps({'processors': processors,
                            'horizon': horizon,
                            'tasks': [t.to_dict() for t in tasks],
                            'faults': [f.to_dict() for f in faults]},
                           sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf8')).hexdigest()


@dataclass
class SimReport:
    config: dict
    trace: List[TraceEvent]
    metrics: Metrics
    decisions: List[AdmissionDecision] = field(default_factory=list)
    reservations: List[ReservationRecord] = field(default_factory=list)
    inputs_sha256: str = ''

    @property
    def tasks(self) -> List[TaskSpec]:
        return [TaskSpec.from_dict(t) for t in self.config.get('tasks', [])]

    @property
    def faults(self) -> List[FaultEvent]:
        return [FaultEvent.from_dict(f) for f in self.config.get('faults', [])]

    @property
    def processors(self) -> int:
        return int(self.config['processors'])

    @property
    def horizon(self) -> int:
        return int(self.config['horizon'])

    @property
    def committed_tasks(self) -> List[int]:
        return [d.task for d in self.decisions if d.committed]

    def trace_text(self) -> str:
        return format_trace(self.trace)

    def to_dict(self) -> dict:
        return {'ftrt_version': __version__,
                'config': self.config,
                'inputs_sha256': self.inputs_sha256,
                'metrics': self.metrics.to_dict(),
                'decisions': [d.to_dict() for d in self.decisions],
                'reservations': [r.to_dict() for r in self.reservations],
                'trace': [e.format() for e in self.trace]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'

    @classmethod
    def from_dict(cls, data: dict) -> 'SimReport':
        trace = parse_trace(data['trace'])
        stored = Metrics.from_dict(data['metrics'])
        if stored != compute_metrics(trace):
            raise MalformedReportError("metrics do not match the trace")
        return cls(config=data['config'],
                   trace=trace,
                   metrics=stored,
                   decisions=[AdmissionDecision.from_dict(d) for d in data.get('decisions', [])],
                   reservations=[ReservationRecord.from_dict(r) for r in data.get('reservations', [])],
                   inputs_sha256=data.get('inputs_sha256', ''))

    @classmethod
    def from_json(cls, text: str) -> 'SimReport':
        try:
            return cls.from_dict(json.loads(text))
        except MalformedTraceError as e:
            raise MalformedReportError(f"bad trace: {e.message}")
        except Error:
            raise
        except (ValueError, KeyError, TypeError) as e:
            raise MalformedReportError(f"not a report document ({e.__class__.__name__}: {e})")

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding='utf8')
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'SimReport':
        path = Path(path)
        try:
            text = path.read_text(encoding='utf8')
        except OSError as e:
            raise MalformedReportError(f"cannot read report: {e.strerror}", file_name=path)
        try:
            return cls.from_json(text)
        except MalformedReportError as e:
            raise MalformedReportError(e.message, file_name=path)
