from __future__ import annotations
from enum import Enum
from dataclasses import dataclass
from ftrt.lib.errors import InvalidParamsError


class CopyKind(str, Enum):
    PRIMARY = 'P'
    BACKUP = 'B'

    @property
    def label(self) -> str:
        return 'Pri' if self is CopyKind.PRIMARY else 'Bk'


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open slot range [start, end) in integer time units."""
    start: int
    end: int

    def __post_init__(self):
        if self.end <= self.start:
            raise InvalidParamsError(f"Interval end must exceed start (got [{self.start},{self.end}))")

    @property
    def length(self) -> int:
        return self.end - self.start

    def overlaps(self, other: 'Interval') -> bool:
        return self.start < other.end and other.start < self.end

    def overlap(self, other: 'Interval') -> int:
        return max(0, min(self.end, other.end) - max(self.start, other.start))

    def contains(self, other: 'Interval') -> bool:
        return self.start <= other.start and other.end <= self.end

    def __str__(self):
        return f"[{self.start},{self.end})"


@dataclass(frozen=True)
class Reservation:
    """A slot commitment of one copy of a task on one processor."""
    task: int
    kind: CopyKind
    processor: int
    interval: Interval

    @property
    def start(self) -> int:
        return self.interval.start

    @property
    def end(self) -> int:
        return self.interval.end

    @property
    def key(self):
        return (self.task, self.kind)

    def to_dict(self) -> dict:
        return {'task': self.task, 'kind': self.kind.value, 'proc': self.processor,
                'start': self.start, 'end': self.end}

    @classmethod
    def from_dict(cls, data: dict) -> 'Reservation':
        return cls(task=int(data['task']), kind=CopyKind(data['kind']), processor=int(data['proc']),
                   interval=Interval(int(data['start']), int(data['end'])))

    def __str__(self):
        return f"{self.kind.label}(T{self.task},P{self.processor},{self.interval})"
