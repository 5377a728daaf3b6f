"""Fault classes and the rate tuples that distinguish them.

A fault is described by four per-time-unit rates: `a` (occurrence),
`b` (active -> benign), `c` (active -> gone) and `d` (benign -> active).
Only the sign pattern of the tuple decides the class:

    Permanent     a > 0, b = c = d = 0
    Transient     a > 0, b = 0, c > 0, d = 0
    Intermittent  a > 0, b > 0, c = 0, d > 0
"""

from __future__ import annotations
from enum import Enum
from dataclasses import dataclass
from ftrt.lib.errors import UnclassifiableFaultError, InvalidParamsError
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Optional


class FaultClass(str, Enum):
    PERMANENT = 'permanent'
    TRANSIENT = 'transient'
    INTERMITTENT = 'intermittent'

    @classmethod
    def parse(cls, value) -> 'FaultClass':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InvalidParamsError(f"Unknown fault class {value!r}; "
                                     f"expected one of {[c.value for c in cls]}")


@dataclass(frozen=True)
class FaultClassRates:
    a: float
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def to_dict(self) -> dict:
        return {'a': self.a, 'b': self.b, 'c': self.c, 'd': self.d}

    @classmethod
    def from_dict(cls, data: dict) -> 'FaultClassRates':
        return cls(**{k: float(data.get(k, 0.0)) for k in ('a', 'b', 'c', 'd')})


@dataclass(frozen=True)
class FaultEvent:
    """A fault striking `processor` at time `t`.

    Non-permanent faults keep the processor down for `duration` time units.
    """
    processor: int
    t: int
    fault_class: FaultClass = FaultClass.PERMANENT
    duration: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'fault_class', FaultClass.parse(self.fault_class))
        if self.t < 0:
            raise InvalidParamsError(f"Fault time must be >= 0 (got {self.t})")
        if self.fault_class is FaultClass.PERMANENT:
            if self.duration is not None:
                raise InvalidParamsError("A permanent fault has no duration")
        elif self.duration is None or self.duration < 1:
            raise InvalidParamsError(f"A {self.fault_class.value} fault needs a duration >= 1 "
                                     f"(got {self.duration})")

    @property
    def recover_at(self) -> Optional[int]:
        return None if self.duration is None else self.t + self.duration

    def to_dict(self) -> dict:
        return {'proc': self.processor, 't': self.t,
                'class': self.fault_class.value, 'duration': self.duration}

    @classmethod
    def from_dict(cls, data: dict) -> 'FaultEvent':
        return cls(processor=int(data['proc']), t=int(data['t']),
                   fault_class=FaultClass.parse(data.get('class', 'permanent')),
                   duration=None if data.get('duration') is None else int(data['duration']))


def classify_fault(rates: FaultClassRates) -> FaultClass:
    """Classify a rate tuple by its sign pattern.

    Raises:
        InvalidParamsError: If any rate is negative.
        UnclassifiableFaultError: If the pattern matches none of the three classes.
    """
    a, b, c, d = rates.a, rates.b, rates.c, rates.d
    if min(a, b, c, d) < 0:
        raise InvalidParamsError(f"Fault rates must be nonnegative: {rates}")
    if a > 0:
        if b == 0 and c == 0 and d == 0:
            return FaultClass.PERMANENT
        if b == 0 and c > 0 and d == 0:
            return FaultClass.TRANSIENT
        if b > 0 and c == 0 and d > 0:
            return FaultClass.INTERMITTENT
    raise UnclassifiableFaultError(rates)
