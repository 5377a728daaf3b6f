from __future__ import annotations
import math
from dataclasses import dataclass, field
from fractions import Fraction
from ftrt import get_setting
from ftrt.lib.errors import InvalidParamsError
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict


def _policy_default(key):
    return field(default_factory=lambda: get_setting('scheduler', 'policy', key))


@dataclass(frozen=True)
class SchedulerPolicy:
    """Admission switches.

    Attributes:
        overloading (bool): Try to share an existing backup slot before taking a fresh one.
        backup_scale (Fraction): Backup length as a fraction of c, in (0, 1].
        fault_tolerance (bool): Reserve a backup at all. When off, admission is plain EDF.
    """
    overloading: bool = _policy_default('overloading')
    backup_scale: Fraction = _policy_default('backup_scale')
    fault_tolerance: bool = _policy_default('fault_tolerance')

    def __post_init__(self):
        try:
            scale = Fraction(str(self.backup_scale))
        except (ValueError, ZeroDivisionError):
            raise InvalidParamsError(f"backup_scale is not a rational number: {self.backup_scale!r}")
        if not 0 < scale <= 1:
            raise InvalidParamsError(f"backup_scale must lie in (0, 1] (got {scale})")
        object.__setattr__(self, 'backup_scale', scale)

    def backup_length(self, c: int) -> int:
        return max(1, math.ceil(c * self.backup_scale))

    @property
    def name(self) -> str:
        for name, preset in PRESETS.items():
            if preset == self:
                return name
        return 'custom'

    @classmethod
    def preset(cls, name: str) -> 'SchedulerPolicy':
        try:
            return PRESETS[name]
        except KeyError:
            raise InvalidParamsError(f"Unknown policy '{name}'; expected one of {sorted(PRESETS)}")

    def to_dict(self) -> dict:
        return {'overloading': self.overloading,
                'backup_scale': str(self.backup_scale),
                'fault_tolerance': self.fault_tolerance}

    @classmethod
    def from_dict(cls, data: dict) -> 'SchedulerPolicy':
        kwargs = {k: data[k] for k in ('overloading', 'backup_scale', 'fault_tolerance') if k in data}
        for key in ('overloading', 'fault_tolerance'):
            if key in kwargs and not isinstance(kwargs[key], bool):
                raise InvalidParamsError(f"{key} must be a boolean (got {kwargs[key]!r})")
        return cls(**kwargs)


PRESETS: Dict[str, SchedulerPolicy] = {
    'edf': SchedulerPolicy(overloading=False, backup_scale=Fraction(1), fault_tolerance=False),
    'pb': SchedulerPolicy(overloading=False, backup_scale=Fraction(1), fault_tolerance=True),
    'pb-overload': SchedulerPolicy(overloading=True, backup_scale=Fraction(1), fault_tolerance=True),
}
