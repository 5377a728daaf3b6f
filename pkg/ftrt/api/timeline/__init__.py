"""Per-processor reservation timelines with space/time exclusion and backup overloading."""

from .interval import CopyKind, Interval, Reservation
from .processor import ProcessorTimeline, free_gaps
from .system import SystemTimeline

__all__ = ['CopyKind', 'Interval', 'Reservation', 'ProcessorTimeline', 'SystemTimeline', 'free_gaps']
