"""Trace events and their line format.

Every event is one line::

    t=<int> <KIND> task=<id|-> proc=<id|-> kind=<P|B|->[ slot=<s>:<e>][ note=<token>]
"""

from __future__ import annotations
import re
from dataclasses import dataclass
from enum import Enum
from ftrt.lib.errors import MalformedTraceError, InvalidParamsError
from ftrt.api.timeline import CopyKind, Interval
from ftrt.api.scheduler import RejectReason
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Iterable, List, Optional


class EventKind(str, Enum):
    BEGIN = 'BEGIN'
    END = 'END'
    ARRIVE = 'ARRIVE'
    RESERVE = 'RESERVE'
    COMMIT = 'COMMIT'
    REJECT = 'REJECT'
    START = 'START'
    COMPLETE = 'COMPLETE'
    DEALLOC = 'DEALLOC'
    FAULT = 'FAULT'
    CRASH = 'CRASH'
    RECOVER = 'RECOVER'
    PROMOTE = 'PROMOTE'
    REPLACE = 'REPLACE'
    WARN = 'WARN'
    MISS = 'MISS'


@dataclass(frozen=True)
class TraceEvent:
    t: int
    kind: EventKind
    task: Optional[int] = None
    proc: Optional[int] = None
    copy: Optional[CopyKind] = None
    slot: Optional[Interval] = None
    note: Optional[str] = None

    def format(self) -> str:
        def opt(value):
            return '-' if value is None else str(value)

        line = (f"t={self.t} {self.kind.value} task={opt(self.task)} proc={opt(self.proc)} "
                f"kind={'-' if self.copy is None else self.copy.value}")
        if self.slot is not None:
            line += f" slot={self.slot.start}:{self.slot.end}"
        if self.note is not None:
            line += f" note={self.note}"
        return line

    def __str__(self):
        return self.format()


_LINE = re.compile(r'^t=(?P<t>\d+) (?P<kind>[A-Z]+) task=(?P<task>\d+|-) proc=(?P<proc>\d+|-) '
                   r'kind=(?P<copy>[PB]|-)(?: slot=(?P<s>\d+):(?P<e>\d+))?(?: note=(?P<note>\S+))?$')


def parse_event(line: str, line_num: Optional[int] = None) -> TraceEvent:
    m = _LINE.match(line.strip())
    if m is None:
        raise MalformedTraceError(f"unparsable event {line.strip()!r}", line=line_num)
    try:
        kind = EventKind(m['kind'])
    except ValueError:
        raise MalformedTraceError(f"unknown event kind {m['kind']!r}", line=line_num)
    slot = None
    if m['s'] is not None:
        try:
            slot = Interval(int(m['s']), int(m['e']))
        except InvalidParamsError as e:
            raise MalformedTraceError(e.message, line=line_num)
    if kind is EventKind.REJECT:
        try:
            RejectReason.from_token(m['note'] or '')
        except ValueError:
            raise MalformedTraceError(f"REJECT without a known reason (note={m['note']})", line=line_num)
    return TraceEvent(t=int(m['t']), kind=kind,
                      task=None if m['task'] == '-' else int(m['task']),
                      proc=None if m['proc'] == '-' else int(m['proc']),
                      copy=None if m['copy'] == '-' else CopyKind(m['copy']),
                      slot=slot, note=m['note'])


def parse_trace(lines: Iterable[str]) -> List[TraceEvent]:
    """Parse trace lines back into events; blank lines are skipped.

    Raises:
        MalformedTraceError: On an unparsable line or a decreasing timestamp.
    """
    events: List[TraceEvent] = []
    for line_num, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        event = parse_event(line, line_num)
        if events and event.t < events[-1].t:
            raise MalformedTraceError(f"time goes backwards ({events[-1].t} -> {event.t})", line=line_num)
        events.append(event)
    return events


def format_trace(events: Iterable[TraceEvent]) -> str:
    return ''.join(f"{e.format()}\n" for e in events)
