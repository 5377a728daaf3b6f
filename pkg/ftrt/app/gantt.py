"""Gantt views of a run: a text grid and an optional SVG.

Cell labels::

    P<id>  executed primary        x<id>  killed or cancelled copy
    B<id>  executed backup         b<id>  backup still reserved
    ~<id>  deallocated or moved backup

A cell holding two or more backups is prefixed with `*` and joins the labels with `/`.
"""

from __future__ import annotations
import logging
from pathlib import Path
from ftrt import get_setting
from ftrt.lib.errors import InvalidParamsError
from ftrt.api.timeline import CopyKind
from ftrt.api.engine import ReservationStatus
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import List, Union
    from ftrt.api.engine import SimReport, ReservationRecord


logger = logging.getLogger(__name__)

_COLORS = {'P': '#4682b4', 'x': '#d9534f', 'B': '#2e8b57', 'b': '#a3d9a5', '~': '#d3d3d3'}


def cell_label(record: ReservationRecord) -> str:
    status = record.status
    if status in (ReservationStatus.KILLED, ReservationStatus.CANCELLED) and record.kind is CopyKind.PRIMARY:
        mark = 'x'
    elif record.kind is CopyKind.PRIMARY:
        mark = 'P'
    elif status is ReservationStatus.EXECUTED:
        mark = 'B'
    elif status is ReservationStatus.KILLED:
        mark = 'x'
    elif status is ReservationStatus.RESERVED:
        mark = 'b'
    else:
        mark = '~'
    return f"{mark}{record.task}"


def gantt_grid(report: SimReport) -> List[List[List[str]]]:
    """Labels per processor row and time column, in reservation order."""
    width = max([report.horizon] + [r.interval.end for r in report.reservations])
    grid: List[List[List[str]]] = [[[] for _ in range(width)] for _ in range(report.processors)]
    for record in report.reservations:
        label = cell_label(record)
        row = grid[record.processor - 1]
        for t in range(record.interval.start, record.interval.end):
            row[t].append(label)
    return grid


def _cell_text(labels: List[str]) -> str:
    if not labels:
        return '.'
    text = '/'.join(labels)
    backups = [label for label in labels if label[0] in 'Bb~']
    return f"*{text}" if len(backups) >= 2 else text


def render_text(report: SimReport) -> str:
    grid = gantt_grid(report)
    cells = [[_cell_text(labels) for labels in row] for row in grid]
    width = max([get_setting('gantt', 'cell_width')] + [len(c) + 1 for row in cells for c in row])
    columns = len(grid[0]) if grid else 0
    lines = ['    ' + ''.join(f"{t:<{width}}" for t in range(columns))]
    for proc, row in enumerate(cells, start=1):
        lines.append(f"P{proc:<3}" + ''.join(f"{c:<{width}}" for c in row).rstrip())
    return '\n'.join(lines) + '\n'


def render_svg(report: SimReport, path: Union[str, Path]) -> Path:
    """Draw the grid with svgwrite (install the `svg` extra).

    Raises:
        InvalidParamsError: If svgwrite is not installed.
    """
    try:
        import svgwrite
    except ImportError:
        raise InvalidParamsError("SVG output needs svgwrite; install ftrt[svg]")
    geometry = get_setting('gantt', 'svg')
    unit, row_h, margin = geometry['unit'], geometry['row'], geometry['margin']
    grid = gantt_grid(report)
    columns = len(grid[0]) if grid else 0
    path = Path(path)
    dwg = svgwrite.Drawing(str(path), size=(2 * margin + unit * columns, 2 * margin + row_h * len(grid)),
                           profile='tiny')
    dwg.add(dwg.rect(insert=(0, 0), size=('100%', '100%'), fill='white'))
    for t in range(columns + 1):
        x = margin + unit * t
        dwg.add(dwg.line(start=(x, margin - 6), end=(x, margin + row_h * len(grid)), stroke='#cccccc'))
        if t < columns:
            dwg.add(dwg.text(str(t), insert=(x + 2, margin - 10), font_size=10))
    for p, row in enumerate(grid):
        y = margin + row_h * p
        dwg.add(dwg.text(f"P{p + 1}", insert=(margin - 30, y + row_h * 0.6), font_size=12))
        for t, labels in enumerate(row):
            if not labels:
                continue
            x = margin + unit * t
            shared = len(labels) > 1
            dwg.add(dwg.rect(insert=(x, y + 2), size=(unit, row_h - 4), fill=_COLORS[labels[0][0]],
                             stroke='black' if shared else 'white', stroke_width=2 if shared else 1))
            dwg.add(dwg.text(_cell_text(labels), insert=(x + 2, y + row_h * 0.6), font_size=8))
    dwg.save()
    logger.info("Gantt SVG written to %s", path)
    return path
