"""Line-oriented task records: `id a r d c`, one task per line.

Blank lines and anything after `#` are ignored.
"""

from __future__ import annotations
from pathlib import Path
from ftrt.lib.errors import InvalidTaskError, ScenarioError
from .task import TaskSpec, validate_task
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Iterable, List, Optional, Union


def parse_task_lines(lines: Iterable[str], source: Optional[str] = None) -> List[TaskSpec]:
    tasks = []
    seen = {}
    for line_num, line in enumerate(lines, start=1):
        body = line.split('#', 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if len(fields) != 5:
            raise ScenarioError(f"expected 5 fields 'id a r d c', got {len(fields)}",
                                file_name=source, line=line_num)
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise ScenarioError(f"non-integer field in {body!r}", file_name=source, line=line_num)
        spec = TaskSpec(*values)
        try:
            validate_task(spec)
        except InvalidTaskError as e:
            raise ScenarioError(e.message, file_name=source, line=line_num)
        if spec.id in seen:
            raise ScenarioError(f"task id {spec.id} already defined on line {seen[spec.id]}",
                                file_name=source, line=line_num)
        seen[spec.id] = line_num
        tasks.append(spec)
    return tasks


def load_task_file(path: Union[str, Path]) -> List[TaskSpec]:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf8')
    except OSError as e:
        raise ScenarioError(f"cannot read task file: {e.strerror}", file_name=path)
    return parse_task_lines(text.splitlines(), source=str(path))


def dump_task_lines(tasks: Iterable[TaskSpec]) -> str:
    lines = ['# id a r d c']
    lines.extend(f"{t.id} {t.a} {t.r} {t.d} {t.c}" for t in tasks)
    return '\n'.join(lines) + '\n'
