"""Scenario documents (JSON) and their translation into a `SimConfig`.

Recognised keys::

    processors   int (default: simulation.processors)
    horizon      int (default: latest deadline)
    policy       preset name ("edf", "pb", "pb-overload") or
                 {overloading, backup_scale, fault_tolerance}
    tasks        [{id, a, r, d, c}, ...] or a string of `id a r d c` lines
    tasks_file   path of an `id a r d c` file, relative to the scenario
    workload     {count, arrival_window, c_range, laxity_range, ready_offset}
    faults       [{proc, t, class, duration}, ...]
    fault_rates  {a, b, c, d} for every processor, or {"<proc>": {a, b, c, d}, ...}
    seed         int
"""

from __future__ import annotations
import json
import logging
from pathlib import Path
from ftrt import get_setting
from ftrt.lib.errors import Error, ScenarioError, InvalidTaskError
from ftrt.api.model import (TaskSpec, FaultEvent, FaultClassRates, WorkloadParams,
                            validate_task, parse_task_lines, load_task_file, classify_fault)
from ftrt.api.scheduler import SchedulerPolicy
from ftrt.api.engine import SimConfig
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Any, Dict, List, Optional, Union


logger = logging.getLogger(__name__)

KNOWN_KEYS = {'processors', 'horizon', 'policy', 'tasks', 'tasks_file', 'workload',
              'faults', 'fault_rates', 'seed', 'description'}


class _Fields:
    """Builds ScenarioErrors that name the offending field."""

    def __init__(self, source: Optional[str]):
        self.source = source

    def error(self, message: str, field: str) -> ScenarioError:
        return ScenarioError(message, file_name=self.source, field=field)

    def integer(self, value: Any, field: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(f"expected an integer, got {value!r}", field)
        return value


def _policy(raw: Any, fields: _Fields) -> SchedulerPolicy:
    if raw is None:
        return SchedulerPolicy()
    try:
        if isinstance(raw, str):
            return SchedulerPolicy.preset(raw)
        if isinstance(raw, dict):
            return SchedulerPolicy.from_dict(raw)
    except Error as e:
        raise fields.error(e.message, 'policy')
    raise fields.error(f"expected a preset name or a mapping, got {raw!r}", 'policy')


def _tasks(data: dict, fields: _Fields, base_dir: Optional[Path]) -> Optional[List[TaskSpec]]:
    if 'tasks' in data and 'tasks_file' in data:
        raise fields.error("give either tasks or tasks_file, not both", 'tasks')
    if 'tasks_file' in data:
        if not isinstance(data['tasks_file'], str) or not data['tasks_file'].strip():
            raise fields.error(f"expected a file path, got {data['tasks_file']!r}", 'tasks_file')
        path = Path(data['tasks_file'])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_task_file(path)
    raw = data.get('tasks')
    if raw is None:
        return None
    if isinstance(raw, str):
        return parse_task_lines(raw.splitlines(), source=fields.source)
    if not isinstance(raw, list):
        raise fields.error(f"expected a list of tasks, got {type(raw).__name__}", 'tasks')
    tasks, seen = [], set()
    for i, item in enumerate(raw):
        field = f"tasks[{i}]"
        if not isinstance(item, dict):
            raise fields.error(f"expected a mapping, got {item!r}", field)
        missing = [k for k in ('id', 'a', 'r', 'd', 'c') if k not in item]
        if missing:
            raise fields.error(f"missing key(s) {', '.join(missing)}", field)
        spec = TaskSpec.from_dict(item)
        try:
            validate_task(spec)
        except InvalidTaskError as e:
            raise fields.error(e.message, field)
        if spec.id in seen:
            raise fields.error(f"task id {spec.id} is not unique", f"{field}.id")
        seen.add(spec.id)
        tasks.append(spec)
    return tasks


def _faults(raw: Any, fields: _Fields) -> Optional[List[FaultEvent]]:
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise fields.error(f"expected a list of faults, got {type(raw).__name__}", 'faults')
    events = []
    for i, item in enumerate(raw):
        try:
            events.append(FaultEvent.from_dict(item))
        except KeyError as e:
            raise fields.error(f"missing key {e.args[0]!r}", f"faults[{i}]")
        except (TypeError, ValueError, AttributeError) as e:
            raise fields.error(str(e), f"faults[{i}]")
        except Error as e:
            raise fields.error(e.message, f"faults[{i}]")
    return events


def _rates(raw: Any, field: str, fields: _Fields) -> FaultClassRates:
    if not isinstance(raw, dict) or not set(raw) <= {'a', 'b', 'c', 'd'}:
        raise fields.error(f"expected a mapping of rates a, b, c, d, got {raw!r}", field)
    try:
        rates = FaultClassRates.from_dict(raw)
        classify_fault(rates)
    except (TypeError, ValueError) as e:
        raise fields.error(str(e), field)
    except Error as e:
        raise fields.error(e.message, field)
    return rates


def _fault_rates(raw: Any, processors: int, fields: _Fields) -> Optional[Dict[int, FaultClassRates]]:
    if raw is None:
        return None
    if isinstance(raw, dict) and set(raw) <= {'a', 'b', 'c', 'd'}:
        rates = _rates(raw, 'fault_rates', fields)
        return {p: rates for p in range(1, processors + 1)}
    if not isinstance(raw, dict):
        raise fields.error(f"expected a mapping, got {raw!r}", 'fault_rates')
    by_proc = {}
    for key, value in raw.items():
        try:
            proc = int(key)
        except ValueError:
            raise fields.error(f"processor key {key!r} is not an integer", 'fault_rates')
        by_proc[proc] = _rates(value, f"fault_rates.{key}", fields)
    return by_proc


def _workload(raw: Any, processors: int, fields: _Fields) -> Optional[WorkloadParams]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise fields.error(f"expected a mapping, got {raw!r}", 'workload')
    try:
        return WorkloadParams.from_dict({'processors': processors, **raw}).validate()
    except (TypeError, ValueError, KeyError) as e:
        raise fields.error(str(e), 'workload')
    except Error as e:
        raise fields.error(e.message, 'workload')


def parse_scenario(data: Any, source: Optional[str] = None, base_dir: Optional[Path] = None) -> SimConfig:
    """Translate a decoded scenario document into a validated `SimConfig`.

    Raises:
        ScenarioError: Names the file and the offending field.
    """
    fields = _Fields(source)
    if not isinstance(data, dict):
        raise fields.error("a scenario must be a JSON object", '<root>')
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise fields.error(f"unknown key(s) {', '.join(unknown)}", '<root>')

    processors = fields.integer(data.get('processors', get_setting('simulation', 'processors')), 'processors')
    horizon = None
    if data.get('horizon') is not None:
        horizon = fields.integer(data['horizon'], 'horizon')
    workload = _workload(data.get('workload'), processors, fields)
    if 'seed' in data:
        seed = fields.integer(data['seed'], 'seed')
    else:
        seed = workload.seed if workload is not None else 0

    sim = SimConfig(processors=processors,
                    horizon=horizon,
                    tasks=_tasks(data, fields, base_dir),
                    workload=workload,
                    faults=_faults(data.get('faults'), fields),
                    fault_rates=_fault_rates(data.get('fault_rates'), processors, fields),
                    policy=_policy(data.get('policy'), fields),
                    seed=seed)
    try:
        sim.validate()
    except Error as e:
        raise fields.error(e.message, '<root>')
    logger.debug("scenario %s: P=%d, %d task(s), %d fault(s)", source, sim.processors,
                 len(sim.task_set), len(sim.fault_script))
    return sim


def load_scenario(path: Union[str, Path]) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf8')
    except OSError as e:
        raise ScenarioError(f"cannot read scenario: {e.strerror}", file_name=path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(e.msg, file_name=path, line=e.lineno)
    return parse_scenario(data, source=str(path), base_dir=path.parent)
