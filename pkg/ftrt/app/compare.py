"""Side-by-side runs of the three admission policies on identical inputs."""

from __future__ import annotations
import json
import logging
from dataclasses import dataclass
from ftrt.lib.errors import InvariantBreach
from ftrt.api.scheduler import SchedulerPolicy
from ftrt.api.engine import run
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, Tuple
    from ftrt.api.engine import SimConfig, SimReport, Metrics


logger = logging.getLogger(__name__)

POLICIES: Tuple[str, ...] = ('edf', 'pb', 'pb-overload')
TABLE_COLUMNS = (('guarantee_ratio', 'GR', '{:.3f}'),
                 ('utilization', 'util', '{:.3f}'),
                 ('reserved_backup_time', 'bk-reserved', '{:d}'),
                 ('backup_slots_saved', 'bk-saved', '{:d}'),
                 ('reclaimed_backup_time', 'reclaimed', '{:d}'),
                 ('misses', 'misses', '{:d}'))


@dataclass
class ComparisonReport:
    """Metrics of each policy plus the overload policy's deltas against the others.

    Attributes:
        inputs_sha256 (str): Digest shared by the runs' tasks and fault script.
        metrics (Dict[str, Metrics]): Per policy name, in `POLICIES` order.
        reports (Dict[str, SimReport]): The underlying runs.
    """
    inputs_sha256: str
    metrics: Dict[str, Metrics]
    reports: Dict[str, SimReport]

    @property
    def deltas(self) -> Dict[str, Dict[str, float]]:
        """`pb-overload` minus each baseline, for every numeric metric."""
        target = self.metrics['pb-overload'].to_dict()
        result = {}
        for name in ('edf', 'pb'):
            base = self.metrics[name].to_dict()
            result[f"pb-overload-vs-{name}"] = {k: target[k] - base[k] for k in target}
        return result

    def table(self) -> str:
        header = f"{'policy':<12}" + ''.join(f"{label:>12}" for _, label, _ in TABLE_COLUMNS)
        lines = [header, '-' * len(header)]
        for name, metrics in self.metrics.items():
            values = metrics.to_dict()
            lines.append(f"{name:<12}" + ''.join(f"{fmt.format(values[key]):>12}"
                                                 for key, _, fmt in TABLE_COLUMNS))
        return '\n'.join(lines)

    def to_dict(self) -> dict:
        return {'inputs_sha256': self.inputs_sha256,
                'metrics': {name: m.to_dict() for name, m in self.metrics.items()},
                'deltas': self.deltas}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'


def compare(sim_config: SimConfig) -> ComparisonReport:
    """Run `sim_config` under every policy of `POLICIES`.

    Stochastic faults and generated workloads are resolved once, so the three
    runs see the same tasks and the same fault script.

    Raises:
        InvariantBreach: If the runs did not consume identical inputs.
    """
    resolved = sim_config.validate().resolved()
    reports = {name: run(resolved.with_policy(SchedulerPolicy.preset(name))) for name in POLICIES}
    digests = {r.inputs_sha256 for r in reports.values()}
    if len(digests) != 1:
        logger.error("policy runs saw different inputs: %s", sorted(digests))
        raise InvariantBreach("compared runs consumed different inputs")
    logger.info("compared %d policies on inputs %s", len(reports), next(iter(digests))[:12])
    return ComparisonReport(inputs_sha256=digests.pop(),
                            metrics={name: r.metrics for name, r in reports.items()},
                            reports=reports)
