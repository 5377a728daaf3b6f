"""Seeded batches of policy comparisons with order-fixed aggregation."""

from __future__ import annotations
import json
import logging
import numpy as np
import tqdm
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from ftrt import get_setting
from ftrt.lib.errors import InvalidParamsError
from .compare import POLICIES, compare
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List, Optional
    from ftrt.api.engine import SimConfig


logger = logging.getLogger(__name__)

_bar_fmt = '{l_bar}{bar:20}{r_bar}{bar:-20b}'
AGGREGATED = ('guarantee_ratio', 'utilization', 'reserved_backup_time', 'backup_slots_saved', 'misses')


def _compare_seed(job) -> Dict[str, dict]:
    sim_config, seed = job
    result = compare(replace(sim_config, seed=seed))
    return {name: m.to_dict() for name, m in result.metrics.items()}


@dataclass
class BatchResult:
    """Per-seed metrics of every policy and their aggregates.

    Attributes:
        seeds (List[int]): Seeds in run order.
        runs (List[Dict[str, dict]]): Per seed, the metrics dict of each policy.
    """
    seeds: List[int]
    runs: List[Dict[str, dict]]

    def values(self, policy: str, metric: str) -> np.ndarray:
        return np.array([run[policy][metric] for run in self.runs], dtype=float)

    @property
    def aggregate(self) -> Dict[str, Dict[str, Dict[str, float]]]:
        """{policy: {metric: {mean, min, max}}} over all seeds."""
        summary = {}
        for policy in POLICIES:
            summary[policy] = {}
            for metric in AGGREGATED:
                values = self.values(policy, metric)
                summary[policy][metric] = {'mean': float(np.mean(values)),
                                           'min': float(np.min(values)),
                                           'max': float(np.max(values))}
        return summary

    def table(self) -> str:
        header = f"{'policy':<12}{'GR mean':>10}{'GR min':>10}{'GR max':>10}{'util mean':>11}{'misses':>9}"
        lines = [header, '-' * len(header)]
        for policy, stats in self.aggregate.items():
            gr, util = stats['guarantee_ratio'], stats['utilization']
            lines.append(f"{policy:<12}{gr['mean']:>10.3f}{gr['min']:>10.3f}{gr['max']:>10.3f}"
                         f"{util['mean']:>11.3f}{int(self.values(policy, 'misses').sum()):>9d}")
        return '\n'.join(lines)

    def to_dict(self) -> dict:
        return {'seeds': self.seeds, 'aggregate': self.aggregate, 'runs': self.runs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'


def run_batch(sim_config: SimConfig, runs: Optional[int] = None, seed: int = 0,
              jobs: Optional[int] = None, progress: bool = False) -> BatchResult:
    """Compare the policies on seeds seed, seed + 1, ..., seed + runs - 1.

    With `jobs` > 1 the seeds are spread over a process pool; results are
    collected in seed order either way, so the aggregate does not depend on
    scheduling.
    """
    runs = get_setting('batch', 'runs') if runs is None else runs
    jobs = get_setting('batch', 'jobs') if jobs is None else jobs
    if runs < 1:
        raise InvalidParamsError(f"runs must be >= 1 (got {runs})")
    if jobs < 1:
        raise InvalidParamsError(f"jobs must be >= 1 (got {jobs})")
    seeds = list(range(seed, seed + runs))
    work = [(sim_config, s) for s in seeds]
    bar = dict(total=runs, desc='batch', unit=' run(s)', bar_format=_bar_fmt, disable=not progress)
    if jobs == 1:
        results = [_compare_seed(job) for job in tqdm.tqdm(work, **bar)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(tqdm.tqdm(pool.map(_compare_seed, work), **bar))
    logger.info("batch of %d run(s) from seed %d finished", runs, seed)
    return BatchResult(seeds=seeds, runs=results)
