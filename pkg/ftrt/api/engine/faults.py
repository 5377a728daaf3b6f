"""Per-processor fault state machine and its expansion into a fault script."""

from __future__ import annotations
import logging
import numpy as np
from enum import Enum
from ftrt.api.model import FaultClass, FaultEvent, classify_fault
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from typing import Dict, List
    from ftrt.api.model import FaultClassRates


logger = logging.getLogger(__name__)


class FaultState(str, Enum):
    HEALTHY = 'healthy'
    ACTIVE = 'active'
    BENIGN = 'benign'
    GONE = 'gone'


def _p(rate: float) -> float:
    return min(float(rate), 1.0)


def fault_machine_step(state: FaultState, rates: FaultClassRates, rng: np.random.Generator) -> FaultState:
    """Advance one time unit.

    Exactly one uniform draw is consumed per call whatever the state, so the
    stream position only depends on the number of steps taken.

    Raises:
        UnclassifiableFaultError: If `rates` matches no fault class.
    """
    fault_class = classify_fault(rates)
    u = rng.random()
    if state in (FaultState.HEALTHY, FaultState.GONE):
        return FaultState.ACTIVE if u < _p(rates.a) else state
    if state is FaultState.ACTIVE:
        if fault_class is FaultClass.TRANSIENT and u < _p(rates.c):
            return FaultState.GONE
        if fault_class is FaultClass.INTERMITTENT and u < _p(rates.b):
            return FaultState.BENIGN
        return FaultState.ACTIVE
    if u < _p(rates.d):
        return FaultState.ACTIVE
    return FaultState.BENIGN


def expand_fault_rates(rates_by_processor: Dict[int, FaultClassRates], horizon: int,
                       seed: int) -> List[FaultEvent]:
    """Run each processor's fault machine over [0, horizon] and record its active spans.

    Each processor draws from its own generator seeded with (seed, processor),
    so adding a processor does not perturb the others.
    """
    events = []
    for proc in sorted(rates_by_processor):
        rates = rates_by_processor[proc]
        fault_class = classify_fault(rates)
        rng = np.random.default_rng([seed, proc])
        state = FaultState.HEALTHY
        span_start = None
        for t in range(horizon + 1):
            state = fault_machine_step(state, rates, rng)
            if state is FaultState.ACTIVE:
                if span_start is None:
                    span_start = t
                    if fault_class is FaultClass.PERMANENT:
                        events.append(FaultEvent(proc, t, fault_class))
                        break
            elif span_start is not None:
                events.append(FaultEvent(proc, span_start, fault_class, duration=t - span_start))
                span_start = None
        else:
            if span_start is not None:
                events.append(FaultEvent(proc, span_start, fault_class, duration=horizon + 1 - span_start))
        logger.debug("P%d (%s): %d fault span(s)", proc, fault_class.value,
                     sum(1 for e in events if e.processor == proc))
    return sorted(events, key=lambda e: (e.t, e.processor))
