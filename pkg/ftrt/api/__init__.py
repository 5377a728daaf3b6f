"""Library core of ftrt.

Subpackages:
    model: tasks, fault classes, workload generation.
    timeline: per-processor reservation timelines and slot searches.
    scheduler: admission control with primary/backup overloading.
    engine: the discrete-time simulator, traces and metrics.
    oracle: independent schedule verification and exhaustive search.
"""
