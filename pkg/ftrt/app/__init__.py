"""
dependency:
    api.engine, api.scheduler
"""
from .scenario import parse_scenario, load_scenario
from .compare import ComparisonReport, compare, POLICIES
from .batch import BatchResult, run_batch
from .gantt import gantt_grid, render_text, render_svg

__all__ = ['parse_scenario', 'load_scenario', 'ComparisonReport', 'compare', 'POLICIES',
           'BatchResult', 'run_batch', 'gantt_grid', 'render_text', 'render_svg']
