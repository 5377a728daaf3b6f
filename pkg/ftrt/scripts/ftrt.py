# -*- coding: utf-8 -*-
import os
import sys
import argparse
import logging
from dataclasses import replace
from pathlib import Path
from ..lib.errors import *
from .. import __version__, setup_logging
from ..api.scheduler import SchedulerPolicy, PRESETS
from ..api.engine import SimReport, run
from ..app import load_scenario, compare, run_batch, render_text, render_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTERNAL = 3

_logging_config = Path(__file__).parents[1] / 'logging.yaml'


def _apply_log_level(level):
    """Set the root logger and its non-error handlers to `level` (FTRT_LOG)."""
    if not level:
        return
    name = level.strip().upper()
    if not isinstance(logging.getLevelName(name), int):
        logger.warning("Ignoring unknown log level %r from FTRT_LOG", level)
        return
    root = logging.getLogger()
    root.setLevel(name)
    for handler in root.handlers:
        if handler.level < logging.ERROR:
            handler.setLevel(name)


def trace_path_for(report_path):
    """`x.report.json` and `x.json` map to `x.trace`; other names get `.trace` appended."""
    report_path = Path(report_path)
    name = report_path.name
    for suffix in ('.report.json', '.json'):
        if name.endswith(suffix):
            return report_path.with_name(name[:-len(suffix)] + '.trace')
    return report_path.with_name(name + '.trace')


def _scenario(args):
    sim_config = load_scenario(args.scenario)
    changes = {}
    if getattr(args, 'seed', None) is not None:
        changes['seed'] = args.seed
    if getattr(args, 'policy', None) is not None:
        changes['policy'] = SchedulerPolicy.preset(args.policy)
    return replace(sim_config, **changes) if changes else sim_config


def cmd_run(args):
    report = run(_scenario(args))
    out = Path(args.out) if args.out else Path(args.scenario).with_suffix('.report.json')
    report.write(out)
    trace_path = trace_path_for(out)
    trace_path.write_text(report.trace_text(), encoding='utf8')
    m = report.metrics
    print(f"committed {m.committed}/{m.arrived} (GR {m.guarantee_ratio:.3f}), "
          f"utilization {m.utilization:.3f}, misses {m.misses}")
    print(f"report: {out}\ntrace:  {trace_path}")
    return EXIT_OK


def cmd_compare(args):
    result = compare(_scenario(args))
    print(result.table())
    if args.out:
        Path(args.out).write_text(result.to_json(), encoding='utf8')
        print(f"comparison: {args.out}")
    return EXIT_OK


def cmd_batch(args):
    sim_config = load_scenario(args.scenario)
    seed = sim_config.seed if args.seed is None else args.seed
    result = run_batch(sim_config, runs=args.runs, seed=seed, jobs=args.jobs, progress=True)
    print(result.table())
    if args.out:
        Path(args.out).write_text(result.to_json(), encoding='utf8')
        print(f"aggregate: {args.out}")
    return EXIT_OK


def cmd_gantt(args):
    report = SimReport.load(args.report)
    print(render_text(report), end='')
    if args.svg:
        out = Path(args.out) if args.out else Path(args.report).with_suffix('.svg')
        render_svg(report, out)
        print(f"svg: {out}")
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(prog='ftrt',
                                     description="Fault-tolerant EDF scheduling simulator")
    parser.add_argument("-v", "--version", action='version', version='%(prog)s v{}'.format(__version__))

    subparsers = parser.add_subparsers(title='Sub-commands',
                                       description='To run this command, you must specify one of the functions listed '
                                                   'below next to the command. For more information on each function, '
                                                   'use -h next to the function name to call help document.',
                                       help='description',
                                       dest='function',
                                       metavar='command')

    scenario_str = "scenario file (JSON)"
    seed_str = "override the scenario seed"
    out_str = "output filename"

    run_p = subparsers.add_parser("run", help='Simulate one scenario and write its report and trace')
    compare_p = subparsers.add_parser("compare", help='Run the edf, pb and pb-overload policies on identical inputs')
    batch_p = subparsers.add_parser("batch", help='Compare the policies over consecutive seeds')
    gantt_p = subparsers.add_parser("gantt", help='Render a report as a Gantt chart')

    # run
    run_p.add_argument("-s", "--scenario", help=scenario_str, type=str, required=True)
    run_p.add_argument("-o", "--out", help=out_str + " of the report; the trace goes next to it", type=str)
    run_p.add_argument("--seed", help=seed_str, type=int)
    run_p.add_argument("-p", "--policy", help="override the scenario policy", choices=sorted(PRESETS))

    # compare
    compare_p.add_argument("-s", "--scenario", help=scenario_str, type=str, required=True)
    compare_p.add_argument("-o", "--out", help=out_str + " of the comparison (JSON)", type=str)
    compare_p.add_argument("--seed", help=seed_str, type=int)

    # batch
    batch_p.add_argument("-s", "--scenario", help=scenario_str, type=str, required=True)
    batch_p.add_argument("-n", "--runs", help="number of seeds (default: batch.runs)", type=int)
    batch_p.add_argument("--seed", help="first seed (default: the scenario seed)", type=int)
    batch_p.add_argument("-j", "--jobs", help="worker processes (default: batch.jobs)", type=int)
    batch_p.add_argument("-o", "--out", help=out_str + " of the aggregate (JSON)", type=str)

    # gantt
    gantt_p.add_argument("report", help="report written by the run command", type=str)
    gantt_p.add_argument("--svg", help="also write an SVG chart", action='store_true')
    gantt_p.add_argument("-o", "--out", help=out_str + " of the SVG", type=str)

    args = parser.parse_args(argv)
    setup_logging(path=_logging_config)
    _apply_log_level(os.environ.get('FTRT_LOG'))

    commands = {'run': cmd_run, 'compare': cmd_compare, 'batch': cmd_batch, 'gantt': cmd_gantt}
    if args.function not in commands:
        parser.print_help()
        return EXIT_CONFIG
    try:
        return commands[args.function](args)
    except InvariantBreach as e:
        logger.error("internal invariant breached: %s", e)
        print_internal_error(sys.stderr)
        return EXIT_INTERNAL
    except (ScenarioError, InvalidTaskError, InvalidParamsError, UnclassifiableFaultError,
            MalformedReportError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e.strerror}: {e.filename}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
