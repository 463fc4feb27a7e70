#!/usr/bin/env python3
# See LICENSE for details

import argparse
import glob
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

# Add project root to sys.path to allow direct imports of step and core modules
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '../../'))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from core.errors import InstanceParseError, MwlpError, SizeGuardError, UnknownStrategyError  # noqa: E402
from core.graph import Graph  # noqa: E402
from core.metrics import restoration_curve  # noqa: E402
from core.report import SolveReport, StrategyId  # noqa: E402
from step.generator.generator_step import Generator  # noqa: E402
from step.solver.solver_step import DEFAULT_ALPHA, solve  # noqa: E402
from tool.instance.instance_io import (  # noqa: E402
    load_instance,
    save_curve,
    save_instance,
    save_report,
    save_summary,
    sort_reports,
    summarize_reports,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_SIZE_GUARD = 3


class UsageError(Exception):
    pass


class HarnessArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument('--nodes', type=int, help='Node count including the depot (default 201).')
    p.add_argument('--zero-repair', action='store_true', help='Set every repair time to 0.')
    p.add_argument('--road-network', help='Build urban instances from this road-network file.')
    p.add_argument('--grid-city', action='store_true', help='Build urban instances on a synthetic grid city.')


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument('--alpha', type=float, default=DEFAULT_ALPHA, help='Outlier contribution threshold (default 0.13).')
    p.add_argument('--no-timing', action='store_true', help='Report wall_ms as 0 so outputs are byte-identical.')


def build_parser() -> argparse.ArgumentParser:
    parser = HarnessArgumentParser(description='Crew assignment experiments for the m-agent weighted latency problem.')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging.')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('generate', help='Generate one instance file.')
    _add_generator_flags(gen)
    gen.add_argument('--agents', type=int, default=20, help='Crew count echoed with the instance summary (default 20).')
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--out', required=True, help='Instance file to write.')

    slv = sub.add_parser('solve', help='Solve one instance with one strategy.')
    slv.add_argument('--instance', required=True)
    slv.add_argument('--strategy', required=True)
    slv.add_argument('--agents', type=int, default=20)
    slv.add_argument('--seed', type=int, default=0)
    slv.add_argument('--out', help='Optional report CSV.')
    _add_solver_flags(slv)

    bench = sub.add_parser('benchmark', help='Run strategies over seeded or stored instances.')
    _add_generator_flags(bench)
    bench.add_argument('--instance-dir', help='Benchmark every *.mwlp file in this directory instead of generating.')
    bench.add_argument('--strategy', action='append', help='Strategy to run (repeatable).')
    bench.add_argument('--seed', type=int, action='append', help='Seed (repeatable, default 0).')
    bench.add_argument('--agents', type=int, default=20)
    bench.add_argument('--jobs', type=int, default=1, help='Worker processes for benchmark cells.')
    bench.add_argument('--out', required=True, help='Report CSV; the summary goes to <stem>_summary.csv.')
    _add_solver_flags(bench)

    crv = sub.add_parser('curve', help='Solve and write the restoration curve.')
    crv.add_argument('--instance', required=True)
    crv.add_argument('--strategy', required=True)
    crv.add_argument('--agents', type=int, default=20)
    crv.add_argument('--seed', type=int, default=0)
    crv.add_argument('--out', required=True, help='Curve CSV.')
    _add_solver_flags(crv)
    return parser


def generator_overrides(args: argparse.Namespace, seed: int) -> dict:
    conf: dict = {'seed': seed, 'm': args.agents, 'zero_repair': bool(args.zero_repair)}
    if args.nodes is not None:
        conf['n'] = args.nodes
    if args.road_network or args.grid_city:
        conf['mode'] = 'urban'
        conf['urban'] = {'road_network': args.road_network}
    return conf


def generate_graph(args: argparse.Namespace, seed: int) -> tuple[Graph, dict]:
    generator = Generator()
    cfg = generator.config(generator_overrides(args, seed))
    return generator.generate(cfg), cfg


def print_report(report: SolveReport) -> None:
    print(
        f'{report.strategy.value}: wlp_sum={report.wlp_sum!r} average_wait_hours={report.average_wait_hours!r} '
        f'latency_range={report.latency_range!r} wall_ms={report.wall_ms:.3f}'
    )


def cmd_generate(args: argparse.Namespace) -> int:
    g, cfg = generate_graph(args, args.seed)
    save_instance(g, args.out)
    print(
        f'instance {args.out}: mode={cfg["mode"]} n={g.n} m={args.agents} targets={len(g.targets)} '
        f'total_importance={g.total_importance:g} seed={args.seed}'
    )
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    strategy = StrategyId.parse(args.strategy)
    g = load_instance(args.instance)
    report = solve(g, strategy, args.agents, args.seed, args.alpha, timing=not args.no_timing, instance=args.instance)
    print_report(report)
    for k, path in enumerate(report.assignment.paths):
        print(f'crew {k}: {" ".join(str(v) for v in path)}')
    if args.out:
        save_report([report], args.out)
    return EXIT_OK


def _solve_cell(cell: tuple) -> SolveReport:
    g, label, seed, strategy, agents, alpha, timing = cell
    return solve(g, strategy, agents, seed, alpha, timing=timing, instance=label)


def benchmark_instances(args: argparse.Namespace, seeds: list[int]) -> list[tuple[str, int, Graph]]:
    """(label, seed, graph) for every benchmark instance, in a fixed order."""
    if args.instance_dir:
        files = sorted(glob.glob(os.path.join(args.instance_dir, '*.mwlp')))
        if not files:
            raise InstanceParseError(args.instance_dir, None, 'no *.mwlp instance files found')
        graphs = [(os.path.basename(f), load_instance(f)) for f in files]
        return [(label, seed, g) for label, g in graphs for seed in seeds]
    cells = []
    for seed in seeds:
        g, cfg = generate_graph(args, seed)
        cells.append((f'{cfg["mode"]}-{seed:04d}', seed, g))
    return cells


def cmd_benchmark(args: argparse.Namespace) -> int:
    if not args.strategy:
        raise UsageError('benchmark: at least one --strategy is required')
    strategies = [StrategyId.parse(s) for s in args.strategy]
    seeds = args.seed or [0]
    timing = not args.no_timing

    cells = [
        (g, label, seed, strategy, args.agents, args.alpha, timing)
        for label, seed, g in benchmark_instances(args, seeds)
        for strategy in strategies
    ]
    logger.info(f'benchmark: {len(cells)} cells, {args.jobs} worker(s)')
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_solve_cell, cells))
    else:
        reports = [_solve_cell(cell) for cell in cells]

    reports = sort_reports(reports)
    save_report(reports, args.out)
    summary = summarize_reports(reports)
    summary_file = os.path.splitext(args.out)[0] + '_summary.csv'
    save_summary(summary, summary_file)

    print(f'benchmark: {len(reports)} rows written to {args.out}')
    for row in summary:
        print(
            f'{row["strategy"]}: runs={row["runs"]} '
            f'average_wait median={row["average_wait_median"]:.4f} iqr={row["average_wait_iqr"]:.4f} '
            f'latency_range median={row["latency_range_median"]:.1f} iqr={row["latency_range_iqr"]:.1f}'
        )
    return EXIT_OK


def cmd_curve(args: argparse.Namespace) -> int:
    strategy = StrategyId.parse(args.strategy)
    g = load_instance(args.instance)
    report = solve(g, strategy, args.agents, args.seed, args.alpha, timing=not args.no_timing, instance=args.instance)
    curve = restoration_curve(g, report.assignment)
    save_curve(curve, args.out)
    print_report(report)
    print(f'restoration curve: {len(curve.points)} points, final restoration time {curve.final_restoration_time:.3f} min')
    return EXIT_OK


COMMANDS = {
    'generate': cmd_generate,
    'solve': cmd_solve,
    'benchmark': cmd_benchmark,
    'curve': cmd_curve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnknownStrategyError) as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_USAGE
    except InstanceParseError as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_INPUT
    except SizeGuardError as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_SIZE_GUARD
    except (MwlpError, ValueError) as e:
        print(f'Error: {e}', file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
