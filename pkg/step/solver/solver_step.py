#!/usr/bin/env python3
# See LICENSE for details

import logging
import time
from typing import Optional

from core.graph import Assignment, Graph, validate_assignment
from core.metrics import assignment_summary
from core.report import SolveReport, StrategyId
from core.step import Step
from tool.dispatch.crew_dispatch import greedy_assignment, greedy_random_assignment, nearest_neighbor_assignment
from tool.exact.exact_oracle import exact_multi_mwlp
from tool.heuristic.subset_heuristic import HeuristicKind
from tool.instance.instance_io import stage_graph
from tool.partition.transfers_swaps import Observer, OptimizerConfig, optimize

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.13


def assign(
    g: Graph,
    strategy: StrategyId,
    agents: int,
    seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    observer: Optional[Observer] = None,
) -> Assignment:
    if strategy is StrategyId.GA:
        return greedy_assignment(g, agents)
    if strategy is StrategyId.NNA:
        return nearest_neighbor_assignment(g, agents)
    if strategy is StrategyId.GRA:
        return greedy_random_assignment(g, agents, seed)
    if strategy is StrategyId.TSG:
        return optimize(g, agents, OptimizerConfig(alpha=alpha, heuristic=HeuristicKind.GREEDY, seed=seed), observer)
    if strategy is StrategyId.TSNN:
        return optimize(g, agents, OptimizerConfig(alpha=alpha, heuristic=HeuristicKind.NEAREST_NEIGHBOR, seed=seed), observer)
    return exact_multi_mwlp(g, agents).assignment


def solve(
    g: Graph,
    strategy: StrategyId | str,
    agents: int,
    seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    timing: bool = True,
    instance: str = '',
    observer: Optional[Observer] = None,
) -> SolveReport:
    """Runs one strategy and scores its assignment. With `timing` off, `wall_ms` is reported as 0."""
    if not isinstance(strategy, StrategyId):
        strategy = StrategyId.parse(strategy)
    if agents < 1:
        raise ValueError(f'need at least one agent, got {agents}')

    start = time.perf_counter()
    a = assign(g, strategy, agents, seed, alpha, observer)
    wall_ms = (time.perf_counter() - start) * 1000.0 if timing else 0.0

    violation = validate_assignment(g, a)
    if violation:
        raise RuntimeError(f'{strategy.value} produced an invalid assignment: {violation}')
    summary = assignment_summary(g, a)
    logger.info(f'{strategy.value} seed={seed} m={agents}: wlp_sum {summary["wlp_sum"]:.3f}, {wall_ms:.1f} ms')
    return SolveReport(
        strategy=strategy,
        seed=seed,
        agents=agents,
        assignment=a,
        wall_ms=wall_ms,
        instance=instance,
        **summary,
    )


class Solver(Step):
    """
    Runs one crew-assignment strategy on an instance.

    Reads from:
      - `instance`: instance file, or `graph`: inline instance (importance, edge_weight, depot)
      - `strategy`: GA | NNA | GRA | TSG | TSNN | EXACT
      - `agents`: crew count
      - `seed` (optional, 0), `alpha` (optional, 0.13), `timing` (optional, true)

    Writes the solve report: `instance`, `strategy`, `seed`, `agents`, `wlp_sum`,
    `average_wait_hours`, `latency_range`, `wall_ms`, `assignment`.
    """

    def __init__(self):
        super().__init__()
        self.report: SolveReport | None = None

    def run(self, data):
        g, label = stage_graph(data)
        if 'strategy' not in data or 'agents' not in data:
            raise ValueError("solver input needs 'strategy' and 'agents'")
        self.report = solve(
            g,
            data['strategy'],
            int(data['agents']),
            seed=int(data.get('seed', 0)),
            alpha=float(data.get('alpha', DEFAULT_ALPHA)),
            timing=bool(data.get('timing', True)),
            instance=label,
        )
        return self.report.to_dict()


if __name__ == '__main__':  # pragma: no cover
    raise SystemExit(Solver.main())
