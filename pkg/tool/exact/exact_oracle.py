# See LICENSE for details
"""
Brute-force optimum of the m-agent minimum weighted latency problem, for tiny instances.

Every labelling of the targets onto m distinct crews is enumerated (idle crews allowed) and,
because the objective is a sum of per-path costs, each group is solved by enumerating its
orderings once and memoising the best one.
"""

import logging
import math
from dataclasses import dataclass
from itertools import permutations, product

from core.errors import SizeGuardError
from core.graph import Assignment, Graph, Path
from core.metrics import path_wlp

logger = logging.getLogger(__name__)

MAX_SINGLE_NODES = 11
MAX_MULTI_NODES = 8
MAX_MULTI_AGENTS = 4


@dataclass(frozen=True)
class ExactResult:
    assignment: Assignment
    wlp_sum: float
    candidates: int


def _best_order(g: Graph, group: tuple[int, ...]) -> tuple[Path, float]:
    best_path: Path = (g.depot, *group)
    best_cost = math.inf
    for order in permutations(group):
        path = (g.depot, *order)
        cost = path_wlp(g, path)
        if cost < best_cost:
            best_path, best_cost = path, cost
    return best_path, best_cost


def exact_single_mwlp(g: Graph) -> ExactResult:
    if g.n > MAX_SINGLE_NODES:
        raise SizeGuardError('exact_single_mwlp', g.n, MAX_SINGLE_NODES)
    path, cost = _best_order(g, g.targets)
    return ExactResult(Assignment((path,)), cost, math.factorial(len(g.targets)))


def exact_multi_mwlp(g: Graph, m: int) -> ExactResult:
    if m < 1:
        raise ValueError(f'need at least one agent, got m={m}')
    if g.n > MAX_MULTI_NODES or m > MAX_MULTI_AGENTS:
        raise SizeGuardError('exact_multi_mwlp', g.n, MAX_MULTI_NODES, m, MAX_MULTI_AGENTS)

    targets = g.targets
    memo: dict[tuple[int, ...], tuple[Path, float]] = {}
    best_paths: tuple[Path, ...] | None = None
    best_cost = math.inf
    candidates = 0

    for labels in product(range(m), repeat=len(targets)):
        groups = [tuple(v for v, label in zip(targets, labels) if label == k) for k in range(m)]
        candidates += math.prod(math.factorial(len(group)) for group in groups)
        paths = []
        for group in groups:
            if group not in memo:
                memo[group] = _best_order(g, group)
            paths.append(memo[group][0])
        # Summed in crew order so the value matches wlp_sum of the stored assignment.
        cost = sum(memo[group][1] for group in groups)
        if cost < best_cost:
            best_paths, best_cost = tuple(paths), cost

    logger.debug(f'exact_multi_mwlp: n={g.n} m={m}, {candidates} candidates, optimum {best_cost}')
    return ExactResult(Assignment(best_paths), best_cost, candidates)
