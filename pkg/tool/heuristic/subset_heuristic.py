# See LICENSE for details
"""
Per-subset routing heuristics used as the cost proxy of a partition subset.

NEAREST_NEIGHBOR walks to the closest unvisited node of the subset; GREEDY walks to the
unvisited node of highest importance. Ties go to the smallest node index in both cases.
"""

import logging
from enum import Enum
from typing import AbstractSet, Iterable

from core.graph import Assignment, Graph, Partition, Path, validate_graph
from core.metrics import path_wlp
from tool.tool import Tool

logger = logging.getLogger(__name__)


class HeuristicKind(str, Enum):
    GREEDY = 'GREEDY'
    NEAREST_NEIGHBOR = 'NEAREST_NEIGHBOR'


def _route(g: Graph, subset: Iterable[int], kind: HeuristicKind) -> tuple[Path, int]:
    """Returns the heuristic path over `subset` and the number of candidate nodes scanned."""
    remaining = sorted(v for v in subset if v != g.depot)
    path = [g.depot]
    scans = 0
    current = g.depot
    d = g.edge_weight
    w = g.importance
    while remaining:
        best_pos = 0
        if kind is HeuristicKind.NEAREST_NEIGHBOR:
            row = d[current]
            best = row[remaining[0]]
            for pos in range(1, len(remaining)):
                if row[remaining[pos]] < best:
                    best = row[remaining[pos]]
                    best_pos = pos
        else:
            best = w[remaining[0]]
            for pos in range(1, len(remaining)):
                if w[remaining[pos]] > best:
                    best = w[remaining[pos]]
                    best_pos = pos
        scans += len(remaining)
        current = remaining.pop(best_pos)
        path.append(current)
    return tuple(path), scans


def heuristic_path(g: Graph, subset: AbstractSet[int], h: HeuristicKind) -> Path:
    return _route(g, subset, h)[0]


def subset_cost(g: Graph, subset: AbstractSet[int], h: HeuristicKind) -> float:
    return path_wlp(g, heuristic_path(g, subset, h))


def assignment_from_partition(g: Graph, p: Partition, h: HeuristicKind) -> Assignment:
    return Assignment(tuple(heuristic_path(g, s, h) for s in p.subsets))


def node_contribution(g: Graph, subset: AbstractSet[int], v: int, h: HeuristicKind) -> float:
    """Share of the subset's heuristic cost that disappears when `v` is removed. Not clamped: may be negative."""
    full = subset_cost(g, subset, h)
    if full == 0:
        return 0.0
    return (full - subset_cost(g, frozenset(subset) - {v}, h)) / full


class SubsetHeuristic(Tool):
    """
    Heuristic cost oracle bound to one graph.

    Subset costs are memoised by node set; the memo is dropped whenever it grows past
    `cache_limit` entries. `node_scans` counts candidate nodes examined by routing calls that
    missed the memo.
    """

    DEFAULT_CACHE_LIMIT = 500_000

    def __init__(self, kind: HeuristicKind | str, cache_limit: int = DEFAULT_CACHE_LIMIT):
        super().__init__()
        self.kind = HeuristicKind(kind)
        self.cache_limit = cache_limit
        self.graph: Graph | None = None
        self.node_scans = 0
        self.evaluations = 0
        self._costs: dict[frozenset[int], float] = {}

    def setup(self, graph: Graph) -> bool:
        self._is_ready = False
        violation = validate_graph(graph)
        if violation:
            self.set_error(f'invalid graph: {violation}')
            logger.error(self.get_error())
            return False
        self.graph = graph
        self._costs = {}
        self._is_ready = True
        return True

    def path(self, subset: AbstractSet[int]) -> Path:
        self.require_ready()
        route, scans = _route(self.graph, subset, self.kind)
        self.node_scans += scans
        return route

    def cost(self, subset: AbstractSet[int]) -> float:
        key = subset if isinstance(subset, frozenset) else frozenset(subset)
        cached = self._costs.get(key)
        if cached is not None:
            return cached
        value = path_wlp(self.graph, self.path(key))
        self.evaluations += 1
        if len(self._costs) >= self.cache_limit:
            logger.debug(f'subset cost memo reached {self.cache_limit} entries, clearing')
            self._costs.clear()
        self._costs[key] = value
        return value

    def contribution(self, subset: AbstractSet[int], v: int) -> float:
        full = self.cost(subset)
        if full == 0:
            return 0.0
        return (full - self.cost(frozenset(subset) - {v})) / full

    def assignment(self, p: Partition) -> Assignment:
        return Assignment(tuple(self.path(s) for s in p.subsets))
