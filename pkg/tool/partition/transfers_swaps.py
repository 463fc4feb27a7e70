# See LICENSE for details
"""
Partition improvement by transfers, swaps and outlier relocation.

All moves are scored with a `SubsetHeuristic` cost oracle. A transfer or a swap between two
subsets is applied only when it strictly lowers the larger of the two subset costs.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from core.graph import Assignment, Graph, Partition, canonical_key
from tool.heuristic.subset_heuristic import HeuristicKind, SubsetHeuristic

logger = logging.getLogger(__name__)

# observer(event, info); events: transfer, swap, sweep, outlier, start, accept, reject
Observer = Callable[[str, dict], None]


@dataclass(frozen=True)
class OptimizerConfig:
    alpha: float = 0.13
    heuristic: HeuristicKind = HeuristicKind.GREEDY
    seed: int = 0
    max_outer_iterations: int = 100
    cache_limit: int = SubsetHeuristic.DEFAULT_CACHE_LIMIT

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f'alpha must lie in (0, 1), got {self.alpha}')
        if self.max_outer_iterations < 1:
            raise ValueError(f'max_outer_iterations must be >= 1, got {self.max_outer_iterations}')
        object.__setattr__(self, 'heuristic', HeuristicKind(self.heuristic))


@dataclass
class PairMarkState:
    """Ordered pairs still to be checked for transfers, unordered pairs (i < j) for swaps."""

    m: int
    transfers: set[tuple[int, int]] = field(default_factory=set)
    swaps: set[tuple[int, int]] = field(default_factory=set)

    @classmethod
    def all_marked(cls, m: int) -> 'PairMarkState':
        state = cls(m)
        for i in range(m):
            state.remark(i)
        return state

    def remark(self, *subsets: int) -> None:
        for i in subsets:
            for k in range(self.m):
                if k == i:
                    continue
                self.transfers.add((i, k))
                self.transfers.add((k, i))
                self.swaps.add((min(i, k), max(i, k)))

    def __bool__(self) -> bool:
        return bool(self.transfers or self.swaps)


def _emit(observer: Optional[Observer], event: str, **info) -> None:
    if observer is not None:
        observer(event, info)


def _best_transfer(costs: SubsetHeuristic, vi: frozenset[int], vj: frozenset[int]) -> Optional[int]:
    depot = costs.graph.depot
    base = max(costs.cost(vi), costs.cost(vj))
    best_v, best_gain = None, 0.0
    for v in sorted(vi - {depot}):
        gain = base - max(costs.cost(vi - {v}), costs.cost(vj | {v}))
        if gain > best_gain:
            best_v, best_gain = v, gain
    return best_v


def _best_swap(costs: SubsetHeuristic, vi: frozenset[int], vj: frozenset[int]) -> Optional[tuple[int, int]]:
    depot = costs.graph.depot
    base = max(costs.cost(vi), costs.cost(vj))
    best_pair, best_gain = None, 0.0
    for a in sorted(vi - {depot}):
        vi_without = vi - {a}
        vj_with = vj | {a}
        for b in sorted(vj - {depot}):
            gain = base - max(costs.cost(vi_without | {b}), costs.cost(vj_with - {b}))
            if gain > best_gain:
                best_pair, best_gain = (a, b), gain
    return best_pair


def best_transfer(costs: SubsetHeuristic, p: Partition, i: int, j: int) -> Optional[int]:
    """Node of subset i whose move to subset j most reduces max(c(i), c(j)), or None if no move reduces it."""
    if i == j:
        raise ValueError('transfer needs two distinct subsets')
    return _best_transfer(costs, p.subsets[i], p.subsets[j])


def best_swap(costs: SubsetHeuristic, p: Partition, i: int, j: int) -> Optional[tuple[int, int]]:
    if i == j:
        raise ValueError('swap needs two distinct subsets')
    return _best_swap(costs, p.subsets[i], p.subsets[j])


def transfers_and_swaps(costs: SubsetHeuristic, p: Partition, observer: Optional[Observer] = None) -> Partition:
    subsets = list(p.subsets)
    marks = PairMarkState.all_marked(p.m)
    seen: set[tuple] = set()

    while marks and canonical_key(Partition(tuple(subsets))) not in seen:
        seen.add(canonical_key(Partition(tuple(subsets))))

        for i, j in sorted(marks.transfers):
            v = _best_transfer(costs, subsets[i], subsets[j])
            if v is None:
                marks.transfers.discard((i, j))
                continue
            before = max(costs.cost(subsets[i]), costs.cost(subsets[j]))
            subsets[i] = subsets[i] - {v}
            subsets[j] = subsets[j] | {v}
            after = max(costs.cost(subsets[i]), costs.cost(subsets[j]))
            assert after < before, f'transfer of {v} from {i} to {j} did not reduce the pair cost'
            marks.remark(i, j)
            logger.debug(f'transfer {v}: {i} -> {j}, pair cost {before:.3f} -> {after:.3f}')
            _emit(observer, 'transfer', pair=(i, j), nodes=(v,), before=before, after=after,
                  partition=Partition(tuple(subsets)))

        for i, j in sorted(marks.swaps):
            pair = _best_swap(costs, subsets[i], subsets[j])
            if pair is None:
                marks.swaps.discard((i, j))
                continue
            a, b = pair
            before = max(costs.cost(subsets[i]), costs.cost(subsets[j]))
            subsets[i] = (subsets[i] - {a}) | {b}
            subsets[j] = (subsets[j] - {b}) | {a}
            after = max(costs.cost(subsets[i]), costs.cost(subsets[j]))
            assert after < before, f'swap of {a} and {b} between {i} and {j} did not reduce the pair cost'
            marks.remark(i, j)
            logger.debug(f'swap {a} <-> {b} between {i} and {j}, pair cost {before:.3f} -> {after:.3f}')
            _emit(observer, 'swap', pair=(i, j), nodes=(a, b), before=before, after=after,
                  partition=Partition(tuple(subsets)))

        _emit(observer, 'sweep', partition=Partition(tuple(subsets)))

    return Partition(tuple(subsets))


def transfer_outliers(costs: SubsetHeuristic, p: Partition, alpha: float, observer: Optional[Observer] = None) -> Partition:
    """Moves every node whose contribution exceeds `alpha` to the subset where adding it is cheapest."""
    if not 0 < alpha < 1:
        raise ValueError(f'alpha must lie in (0, 1), got {alpha}')
    depot = costs.graph.depot
    subsets = list(p.subsets)
    m = len(subsets)
    for i in range(m):
        for v in sorted(subsets[i] - {depot}):
            contribution = costs.contribution(subsets[i], v)
            if contribution <= alpha:
                continue
            j = min(range(m), key=lambda k: (costs.cost(subsets[k] | {v}), k))
            if j == i:
                continue
            subsets[i] = subsets[i] - {v}
            subsets[j] = subsets[j] | {v}
            logger.debug(f'outlier {v} (contribution {contribution:.3f}) moved {i} -> {j}')
            _emit(observer, 'outlier', pair=(i, j), nodes=(v,), contribution=contribution,
                  partition=Partition(tuple(subsets)))
    return Partition(tuple(subsets))


def random_initial_partition(g: Graph, m: int, seed: int) -> Partition:
    """Targets shuffled with a seeded PCG64 generator and dealt round-robin to m subsets."""
    if m < 1:
        raise ValueError(f'need at least one agent, got m={m}')
    rng = np.random.default_rng(seed)
    order = [int(v) for v in rng.permutation(np.asarray(g.targets, dtype=np.int64))]
    return Partition(tuple(frozenset([g.depot, *order[k::m]]) for k in range(m)))


def partition_cost(costs: SubsetHeuristic, p: Partition) -> float:
    return sum(costs.cost(s) for s in p.subsets)


def optimize(g: Graph, m: int, cfg: OptimizerConfig, observer: Optional[Observer] = None) -> Assignment:
    """Random start, then alternate outlier relocation with transfers and swaps while the total cost drops."""
    if m < 1:
        raise ValueError(f'need at least one agent, got m={m}')
    costs = SubsetHeuristic(cfg.heuristic, cfg.cache_limit)
    if not costs.setup(g):
        raise ValueError(costs.get_error())

    p = random_initial_partition(g, m, cfg.seed)
    p2 = transfers_and_swaps(costs, p, observer)
    cost, cost2 = partition_cost(costs, p), partition_cost(costs, p2)
    _emit(observer, 'start', wlp_sum=cost, improved_wlp_sum=cost2, partition=p)

    iteration = 0
    while cost2 < cost:
        if iteration >= cfg.max_outer_iterations:
            logger.warning(f'stopping after {iteration} outer iterations (max_outer_iterations)')
            break
        iteration += 1
        p2 = transfer_outliers(costs, p2, cfg.alpha, observer)
        p2 = transfers_and_swaps(costs, p2, observer)
        cost, cost2 = partition_cost(costs, p), partition_cost(costs, p2)
        if cost2 < cost:
            p = p2
            _emit(observer, 'accept', iteration=iteration, wlp_sum=cost2, partition=p)
        else:
            _emit(observer, 'reject', iteration=iteration, wlp_sum=cost2, partition=p2)

    logger.info(
        f'{cfg.heuristic.value} optimizer finished after {iteration} outer iterations, '
        f'{costs.evaluations} subset evaluations, wlp_sum {partition_cost(costs, p):.3f}'
    )
    return costs.assignment(p)
