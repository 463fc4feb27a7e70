# See LICENSE for details
"""
Benchmark dispatch strategies: crews claim targets one at a time from a shared pool.

The simulation is event driven. The crew that becomes free first (lowest crew index on ties)
claims an unclaimed target according to its rule, travels and repairs, and becomes free again.
At time 0 every crew is at the depot, so crews claim in index order.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from core.graph import Assignment, Graph

logger = logging.getLogger(__name__)


@dataclass
class CrewState:
    index: int
    current: int
    available_at: float = 0.0
    route: list[int] = field(default_factory=list)


# rule(graph, crew, unclaimed targets in ascending order) -> claimed target
ClaimRule = Callable[[Graph, CrewState, list[int]], int]


def claim_most_important(g: Graph, crew: CrewState, unclaimed: list[int]) -> int:
    best = unclaimed[0]
    for v in unclaimed[1:]:
        if g.importance[v] > g.importance[best]:
            best = v
    return best


def claim_nearest(g: Graph, crew: CrewState, unclaimed: list[int]) -> int:
    row = g.edge_weight[crew.current]
    best = unclaimed[0]
    for v in unclaimed[1:]:
        if row[v] < row[best]:
            best = v
    return best


def search_radius(g: Graph) -> float:
    """A quarter of the spread between the longest and the shortest off-diagonal edge."""
    if g.n < 2:
        return 0.0
    off_diagonal = [d for u, row in enumerate(g.edge_weight) for v, d in enumerate(row) if u != v]
    return (max(off_diagonal) - min(off_diagonal)) / 4


def random_within_radius(radius: float, rng: np.random.Generator) -> ClaimRule:
    def claim(g: Graph, crew: CrewState, unclaimed: list[int]) -> int:
        row = g.edge_weight[crew.current]
        in_radius = [v for v in unclaimed if row[v] <= radius]
        if not in_radius:
            return claim_nearest(g, crew, unclaimed)
        return in_radius[int(rng.integers(len(in_radius)))]

    return claim


def simulate_claims(g: Graph, rules: list[ClaimRule]) -> Assignment:
    """Runs one crew per rule until every target is claimed; returns the crews' routes."""
    if not rules:
        raise ValueError('need at least one crew')
    crews = [CrewState(index=k, current=g.depot, route=[g.depot]) for k in range(len(rules))]
    unclaimed = sorted(g.targets)
    queue = [(0.0, k) for k in range(len(crews))]
    heapq.heapify(queue)
    claims = 0

    while unclaimed:
        t, k = heapq.heappop(queue)
        crew = crews[k]
        v = rules[k](g, crew, unclaimed)
        unclaimed.remove(v)
        crew.available_at = t + g.edge_weight[crew.current][v]
        crew.current = v
        crew.route.append(v)
        claims += 1
        heapq.heappush(queue, (crew.available_at, k))

    assert claims == g.n - 1
    return Assignment(tuple(tuple(c.route) for c in crews))


def greedy_assignment(g: Graph, m: int) -> Assignment:
    if m < 1:
        raise ValueError(f'need at least one agent, got m={m}')
    return simulate_claims(g, [claim_most_important] * m)


def nearest_neighbor_assignment(g: Graph, m: int) -> Assignment:
    if m < 1:
        raise ValueError(f'need at least one agent, got m={m}')
    return simulate_claims(g, [claim_nearest] * m)


def greedy_random_assignment(g: Graph, m: int, seed: int) -> Assignment:
    """The first ceil(m/2) crews claim greedily; the rest claim a random target within the search radius."""
    if m < 1:
        raise ValueError(f'need at least one agent, got m={m}')
    rng = np.random.default_rng(seed)
    radius = search_radius(g)
    greedy_crews = math.ceil(m / 2)
    random_rule = random_within_radius(radius, rng)
    logger.debug(f'greedy_random_assignment: {greedy_crews} greedy crews, radius {radius:.3f} min')
    return simulate_claims(g, [claim_most_important] * greedy_crews + [random_rule] * (m - greedy_crews))
