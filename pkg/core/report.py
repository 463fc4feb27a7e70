# See LICENSE for details

from dataclasses import dataclass
from enum import Enum

from core.errors import UnknownStrategyError
from core.graph import Assignment


class StrategyId(str, Enum):
    GA = 'GA'        # greedy_assignment
    NNA = 'NNA'      # nearest_neighbor_assignment
    GRA = 'GRA'      # greedy_random_assignment
    TSG = 'TSG'      # transfers_swaps_outliers with GREEDY
    TSNN = 'TSNN'    # transfers_swaps_outliers with NEAREST_NEIGHBOR
    EXACT = 'EXACT'  # brute-force optimum, tiny instances only

    @classmethod
    def parse(cls, name: str) -> 'StrategyId':
        try:
            return cls(name.strip().upper())
        except ValueError:
            valid = ', '.join(s.value for s in cls)
            raise UnknownStrategyError(f'unknown strategy {name!r} (expected one of {valid})') from None


# Benchmark rows are ordered by this sequence within one instance and seed.
STRATEGY_ORDER = [StrategyId.GA, StrategyId.NNA, StrategyId.GRA, StrategyId.TSG, StrategyId.TSNN, StrategyId.EXACT]


@dataclass(frozen=True)
class SolveReport:
    strategy: StrategyId
    seed: int
    agents: int
    assignment: Assignment
    wlp_sum: float
    average_wait_hours: float
    latency_range: float
    wall_ms: float
    instance: str = ''

    def to_dict(self) -> dict:
        return {
            'instance': self.instance,
            'strategy': self.strategy.value,
            'seed': self.seed,
            'agents': self.agents,
            'wlp_sum': float(self.wlp_sum),
            'average_wait_hours': float(self.average_wait_hours),
            'latency_range': float(self.latency_range),
            'wall_ms': float(self.wall_ms),
            'assignment': self.assignment.as_lists(),
        }
