# See LICENSE for details
"""
Seeded random instances of the storm-repair scenario.

Draw order for a given seed (numpy PCG64 via `default_rng`): target importances, then one
travel time per unordered node pair in row-major upper-triangle order, then one repair time per
target. Every value is quantized to 6 decimals so that instance files reproduce it exactly.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from core.graph import Graph

logger = logging.getLogger(__name__)

DECIMALS = 6


@dataclass(frozen=True)
class RepairBand:
    """Targets with importance in [min_importance, max_importance) take between min_hours and max_hours to repair."""

    min_importance: float
    max_importance: float
    min_hours: float
    max_hours: float


DEFAULT_REPAIR_TABLE = (
    RepairBand(0, 10, 2, 4),
    RepairBand(10, 100, 2, 6),
    RepairBand(100, 1000, 3, 8),
    RepairBand(1000, math.inf, 5, 10),
)


@dataclass(frozen=True)
class InstanceParams:
    n: int = 201
    m: int = 20
    importance_range: tuple[int, int] = (1, 1500)
    travel_range_minutes: tuple[float, float] = (30.0, 60.0)
    repair_table: tuple[RepairBand, ...] = field(default=DEFAULT_REPAIR_TABLE)
    zero_repair: bool = False
    seed: int = 0

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'InstanceParams':
        """Builds params from a YAML mapping; `repair_table` rows are [min_w, max_w or null, min_h, max_h]."""
        kwargs: dict[str, Any] = {}
        for key in ('n', 'm', 'seed'):
            if data.get(key) is not None:
                kwargs[key] = int(data[key])
        if data.get('zero_repair') is not None:
            kwargs['zero_repair'] = bool(data['zero_repair'])
        if data.get('importance_range') is not None:
            lo, hi = data['importance_range']
            kwargs['importance_range'] = (int(lo), int(hi))
        if data.get('travel_range_minutes') is not None:
            lo, hi = data['travel_range_minutes']
            kwargs['travel_range_minutes'] = (float(lo), float(hi))
        if data.get('repair_table') is not None:
            kwargs['repair_table'] = tuple(
                RepairBand(float(lo), math.inf if hi is None else float(hi), float(h_lo), float(h_hi))
                for lo, hi, h_lo, h_hi in data['repair_table']
            )
        return cls(**kwargs)

    def validate(self) -> str | None:
        if self.n < 1:
            return f'n must be >= 1, got {self.n}'
        if self.m < 1:
            return f'm must be >= 1, got {self.m}'
        lo, hi = self.importance_range
        if lo > hi or lo < 0:
            return f'importance_range {self.importance_range} is empty or negative'
        lo, hi = self.travel_range_minutes
        if lo > hi or lo < 0:
            return f'travel_range_minutes {self.travel_range_minutes} is empty or negative'
        if not self.repair_table:
            return 'repair_table is empty'
        if self.repair_table[0].min_importance != 0:
            return 'repair_table must start at importance 0'
        for prev, band in zip(self.repair_table, self.repair_table[1:]):
            if band.min_importance != prev.max_importance:
                return f'repair_table rows are not contiguous at importance {prev.max_importance}'
        if self.repair_table[-1].max_importance != math.inf:
            return 'repair_table must extend to infinity'
        for band in self.repair_table:
            if band.min_hours > band.max_hours or band.min_hours < 0:
                return f'repair band {band} has an empty hour range'
        return None


def quantize(x: float) -> float:
    """The double that a 6-decimal instance file stores for x."""
    return float(f'{x:.{DECIMALS}f}')


def repair_band(importance: float, table: tuple[RepairBand, ...] = DEFAULT_REPAIR_TABLE) -> RepairBand:
    for band in table:
        if band.min_importance <= importance < band.max_importance:
            return band
    raise ValueError(f'no repair band covers importance {importance}')


def draw_repair_minutes(importance: Sequence[float], table: tuple[RepairBand, ...], rng: np.random.Generator) -> np.ndarray:
    """One uniform draw per target from its repair band, converted from hours to minutes."""
    minutes = np.zeros(len(importance))
    for k, w in enumerate(importance):
        band = repair_band(w, table)
        minutes[k] = quantize(rng.uniform(band.min_hours, band.max_hours) * 60.0)
    return minutes


def fold_repair(travel: np.ndarray, repair_minutes: np.ndarray) -> list[list[float]]:
    """d(u -> v) = travel(u, v) + repair(v) off the diagonal, 0 on it, quantized to 6 decimals."""
    n = len(repair_minutes)
    return [[0.0 if u == v else quantize(travel[u, v] + repair_minutes[v]) for v in range(n)] for u in range(n)]


def generate_random_instance(params: InstanceParams) -> Graph:
    violation = params.validate()
    if violation:
        raise ValueError(f'invalid instance params: {violation}')
    rng = np.random.default_rng(params.seed)
    n = params.n

    lo, hi = params.importance_range
    importance = np.zeros(n)
    importance[1:] = rng.integers(lo, hi, size=n - 1, endpoint=True)

    upper = np.triu_indices(n, k=1)
    travel = np.zeros((n, n))
    travel[upper] = [quantize(t) for t in rng.uniform(*params.travel_range_minutes, size=len(upper[0]))]
    travel = travel + travel.T

    repair = np.zeros(n)
    if not params.zero_repair:
        repair[1:] = draw_repair_minutes(importance[1:], params.repair_table, rng)

    g = Graph.build(importance.tolist(), fold_repair(travel, repair), depot=0, repair_time=repair.tolist())
    logger.info(f'generated random instance: n={n}, seed={params.seed}, total importance {g.total_importance:.0f}')
    return g
