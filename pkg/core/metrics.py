# See LICENSE for details
"""
Cost functionals over paths and assignments.

Units: edge weights and latencies in minutes, weighted latency in population-minutes,
average wait in hours.
"""

from dataclasses import dataclass
from typing import Sequence

from core.errors import DegenerateInstanceError
from core.graph import Assignment, Graph

MINUTES_PER_HOUR = 60.0


@dataclass(frozen=True)
class RestorationCurve:
    # (time in minutes, population still unserved), times strictly increasing
    points: tuple[tuple[float, float], ...]

    @property
    def final_restoration_time(self) -> float:
        return self.points[-1][0]

    def unserved_at(self, t: float) -> float:
        """Step-function value at time t (right-continuous: a completion at t counts as served)."""
        unserved = self.points[0][1]
        for time, value in self.points:
            if time > t:
                break
            unserved = value
        return unserved


def latency(g: Graph, path: Sequence[int], i: int) -> float:
    """Travel time from the first node of `path` to its i-th node (1-based)."""
    if not 1 <= i <= len(path):
        raise IndexError(f'position {i} outside path of length {len(path)}')
    d = g.edge_weight
    return sum(d[path[k]][path[k + 1]] for k in range(i - 1))


def completion_times(g: Graph, path: Sequence[int]) -> list[float]:
    """Latency of every position of `path`, in one pass."""
    d = g.edge_weight
    times = [0.0]
    t = 0.0
    for k in range(1, len(path)):
        t += d[path[k - 1]][path[k]]
        times.append(t)
    return times


def path_wlp(g: Graph, path: Sequence[int]) -> float:
    d = g.edge_weight
    w = g.importance
    total = 0.0
    t = 0.0
    for k in range(1, len(path)):
        t += d[path[k - 1]][path[k]]
        total += w[path[k]] * t
    return total


def wlp_sum(g: Graph, a: Assignment) -> float:
    return sum(path_wlp(g, p) for p in a.paths)


def average_wait(g: Graph, a: Assignment) -> float:
    """Population-weighted mean waiting time, in hours."""
    total = sum(g.importance)
    if total == 0:
        if g.targets:
            raise DegenerateInstanceError('degenerate instance: total importance is zero')
        return 0.0
    return wlp_sum(g, a) / total / MINUTES_PER_HOUR


def latency_range(g: Graph, a: Assignment) -> float:
    if a.m < 1:
        raise ValueError('latency_range needs at least one path')
    costs = [path_wlp(g, p) for p in a.paths]
    return max(costs) - min(costs)


def restoration_curve(g: Graph, a: Assignment) -> RestorationCurve:
    """
    Population lacking service over time.

    Completions at the same time are merged into one point; completions at time 0
    are merged into the initial point, so with a zero-weight edge out of the depot the
    curve starts below the total importance.
    """
    served_at: dict[float, float] = {}
    for path in a.paths:
        for v, t in zip(path[1:], completion_times(g, path)[1:]):
            served_at[t] = served_at.get(t, 0.0) + g.importance[v]

    total = sum(g.importance[v] for path in a.paths for v in path[1:])
    unserved = total
    unserved -= served_at.pop(0.0, 0.0)
    points = [(0.0, unserved)]
    for t in sorted(served_at):
        unserved -= served_at[t]
        points.append((t, unserved))
    # Floating subtraction can leave a residue at the end.
    if points[-1][1] != 0 and abs(points[-1][1]) <= 1e-9 * max(1.0, total):
        points[-1] = (points[-1][0], 0.0)
    return RestorationCurve(tuple(points))


def path_costs(g: Graph, a: Assignment) -> list[float]:
    return [path_wlp(g, p) for p in a.paths]


def assignment_summary(g: Graph, a: Assignment) -> dict:
    """The scalar metrics of one assignment, as plain floats."""
    return {
        'wlp_sum': wlp_sum(g, a),
        'average_wait_hours': average_wait(g, a),
        'latency_range': latency_range(g, a),
    }


def curve_as_rows(curve: RestorationCurve) -> list[list[float]]:
    return [[t, u] for t, u in curve.points]

