# See LICENSE for details
"""
Instance, partition and assignment model for the m-agent minimum weighted latency problem.

A `Graph` is complete and directed: `edge_weight[u][v]` is the travel time from u to v plus the
repair time at v, in minutes. `importance[v]` is the population served by v; the depot has none.
All three value types are frozen after construction and can be shared between workers.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Path = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    n: int
    depot: int
    importance: tuple[float, ...]
    edge_weight: tuple[tuple[float, ...], ...]
    # Informational only; already folded into edge_weight.
    repair_time: tuple[float, ...] = ()

    @classmethod
    def build(
        cls,
        importance: Sequence[float],
        edge_weight: Sequence[Sequence[float]],
        depot: int = 0,
        repair_time: Optional[Sequence[float]] = None,
    ) -> 'Graph':
        n = len(importance)
        return cls(
            n=n,
            depot=depot,
            importance=tuple(float(w) for w in importance),
            edge_weight=tuple(tuple(float(d) for d in row) for row in edge_weight),
            repair_time=tuple(float(r) for r in repair_time) if repair_time is not None else (0.0,) * n,
        )

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if v != self.depot)

    @property
    def total_importance(self) -> float:
        return sum(self.importance)


@dataclass(frozen=True)
class Partition:
    subsets: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, subsets: Iterable[Iterable[int]]) -> 'Partition':
        return cls(tuple(frozenset(s) for s in subsets))

    @property
    def m(self) -> int:
        return len(self.subsets)

    def as_lists(self) -> list[list[int]]:
        return [sorted(s) for s in self.subsets]


@dataclass(frozen=True)
class Assignment:
    paths: tuple[Path, ...]

    @classmethod
    def of(cls, paths: Iterable[Iterable[int]]) -> 'Assignment':
        return cls(tuple(tuple(int(v) for v in p) for p in paths))

    @property
    def m(self) -> int:
        return len(self.paths)

    def as_lists(self) -> list[list[int]]:
        return [list(p) for p in self.paths]


def validate_graph(g: Graph) -> Optional[str]:
    """Returns None if `g` is a valid instance, otherwise a description of the first violated invariant."""
    if g.n < 1:
        return 'graph has no nodes'
    if not 0 <= g.depot < g.n:
        return f'depot {g.depot} out of range'
    if len(g.importance) != g.n:
        return f'importance has {len(g.importance)} entries, expected {g.n}'
    if len(g.edge_weight) != g.n or any(len(row) != g.n for row in g.edge_weight):
        return f'edge_weight is not a {g.n}x{g.n} matrix'
    for v, w in enumerate(g.importance):
        if not math.isfinite(w) or w < 0:
            return f'importance of node {v} is negative or not finite'
    if g.importance[g.depot] != 0:
        return 'depot importance nonzero'
    for u, row in enumerate(g.edge_weight):
        if row[u] != 0:
            return 'nonzero diagonal'
        for v, d in enumerate(row):
            if not math.isfinite(d) or d < 0:
                return f'edge {u}->{v} is negative or not finite'
    return None


def validate_partition(g: Graph, p: Partition) -> Optional[str]:
    if p.m < 1:
        return 'partition has no subsets'
    owner: dict[int, int] = {}
    for i, subset in enumerate(p.subsets):
        if g.depot not in subset:
            return 'subset missing depot'
        for v in sorted(subset):
            if not 0 <= v < g.n:
                return f'node {v} out of range'
            if v == g.depot:
                continue
            if v in owner:
                return f'node {v} in two subsets'
            owner[v] = i
    for v in g.targets:
        if v not in owner:
            return f'node {v} not covered'
    return None


def validate_assignment(g: Graph, a: Assignment) -> Optional[str]:
    if a.m < 1:
        return 'assignment has no paths'
    seen: set[int] = set()
    for path in a.paths:
        if not path or path[0] != g.depot:
            return 'path does not begin at depot'
        for v in path[1:]:
            if not 0 <= v < g.n:
                return f'node {v} out of range'
            if v == g.depot or v in seen:
                return f'node {v} appears twice'
            seen.add(v)
    for v in g.targets:
        if v not in seen:
            return f'node {v} not covered'
    return None


def partition_of(a: Assignment) -> Partition:
    return Partition(tuple(frozenset(path) for path in a.paths))


def canonical_key(p: Partition) -> tuple[tuple[int, ...], ...]:
    """
    Order-free identity of a partition.

    Two partitions share a key iff they hold the same subsets as node sets, whatever the subset
    order or the order inside a subset. Repeated `{depot}` subsets are kept as a multiset.
    """
    return tuple(sorted(tuple(sorted(s)) for s in p.subsets))
