# See LICENSE for details
"""
Street networks and their shortest-path closure into repair instances.

A road-network file holds one record per line:

    xnode <id> <x> <y>          intersection with planar coordinates (meters)
    seg <id1> <id2> <meters>    undirected road segment
    target <id> <importance>    repair location, optional
    depot <id>                  crew base, optional

Ids are opaque tokens. Parallel segments keep the shortest length.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx
import numpy as np

from core.errors import InstanceParseError
from core.graph import Graph, validate_graph
from tool.instance.instance_generator import InstanceParams, draw_repair_minutes, fold_repair, quantize
from tool.tool import Tool

logger = logging.getLogger(__name__)

METERS_PER_MILE = 1609.344
# 25 mph in meters per minute
URBAN_SPEED = 25 * METERS_PER_MILE / 60.0


@dataclass
class RoadNetwork:
    intersections: dict[str, tuple[float, float]] = field(default_factory=dict)
    segments: list[tuple[str, str, float]] = field(default_factory=list)
    # insertion order is the node order of the closure graph
    targets: dict[str, float] = field(default_factory=dict)
    depot: Optional[str] = None

    @property
    def has_targets(self) -> bool:
        return self.depot is not None and bool(self.targets)


def parse_road_network(text: str, path: str = '<string>') -> RoadNetwork:
    r = RoadNetwork()
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0].startswith('#'):
            continue
        kind = tokens[0]
        try:
            if kind == 'xnode' and len(tokens) == 4:
                if tokens[1] in r.intersections:
                    raise InstanceParseError(path, line_no, f'xnode: intersection {tokens[1]} declared twice')
                r.intersections[tokens[1]] = (float(tokens[2]), float(tokens[3]))
            elif kind == 'seg' and len(tokens) == 4:
                meters = float(tokens[3])
                if not math.isfinite(meters) or meters < 0:
                    raise InstanceParseError(path, line_no, f'seg: length {tokens[3]} is negative or not finite')
                r.segments.append((tokens[1], tokens[2], meters))
            elif kind == 'target' and len(tokens) == 3:
                importance = float(tokens[2])
                if not math.isfinite(importance) or importance < 0:
                    raise InstanceParseError(path, line_no, f'target: importance {tokens[2]} is negative or not finite')
                if tokens[1] in r.targets:
                    raise InstanceParseError(path, line_no, f'target: {tokens[1]} declared twice')
                r.targets[tokens[1]] = importance
            elif kind == 'depot' and len(tokens) == 2:
                if r.depot is not None:
                    raise InstanceParseError(path, line_no, 'depot: declared twice')
                r.depot = tokens[1]
            elif kind in ('xnode', 'seg', 'target', 'depot'):
                raise InstanceParseError(path, line_no, f'{kind}: wrong number of fields')
            else:
                raise InstanceParseError(path, line_no, f'record: unknown record type {kind!r}')
        except ValueError as e:
            if isinstance(e, InstanceParseError):
                raise
            raise InstanceParseError(path, line_no, f'{kind}: {e}') from None
    return r


def load_road_network(path: str) -> RoadNetwork:
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise InstanceParseError(path, None, f'cannot read file: {e.strerror or e}') from e
    r = parse_road_network(text, path)
    logger.info(f'loaded road network from {path}: {len(r.intersections)} intersections, {len(r.segments)} segments')
    return r


def format_road_network(r: RoadNetwork) -> str:
    lines = [f'xnode {i} {x!r} {y!r}' for i, (x, y) in r.intersections.items()]
    lines += [f'seg {a} {b} {meters!r}' for a, b, meters in r.segments]
    lines += [f'target {t} {w:g}' for t, w in r.targets.items()]
    if r.depot is not None:
        lines.append(f'depot {r.depot}')
    return '\n'.join(lines) + '\n'


class RoadNetworkTool(Tool):
    """Shortest road distances between the depot and the targets of one network."""

    def __init__(self):
        super().__init__()
        self.network: RoadNetwork | None = None
        self.graph = nx.Graph()

    def setup(self, network: RoadNetwork) -> bool:
        self._is_ready = False
        if not network.has_targets:
            self.set_error('road network has no depot or no targets')
            logger.error(self.get_error())
            return False

        g = nx.Graph()
        g.add_nodes_from(network.intersections)
        for a, b, meters in network.segments:
            for end in (a, b):
                if end not in network.intersections:
                    self.set_error(f'segment {a}-{b} references undeclared intersection {end}')
                    logger.error(self.get_error())
                    return False
            if a == b:
                continue
            if g.has_edge(a, b) and g[a][b]['length'] <= meters:
                continue
            g.add_edge(a, b, length=meters)

        for node in (network.depot, *network.targets):
            if node not in g:
                self.set_error(f'node {node} is not a declared intersection')
                logger.error(self.get_error())
                return False
        reachable = nx.node_connected_component(g, network.depot)
        unreachable = [t for t in network.targets if t not in reachable]
        if unreachable:
            self.set_error(f'road network is not connected: target {unreachable[0]} unreachable from depot {network.depot}')
            logger.error(self.get_error())
            return False

        self.network = network
        self.graph = g
        self._is_ready = True
        return True

    @property
    def closure_nodes(self) -> list[str]:
        """Depot first, then targets in declaration order."""
        self.require_ready()
        return [self.network.depot, *(t for t in self.network.targets if t != self.network.depot)]

    def distance_matrix(self) -> np.ndarray:
        """Shortest-path road distance in meters between every pair of closure nodes."""
        nodes = self.closure_nodes
        dist = np.zeros((len(nodes), len(nodes)))
        for u, source in enumerate(nodes):
            lengths = nx.single_source_dijkstra_path_length(self.graph, source, weight='length')
            for v, target in enumerate(nodes):
                dist[u, v] = lengths[target]
        return dist


def metric_closure(
    r: RoadNetwork,
    speed: float = URBAN_SPEED,
    repair_times: Optional[Mapping[str, float]] = None,
) -> Graph:
    """
    Complete repair instance over depot + targets.

    travel(u, v) is the shortest road distance divided by `speed` (meters per minute);
    d(u -> v) = travel(u, v) + repair(v). `repair_times` maps target ids to minutes (missing: 0).
    """
    if speed <= 0:
        raise ValueError(f'speed must be positive, got {speed}')
    tool = RoadNetworkTool()
    if not tool.setup(r):
        raise ValueError(tool.get_error())
    nodes = tool.closure_nodes
    repair_times = repair_times or {}

    travel = tool.distance_matrix() / speed
    travel = np.vectorize(quantize)(travel)
    repair = np.array([0.0] + [quantize(repair_times.get(t, 0.0)) for t in nodes[1:]])
    importance = [0.0] + [quantize(r.targets[t]) for t in nodes[1:]]

    g = Graph.build(importance, fold_repair(travel, repair), depot=0, repair_time=repair.tolist())
    violation = validate_graph(g)
    if violation:
        raise ValueError(f'closure produced an invalid graph: {violation}')
    logger.info(f'metric closure: {g.n} nodes at {speed:.2f} m/min')
    return g


def grid_road_network(rows: int = 22, cols: int = 22, spacing_m: float = 450.0, jitter: float = 0.2, seed: int = 0) -> RoadNetwork:
    """
    Seeded street grid: intersections on a rows x cols lattice, each displaced by up to
    `jitter * spacing_m` per axis; segments join lattice neighbours with their straight-line length.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f'grid needs at least one row and column, got {rows}x{cols}')
    if not 0 <= jitter < 0.5:
        raise ValueError(f'jitter must lie in [0, 0.5), got {jitter}')
    rng = np.random.default_rng(seed)
    offsets = rng.uniform(-jitter * spacing_m, jitter * spacing_m, size=(rows, cols, 2))

    r = RoadNetwork()
    for i in range(rows):
        for j in range(cols):
            r.intersections[str(i * cols + j)] = (
                round(j * spacing_m + float(offsets[i, j, 0]), 3),
                round(i * spacing_m + float(offsets[i, j, 1]), 3),
            )
    for i in range(rows):
        for j in range(cols):
            here = str(i * cols + j)
            for ni, nj in ((i, j + 1), (i + 1, j)):
                if ni < rows and nj < cols:
                    there = str(ni * cols + nj)
                    (x1, y1), (x2, y2) = r.intersections[here], r.intersections[there]
                    r.segments.append((here, there, round(math.hypot(x2 - x1, y2 - y1), 3)))
    return r


def sample_targets(r: RoadNetwork, count: int, importance_range: tuple[int, int] = (1, 1500), seed: int = 0) -> RoadNetwork:
    """Copy of `r` with a random depot and `count` random target intersections carrying integer importances."""
    ids = list(r.intersections)
    if count < 0 or count + 1 > len(ids):
        raise ValueError(f'cannot place a depot and {count} targets on {len(ids)} intersections')
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(ids), size=count + 1, replace=False)
    lo, hi = importance_range
    weights = rng.integers(lo, hi, size=count, endpoint=True)
    return RoadNetwork(
        intersections=dict(r.intersections),
        segments=list(r.segments),
        targets={ids[int(k)]: float(w) for k, w in zip(chosen[1:], weights)},
        depot=ids[int(chosen[0])],
    )


def urban_instance(r: RoadNetwork, params: InstanceParams, speed: float = URBAN_SPEED) -> Graph:
    """
    Repair instance on a street network.

    Without depot/target records, a depot and n - 1 targets are sampled with `params.seed`.
    Repair minutes come from the repair table (second seeded stream) unless `zero_repair` is set.
    """
    if not r.has_targets:
        r = sample_targets(r, params.n - 1, params.importance_range, params.seed)
    repair_times: dict[str, float] = {}
    if not params.zero_repair:
        targets = [t for t in r.targets if t != r.depot]
        minutes = draw_repair_minutes([r.targets[t] for t in targets], params.repair_table, np.random.default_rng([params.seed, 1]))
        repair_times = dict(zip(targets, minutes.tolist()))
    return metric_closure(r, speed, repair_times)
