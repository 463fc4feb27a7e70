# See LICENSE for details
"""
Plain-text instance files and CSV experiment artifacts.

Instance file, version 1:

    mwlp 1
    n <count> depot <index>
    node <index> <importance> <repair_minutes>      (n lines)
    edge <u> <v> <d_minutes>                        (n*(n-1) lines, u != v)

Floats are written with 6 decimals; saving refuses a graph holding a value that does not fit.
Blank lines and lines starting with `#` are ignored on load.
"""

import csv
import logging
import math
from typing import Iterable

import numpy as np

from core.errors import InstanceParseError
from core.graph import Graph, validate_graph
from core.metrics import RestorationCurve
from core.report import STRATEGY_ORDER, SolveReport
from core.utils import ensure_parent_dir
from tool.instance.instance_generator import quantize

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
REPORT_COLUMNS = ['instance', 'seed', 'strategy', 'wlp_sum', 'average_wait_hours', 'latency_range', 'wall_ms']
SUMMARY_COLUMNS = [
    'strategy', 'runs',
    'average_wait_median', 'average_wait_iqr',
    'latency_range_median', 'latency_range_iqr',
]


def _fmt(x: float) -> str:
    return f'{x:.6f}'


def format_instance(g: Graph) -> str:
    lines = [f'mwlp {FORMAT_VERSION}', f'n {g.n} depot {g.depot}']
    repair = g.repair_time or (0.0,) * g.n
    for v in range(g.n):
        lines.append(f'node {v} {_fmt(g.importance[v])} {_fmt(repair[v])}')
    for u in range(g.n):
        for v in range(g.n):
            if u != v:
                lines.append(f'edge {u} {v} {_fmt(g.edge_weight[u][v])}')
    return '\n'.join(lines) + '\n'


def unrepresentable_value(g: Graph) -> str | None:
    """Names the first value that would not survive the 6-decimal text format, or None."""
    repair = g.repair_time or (0.0,) * g.n
    for v in range(g.n):
        if quantize(g.importance[v]) != g.importance[v]:
            return f'node {v} importance {g.importance[v]!r}'
        if quantize(repair[v]) != repair[v]:
            return f'node {v} repair time {repair[v]!r}'
    for u in range(g.n):
        for v in range(g.n):
            if u != v and quantize(g.edge_weight[u][v]) != g.edge_weight[u][v]:
                return f'edge {u}->{v} weight {g.edge_weight[u][v]!r}'
    return None


def save_instance(g: Graph, path: str) -> None:
    violation = validate_graph(g)
    if violation:
        raise ValueError(f'refusing to save invalid graph: {violation}')
    lossy = unrepresentable_value(g)
    if lossy:
        raise ValueError(f'refusing to save instance: {lossy} does not fit in 6 decimals')
    ensure_parent_dir(path)
    with open(path, 'w', newline='\n') as f:
        f.write(format_instance(g))
    logger.info(f'saved instance with {g.n} nodes to {path}')


def _number(path: str, line_no: int, field: str, text: str, integer: bool = False) -> float:
    try:
        value = int(text) if integer else float(text)
    except ValueError:
        raise InstanceParseError(path, line_no, f'{field}: expected {"an integer" if integer else "a number"}, got {text!r}') from None
    if not integer and not math.isfinite(value):
        raise InstanceParseError(path, line_no, f'{field}: value {text!r} is not finite')
    return value


def parse_instance(text: str, path: str = '<string>') -> Graph:
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith('#'):
            rows.append((line_no, stripped.split()))

    if not rows:
        raise InstanceParseError(path, None, 'empty file')
    line_no, tokens = rows[0]
    if len(tokens) != 2 or tokens[0] != 'mwlp':
        raise InstanceParseError(path, line_no, "header: expected 'mwlp <version>'")
    version = _number(path, line_no, 'version', tokens[1], integer=True)
    if version != FORMAT_VERSION:
        raise InstanceParseError(path, line_no, f'version: unsupported format version {version}')

    if len(rows) < 2:
        raise InstanceParseError(path, None, "truncated file: missing 'n <count> depot <index>' line")
    line_no, tokens = rows[1]
    if len(tokens) != 4 or tokens[0] != 'n' or tokens[2] != 'depot':
        raise InstanceParseError(path, line_no, "size: expected 'n <count> depot <index>'")
    n = int(_number(path, line_no, 'n', tokens[1], integer=True))
    depot = int(_number(path, line_no, 'depot', tokens[3], integer=True))
    if n < 1:
        raise InstanceParseError(path, line_no, f'n: must be >= 1, got {n}')
    if not 0 <= depot < n:
        raise InstanceParseError(path, line_no, f'depot: index {depot} outside 0..{n - 1}')

    importance: list[float | None] = [None] * n
    repair: list[float] = [0.0] * n
    edges = np.full((n, n), np.nan)
    np.fill_diagonal(edges, 0.0)
    edge_count = 0

    for line_no, tokens in rows[2:]:
        kind = tokens[0]
        if kind == 'node':
            if len(tokens) != 4:
                raise InstanceParseError(path, line_no, "node: expected 'node <index> <importance> <repair_minutes>'")
            v = int(_number(path, line_no, 'node index', tokens[1], integer=True))
            if not 0 <= v < n:
                raise InstanceParseError(path, line_no, f'node index: {v} outside 0..{n - 1}')
            if importance[v] is not None:
                raise InstanceParseError(path, line_no, f'node index: node {v} declared twice')
            importance[v] = _number(path, line_no, 'importance', tokens[2])
            repair[v] = _number(path, line_no, 'repair_minutes', tokens[3])
        elif kind == 'edge':
            if len(tokens) != 4:
                raise InstanceParseError(path, line_no, "edge: expected 'edge <u> <v> <d_minutes>'")
            u = int(_number(path, line_no, 'edge u', tokens[1], integer=True))
            v = int(_number(path, line_no, 'edge v', tokens[2], integer=True))
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InstanceParseError(path, line_no, f'edge: ({u}, {v}) is not a pair of distinct nodes in 0..{n - 1}')
            if not np.isnan(edges[u, v]):
                raise InstanceParseError(path, line_no, f'edge: {u}->{v} declared twice')
            edges[u, v] = _number(path, line_no, 'd_minutes', tokens[3])
            edge_count += 1
        else:
            raise InstanceParseError(path, line_no, f"record: unknown record type {kind!r}")

    missing_nodes = [v for v, w in enumerate(importance) if w is None]
    if missing_nodes:
        raise InstanceParseError(path, None, f'truncated file: node {missing_nodes[0]} missing ({len(missing_nodes)} node lines absent)')
    if edge_count != n * (n - 1):
        u, v = (int(x) for x in np.argwhere(np.isnan(edges))[0])
        raise InstanceParseError(path, None, f'truncated file: edge {u}->{v} missing ({n * (n - 1) - edge_count} edge lines absent)')

    g = Graph.build(importance, edges.tolist(), depot=depot, repair_time=repair)
    violation = validate_graph(g)
    if violation:
        raise InstanceParseError(path, None, f'invalid instance: {violation}')
    return g


def load_instance(path: str) -> Graph:
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise InstanceParseError(path, None, f'cannot read file: {e.strerror or e}') from e
    g = parse_instance(text, path)
    logger.info(f'loaded instance with {g.n} nodes from {path}')
    return g


def _report_sort_key(report: SolveReport) -> tuple:
    return report.instance, report.seed, STRATEGY_ORDER.index(report.strategy)


def sort_reports(reports: Iterable[SolveReport]) -> list[SolveReport]:
    return sorted(reports, key=_report_sort_key)


def save_report(reports: list[SolveReport], path: str) -> None:
    """One CSV row per report, in the given order. Floats use repr, so they re-parse exactly."""
    ensure_parent_dir(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(REPORT_COLUMNS)
        for r in reports:
            writer.writerow([
                r.instance, r.seed, r.strategy.value,
                repr(float(r.wlp_sum)), repr(float(r.average_wait_hours)),
                repr(float(r.latency_range)), repr(float(r.wall_ms)),
            ])
    logger.info(f'saved {len(reports)} report rows to {path}')


def load_report_rows(path: str) -> list[dict]:
    with open(path, 'r', newline='') as f:
        return list(csv.DictReader(f))


def median_iqr(values: Iterable[float]) -> tuple[float, float]:
    """Median and interquartile range (linear interpolation between order statistics)."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    q25, q50, q75 = np.percentile(arr, [25, 50, 75])
    return float(q50), float(q75 - q25)


def summarize_reports(reports: list[SolveReport]) -> list[dict]:
    """Per-strategy median and IQR of average wait and latency range, in strategy order."""
    rows = []
    for strategy in STRATEGY_ORDER:
        chosen = [r for r in reports if r.strategy is strategy]
        if not chosen:
            continue
        wait_median, wait_iqr = median_iqr(r.average_wait_hours for r in chosen)
        range_median, range_iqr = median_iqr(r.latency_range for r in chosen)
        rows.append({
            'strategy': strategy.value,
            'runs': len(chosen),
            'average_wait_median': wait_median,
            'average_wait_iqr': wait_iqr,
            'latency_range_median': range_median,
            'latency_range_iqr': range_iqr,
        })
    return rows


def save_summary(summary: list[dict], path: str) -> None:
    ensure_parent_dir(path)
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=SUMMARY_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for row in summary:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def save_curve(curve: RestorationCurve, path: str) -> None:
    ensure_parent_dir(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['time_minutes', 'population_unserved'])
        for t, unserved in curve.points:
            writer.writerow([repr(float(t)), repr(float(unserved))])
    logger.info(f'saved restoration curve with {len(curve.points)} points to {path}')


def graph_from_mapping(data: dict) -> Graph:
    """Inline instance as found in stage YAML: `importance`, `edge_weight`, optional `depot` and `repair_time`."""
    for key in ('importance', 'edge_weight'):
        if key not in data:
            raise ValueError(f'inline graph is missing {key!r}')
    g = Graph.build(data['importance'], data['edge_weight'], depot=int(data.get('depot', 0)), repair_time=data.get('repair_time'))
    violation = validate_graph(g)
    if violation:
        raise ValueError(f'invalid inline graph: {violation}')
    return g


def graph_to_mapping(g: Graph) -> dict:
    return {
        'depot': g.depot,
        'importance': list(g.importance),
        'edge_weight': [list(row) for row in g.edge_weight],
        'repair_time': list(g.repair_time),
    }


def stage_graph(data: dict) -> tuple[Graph, str]:
    """The instance a stage input refers to, by file (`instance`) or inline (`graph`), and its label."""
    if data.get('instance'):
        return load_instance(data['instance']), str(data['instance'])
    if data.get('graph'):
        return graph_from_mapping(data['graph']), ''
    raise ValueError("stage input needs an 'instance' file or an inline 'graph'")
