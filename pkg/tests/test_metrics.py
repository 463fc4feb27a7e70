# See LICENSE for details

import pytest

from core.errors import DegenerateInstanceError
from core.graph import Assignment, Graph
from core.metrics import (
    average_wait,
    completion_times,
    latency,
    latency_range,
    path_wlp,
    restoration_curve,
    wlp_sum,
)


def test_latency(e1):
    assert latency(e1, [0, 1, 2], 3) == 3
    assert latency(e1, [0, 2, 1], 3) == 7
    assert latency(e1, [0, 2, 1], 1) == 0
    with pytest.raises(IndexError):
        latency(e1, [0, 1], 3)


def test_completion_times(e1):
    assert completion_times(e1, [0, 2, 1]) == [0.0, 4.0, 7.0]


def test_path_wlp(e1):
    assert path_wlp(e1, [0, 1, 2]) == 18
    assert path_wlp(e1, [0, 2, 1]) == 41
    assert path_wlp(e1, [0]) == 0


def test_wlp_sum(e1):
    assert wlp_sum(e1, Assignment.of([[0, 1], [0, 2]])) == 23
    assert wlp_sum(e1, Assignment.of([[0, 1, 2], [0]])) == 18
    single = Graph.build([0], [[0]])
    assert wlp_sum(single, Assignment.of([[0], [0]])) == 0


def test_average_wait(e1):
    assert average_wait(e1, Assignment.of([[0, 1], [0, 2]])) == pytest.approx(23 / 8 / 60, rel=1e-12)
    assert average_wait(e1, Assignment.of([[0, 1, 2], [0]])) == 0.0375


def test_average_wait_degenerate():
    single = Graph.build([0], [[0]])
    assert average_wait(single, Assignment.of([[0]])) == 0.0
    zero = Graph.build([0, 0], [[0, 1], [1, 0]])
    with pytest.raises(DegenerateInstanceError, match='degenerate instance'):
        average_wait(zero, Assignment.of([[0, 1]]))


def test_latency_range(e1):
    assert latency_range(e1, Assignment.of([[0, 1], [0, 2]])) == 17
    assert latency_range(e1, Assignment.of([[0, 1, 2], [0]])) == 18
    assert latency_range(e1, Assignment.of([[0, 2, 1]])) == 0


def test_restoration_curve(e1):
    curve = restoration_curve(e1, Assignment.of([[0, 1], [0, 2]]))
    assert curve.points == ((0.0, 8.0), (1.0, 5.0), (4.0, 0.0))
    curve = restoration_curve(e1, Assignment.of([[0, 1, 2], [0]]))
    assert curve.points == ((0.0, 8.0), (1.0, 5.0), (3.0, 0.0))
    assert curve.final_restoration_time == 3.0


def test_restoration_curve_without_targets():
    single = Graph.build([0], [[0]])
    assert restoration_curve(single, Assignment.of([[0], [0]])).points == ((0.0, 0.0),)


def test_restoration_curve_merges_simultaneous_completions():
    g = Graph.build([0, 2, 7], [[0, 5, 5], [5, 0, 5], [5, 5, 0]])
    assert restoration_curve(g, Assignment.of([[0, 1], [0, 2]])).points == ((0.0, 9.0), (5.0, 0.0))


def test_restoration_curve_zero_time_completion_joins_initial_point():
    g = Graph.build([0, 2, 7], [[0, 0, 5], [0, 0, 5], [5, 5, 0]])
    assert restoration_curve(g, Assignment.of([[0, 1, 2]])).points == ((0.0, 7.0), (5.0, 0.0))


def test_unserved_at(e1):
    curve = restoration_curve(e1, Assignment.of([[0, 1], [0, 2]]))
    assert curve.unserved_at(0) == 8
    assert curve.unserved_at(0.5) == 8
    assert curve.unserved_at(1) == 5
    assert curve.unserved_at(3.9) == 5
    assert curve.unserved_at(100) == 0


def test_identities_on_micro_instances(micro_instance):
    for seed in range(30):
        g = micro_instance(6, seed)
        a = Assignment.of([[0, 1, 2], [0, 5, 3, 4]])
        assert wlp_sum(g, a) == sum(path_wlp(g, p) for p in a.paths)
        assert average_wait(g, a) * 60 * g.total_importance == pytest.approx(wlp_sum(g, a), rel=1e-9)
        curve = restoration_curve(g, a)
        assert curve.points[0][1] == g.total_importance
        assert curve.points[-1][1] == 0
        # appending never lowers the cost
        assert path_wlp(g, [0, 1, 2, 3]) >= path_wlp(g, [0, 1, 2])
