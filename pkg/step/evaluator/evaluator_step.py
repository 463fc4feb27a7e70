#!/usr/bin/env python3
# See LICENSE for details

import logging

from core.graph import Assignment, Graph, validate_assignment
from core.metrics import assignment_summary, curve_as_rows, path_costs, restoration_curve
from core.step import Step
from tool.instance.instance_io import save_curve, stage_graph

logger = logging.getLogger(__name__)


def evaluate(g: Graph, a: Assignment) -> dict:
    violation = validate_assignment(g, a)
    if violation:
        raise ValueError(f'invalid assignment: {violation}')
    curve = restoration_curve(g, a)
    return {
        **assignment_summary(g, a),
        'path_costs': path_costs(g, a),
        'final_restoration_time': curve.final_restoration_time,
        'curve': curve_as_rows(curve),
    }


class Evaluator(Step):
    """
    Scores a given crew assignment.

    Reads from:
      - `instance` or inline `graph`
      - `assignment`: one node list per crew, each starting at the depot
      - `curve_csv` (optional): also write the restoration curve there

    Writes:
      - `wlp_sum`, `average_wait_hours`, `latency_range`, `path_costs`,
        `final_restoration_time`, `curve` ([time_minutes, population_unserved] rows)
    """

    def run(self, data):
        g, _ = stage_graph(data)
        if not data.get('assignment'):
            raise ValueError("evaluator input needs an 'assignment'")
        a = Assignment.of(data['assignment'])
        result = evaluate(g, a)
        if data.get('curve_csv'):
            save_curve(restoration_curve(g, a), data['curve_csv'])
        return result


if __name__ == '__main__':  # pragma: no cover
    raise SystemExit(Evaluator.main())
