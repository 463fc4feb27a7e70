# See LICENSE for details

import numpy as np
import pytest

from core.errors import SizeGuardError
from core.graph import Graph, validate_assignment
from core.metrics import wlp_sum
from core.report import StrategyId
from step.solver.solver_step import solve
from tool.exact.exact_oracle import exact_multi_mwlp, exact_single_mwlp
from tool.instance.instance_generator import InstanceParams, generate_random_instance


def test_single_on_e1(e1):
    result = exact_single_mwlp(e1)
    assert result.assignment.as_lists() == [[0, 1, 2]]
    assert result.wlp_sum == 18
    assert result.candidates == 2


def test_single_trivial_graphs():
    assert exact_single_mwlp(Graph.build([0], [[0]])).wlp_sum == 0
    g = Graph.build([0, 7], [[0, 3], [2, 0]])
    assert exact_single_mwlp(g).wlp_sum == 21


def test_multi_on_e1(e1):
    result = exact_multi_mwlp(e1, 2)
    assert result.wlp_sum == 18
    assert result.assignment.as_lists() == [[0, 1, 2], [0]]
    assert result.candidates == 6
    assert wlp_sum(e1, result.assignment) == result.wlp_sum


def test_multi_with_one_agent_equals_single(micro_instance):
    for seed in range(10):
        g = micro_instance(6, seed)
        assert exact_multi_mwlp(g, 1).wlp_sum == exact_single_mwlp(g).wlp_sum


def test_optimum_non_increasing_in_agents(micro_instance):
    for seed in range(10):
        g = micro_instance(6, seed)
        optima = [exact_multi_mwlp(g, m).wlp_sum for m in (1, 2, 3, 4)]
        assert optima == sorted(optima, reverse=True)


def test_singletons_bound(micro_instance):
    for seed in range(10):
        g = micro_instance(5, seed)
        direct = sum(g.importance[v] * g.edge_weight[0][v] for v in g.targets)
        assert exact_multi_mwlp(g, 4).wlp_sum <= direct


def test_size_guards(micro_instance):
    with pytest.raises(SizeGuardError) as err:
        exact_single_mwlp(micro_instance(12, 0))
    assert err.value.max_n == 11
    with pytest.raises(SizeGuardError):
        exact_multi_mwlp(micro_instance(9, 0), 2)
    with pytest.raises(SizeGuardError) as err:
        exact_multi_mwlp(micro_instance(5, 0), 5)
    assert err.value.max_m == 4


def scaled_down_instance(n: int, m: int, seed: int) -> Graph:
    return generate_random_instance(
        InstanceParams(n=n, m=m, seed=seed, importance_range=(1, 20), travel_range_minutes=(1.0, 30.0))
    )


def test_oracle_dominance(micro_instance):
    """No strategy beats the exact optimum on 200 micro-instances, half of them from the scaled-down generator."""
    rng = np.random.default_rng(2024)
    violations = []
    for case in range(200):
        n = int(rng.integers(4, 7, endpoint=True))
        m = int(rng.integers(1, 3, endpoint=True))
        if case % 2:
            g = scaled_down_instance(n, m, seed=10_000 + case)
        else:
            g = micro_instance(n, seed=10_000 + case)
        optimum = exact_multi_mwlp(g, m).wlp_sum
        for strategy in (StrategyId.GA, StrategyId.NNA, StrategyId.GRA, StrategyId.TSG, StrategyId.TSNN):
            report = solve(g, strategy, m, seed=case, timing=False)
            assert validate_assignment(g, report.assignment) is None
            # same total in another crew order may differ in the last bit
            if report.wlp_sum < optimum * (1 - 1e-12):
                violations.append((case, strategy.value, report.wlp_sum, optimum))
    assert violations == []
