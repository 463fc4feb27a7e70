# See LICENSE for details

import itertools

import pytest

from core.graph import (
    Assignment,
    Graph,
    Partition,
    canonical_key,
    partition_of,
    validate_assignment,
    validate_graph,
    validate_partition,
)


def test_e1_is_valid(e1):
    assert validate_graph(e1) is None
    assert e1.targets == (1, 2)
    assert e1.total_importance == 8


def test_depot_importance_nonzero():
    g = Graph.build([7, 3, 5], [[0, 1, 4], [1, 0, 2], [4, 3, 0]])
    assert validate_graph(g) == 'depot importance nonzero'


def test_nonzero_diagonal():
    g = Graph.build([0, 3, 5], [[0, 1, 4], [1, 2, 2], [4, 3, 0]])
    assert validate_graph(g) == 'nonzero diagonal'


@pytest.mark.parametrize('importance, edges', [
    ([0, -1, 5], [[0, 1, 4], [1, 0, 2], [4, 3, 0]]),
    ([0, 3, 5], [[0, -1, 4], [1, 0, 2], [4, 3, 0]]),
    ([0, 3, 5], [[0, float('inf'), 4], [1, 0, 2], [4, 3, 0]]),
    ([0, 3], [[0, 1, 4], [1, 0, 2], [4, 3, 0]]),
])
def test_invalid_values_are_reported(importance, edges):
    assert validate_graph(Graph.build(importance, edges)) is not None


@pytest.mark.parametrize('subsets, expected', [
    ([{0, 1}, {0, 2}], None),
    ([{0, 1}, {0, 1, 2}], 'node 1 in two subsets'),
    ([{0, 1}, {2}], 'subset missing depot'),
    ([{0, 1}, {0}], 'node 2 not covered'),
    ([{0}, {0, 1, 2}], None),
])
def test_validate_partition(e1, subsets, expected):
    assert validate_partition(e1, Partition.of(subsets)) == expected


@pytest.mark.parametrize('paths, expected', [
    ([[0, 1], [0, 2]], None),
    ([[0, 1, 2], [0, 2]], 'node 2 appears twice'),
    ([[1, 2], [0]], 'path does not begin at depot'),
    ([[0, 1], [0]], 'node 2 not covered'),
    ([[0, 1, 0, 2]], 'node 0 appears twice'),
])
def test_validate_assignment(e1, paths, expected):
    assert validate_assignment(e1, Assignment.of(paths)) == expected


@pytest.mark.parametrize('paths, subsets', [
    ([[0, 1], [0, 2]], [{0, 1}, {0, 2}]),
    ([[0], [0, 1, 2]], [{0}, {0, 1, 2}]),
    ([[0, 2, 1]], [{0, 1, 2}]),
])
def test_partition_of(paths, subsets):
    assert partition_of(Assignment.of(paths)) == Partition.of(subsets)


def test_partition_of_valid_assignment_is_valid(e1):
    for paths in ([[0, 1], [0, 2]], [[0, 2, 1], [0]], [[0], [0], [0, 1, 2]]):
        assert validate_partition(e1, partition_of(Assignment.of(paths))) is None


def test_canonical_key_examples():
    key = canonical_key
    assert key(Partition.of([{0, 1}, {0, 2}])) == key(Partition.of([{0, 2}, {0, 1}]))
    assert key(Partition.of([{0, 1}, {0, 2}])) != key(Partition.of([{0, 1, 2}, {0}]))
    assert key(Partition.of([[0, 2, 1], [0]])) == key(Partition.of([[0, 1, 2], [0]]))


def test_canonical_key_keeps_idle_crews_as_multiset():
    assert canonical_key(Partition.of([{0}, {0}, {0, 1}])) != canonical_key(Partition.of([{0}, {0, 1}]))


def test_canonical_key_permutation_invariant_exhaustive():
    # every partition of 4 targets onto up to 3 labelled crews, every subset order
    targets = [1, 2, 3, 4]
    for m in (1, 2, 3):
        for labels in itertools.product(range(m), repeat=len(targets)):
            subsets = [[0] + [v for v, lab in zip(targets, labels) if lab == k] for k in range(m)]
            reference = canonical_key(Partition.of(subsets))
            for order in itertools.permutations(range(m)):
                shuffled = [list(reversed(subsets[k])) for k in order]
                assert canonical_key(Partition.of(shuffled)) == reference


def test_as_lists_sorted():
    assert Partition.of([{2, 0, 1}, {0}]).as_lists() == [[0, 1, 2], [0]]
    assert Assignment.of([(0, 2, 1)]).as_lists() == [[0, 2, 1]]
