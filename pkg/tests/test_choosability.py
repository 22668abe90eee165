"""f-choosability decider, witnesses and the derived predicates."""

from __future__ import annotations

from itertools import combinations
import random

import pytest

from chooselab.models.assignments import SizeFunction
from chooselab.models.graph import Graph
from chooselab.models.verdicts import SearchStats
from chooselab.services.choosability import (
    BudgetExceeded,
    SizeFunctionError,
    bipartite_planar_choice_number,
    choice_number,
    decide_f_choosable,
    decide_f_choosable_naive,
    is_choice_critical,
    is_k_choosable,
    is_restrictly_choosable,
    iter_canonical_assignments,
)
from chooselab.services.closed_forms import cycle_graph
from chooselab.services.gadgets import GadgetKind, build_gadget
from chooselab.services.list_coloring import find_list_coloring


def _complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(range(a + b), [(x, y) for x in range(a) for y in range(a, a + b)])


def _complete(n: int) -> Graph:
    return Graph.from_edges(range(n), [(x, y) for x in range(n) for y in range(x + 1, n)])


def _sizes(graph: Graph, k: int) -> SizeFunction:
    return SizeFunction.constant(graph.vertices, k)


def _assert_witness(graph: Graph, sizes: SizeFunction, witness) -> None:
    assert witness is not None
    assert all(len(witness[v]) == sizes[v] for v in graph.vertices)
    assert find_list_coloring(graph, witness) is None


@pytest.mark.parametrize(
    ("graph", "k", "expected"),
    [
        (cycle_graph(4), 2, True),
        (cycle_graph(5), 2, False),
        (cycle_graph(5), 3, True),
        (_complete_bipartite(2, 3), 2, True),
        (_complete_bipartite(3, 3), 2, False),
        (_complete_bipartite(3, 3), 3, True),
        (_complete(4), 3, False),
        (_complete(4), 4, True),
    ],
)
def test_decider_on_small_graphs(graph: Graph, k: int, expected: bool):
    sizes = _sizes(graph, k)

    verdict = decide_f_choosable(graph, sizes)

    assert verdict.answer is expected
    if not expected:
        _assert_witness(graph, sizes, verdict.witness)


def test_decider_agrees_with_naive_enumeration():
    for graph, k, universe in (
        (cycle_graph(4), 2, 4),
        (cycle_graph(5), 2, 3),
        (_complete_bipartite(2, 3), 2, 4),
        (_complete_bipartite(3, 3), 2, 3),
    ):
        sizes = _sizes(graph, k)
        assert decide_f_choosable(graph, sizes).answer is decide_f_choosable_naive(graph, sizes, universe)


def test_non_uniform_sizes():
    path = Graph.from_edges(range(3), [(0, 1), (1, 2)])
    triangle = _complete(3)

    assert decide_f_choosable(path, SizeFunction({0: 1, 1: 2, 2: 1})).answer is False
    assert decide_f_choosable(path, SizeFunction({0: 1, 1: 3, 2: 1})).answer is True
    assert decide_f_choosable(triangle, SizeFunction({0: 1, 1: 2, 2: 3})).answer is True


def test_w3_is_three_choosable_but_not_with_a_two_list_on_a_pole():
    graph = build_gadget(GadgetKind.W3)
    sizes = _sizes(graph, 3).with_size(graph.vertex("bottom"), 2)

    verdict = decide_f_choosable(graph, sizes)

    assert not verdict
    _assert_witness(graph, sizes, verdict.witness)


def test_choice_numbers():
    assert choice_number(Graph.empty()) == 0
    assert choice_number(Graph.from_edges([0, 1], [])) == 1
    assert choice_number(cycle_graph(6)) == 2
    assert choice_number(_complete_bipartite(2, 4)) == 3
    assert is_k_choosable(_complete(3), 3)


def test_bipartite_planar_choice_number_uses_recognizer():
    assert bipartite_planar_choice_number(Graph.from_edges([0, 1, 2], [])) == 1
    assert bipartite_planar_choice_number(_complete_bipartite(2, 3)) == 2
    assert bipartite_planar_choice_number(_complete_bipartite(2, 4)) == 3
    with pytest.raises(ValueError):
        bipartite_planar_choice_number(cycle_graph(5))


def test_size_function_must_match_graph():
    graph = cycle_graph(4)

    with pytest.raises(SizeFunctionError):
        decide_f_choosable(graph, {0: 2, 1: 2})
    with pytest.raises(SizeFunctionError):
        decide_f_choosable(graph, {0: 0, 1: 2, 2: 2, 3: 2})


def test_budget_exhaustion_reports_stats():
    graph = _complete_bipartite(3, 3)
    stats = SearchStats()

    with pytest.raises(BudgetExceeded) as info:
        decide_f_choosable(graph, _sizes(graph, 2), budget=1, stats=stats)

    assert info.value.stats is stats
    assert stats.nodes == 2
    assert stats.assignments == 1


def test_canonical_assignments_name_colors_in_first_use_order():
    found = list(iter_canonical_assignments([0, 1], {0: 1, 1: 1}, 2))

    assert [(set(a[0]), set(a[1])) for a in found] == [({1}, {1}), ({1}, {2})]
    assert len(list(iter_canonical_assignments([0, 1, 2], {0: 2, 1: 2, 2: 2}, 3))) > 0


def test_w3_is_choice_critical_and_fails_only_at_its_poles():
    graph = build_gadget(GadgetKind.W3)
    poles = sorted([graph.vertex("top"), graph.vertex("bottom")])

    report = is_restrictly_choosable(graph, 3)

    assert is_choice_critical(graph, 3)
    assert not report
    assert report.failing_vertices() == poles
    assert all(report.per_vertex[v] for v in graph.vertices if v not in poles)
    for vertex in poles:
        sizes = _sizes(graph, 3).with_size(vertex, 2)
        _assert_witness(graph, sizes, report.witnesses[vertex])


def test_restrictly_choosable_small_cases():
    single = Graph.from_edges([0], [])

    assert is_restrictly_choosable(single, 2)
    assert not is_restrictly_choosable(cycle_graph(4), 2, stop_at_first=True)
    assert not is_choice_critical(cycle_graph(5), 3)
    assert not is_choice_critical(_complete(4), 3)
    with pytest.raises(SizeFunctionError):
        is_restrictly_choosable(single, 1)


def test_larger_lists_keep_a_graph_choosable():
    rng = random.Random(20240917)
    for _ in range(40):
        order = rng.randint(3, 6)
        edges = [pair for pair in combinations(range(order), 2) if rng.random() < 0.5]
        graph = Graph.from_edges(range(order), edges)
        sizes = SizeFunction({v: rng.randint(1, 3) for v in range(order)})
        vertex = rng.randrange(order)
        larger = sizes.with_size(vertex, sizes[vertex] + 1)

        if decide_f_choosable(graph, sizes):
            assert decide_f_choosable(graph, larger)
