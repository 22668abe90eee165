"""Bipartiteness, triangles, planarity bound and the 2-choosability recognizer."""

from __future__ import annotations

import pytest

from chooselab.models.graph import Graph
from chooselab.services.closed_forms import cycle_graph, prism_graph
from chooselab.services.structure import (
    CoreKind,
    NotConnected,
    classify_2_choosable,
    classify_core,
    components,
    core,
    is_bipartite,
    is_triangle_free,
    odd_cycle_is_valid,
    planar_necessary,
)


def _theta(*lengths: int) -> Graph:
    """Two poles 0 and 1 joined by internally disjoint paths of the given lengths."""
    edges = []
    next_id = 2
    for length in lengths:
        previous = 0
        for _ in range(length - 1):
            edges.append((previous, next_id))
            previous = next_id
            next_id += 1
        edges.append((previous, 1))
    return Graph.from_edges(range(next_id), edges)


def _with_pendant_path(graph: Graph, anchor: int, length: int) -> Graph:
    start = max(graph.vertices) + 1
    chain = [anchor] + list(range(start, start + length))
    extra = list(zip(chain, chain[1:]))
    return Graph.from_edges(set(graph.vertices) | set(chain), list(graph.edges) + extra)


def test_bipartite_partition_and_odd_cycle_witness():
    even = is_bipartite(cycle_graph(6))
    odd = is_bipartite(cycle_graph(5))

    assert even
    left, right = even.partition
    assert len(left) == len(right) == 3
    assert not odd
    assert odd_cycle_is_valid(cycle_graph(5), odd.odd_cycle)


def test_triangle_detection():
    triangle = is_triangle_free(prism_graph(3))

    assert not triangle
    assert len(triangle.triangle) == 3
    assert is_triangle_free(cycle_graph(4))


def test_planar_necessary_edge_bound():
    k5 = Graph.from_edges(range(5), [(a, b) for a in range(5) for b in range(a + 1, 5)])
    k33 = Graph.from_edges(range(6), [(a, b) for a in range(3) for b in range(3, 6)])

    assert not planar_necessary(k5)
    assert not planar_necessary(k33)
    assert planar_necessary(prism_graph(5))


def test_core_strips_pendant_trees():
    graph = _with_pendant_path(cycle_graph(4), 0, 3)

    stripped = core(graph)

    assert stripped.vertices == cycle_graph(4).vertices
    assert classify_core(stripped).kind is CoreKind.EVEN_CYCLE


def test_core_requires_connected_graph():
    with pytest.raises(NotConnected):
        core(Graph.from_edges([0, 1], []))


@pytest.mark.parametrize(
    ("graph", "expected"),
    [
        (Graph.from_edges([0], []), True),
        (_with_pendant_path(Graph.from_edges([0], []), 0, 4), True),
        (cycle_graph(6), True),
        (_with_pendant_path(cycle_graph(8), 3, 2), True),
        (_theta(2, 2, 2), True),
        (_theta(2, 2, 4), True),
        (_theta(2, 2, 6), True),
        (cycle_graph(5), False),
        (_theta(2, 4, 4), False),
        (_theta(3, 3, 3), False),
        (Graph.from_edges(range(6), [(a, b) for a in range(3) for b in range(3, 6)]), False),
    ],
)
def test_two_choosability_recognizer(graph: Graph, expected: bool):
    assert bool(classify_2_choosable(graph)) is expected


def test_recognizer_checks_every_component():
    graph = Graph.from_edges(range(9), [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 8), (8, 4)])

    report = classify_2_choosable(graph)

    assert len(components(graph)) == 2
    assert not report
    assert [c.kind for c in report.components] == [CoreKind.EVEN_CYCLE, CoreKind.OTHER]
