"""Odd-cycle and prism closed forms against the exact solver."""

from __future__ import annotations

from itertools import product

import pytest

from chooselab.services.closed_forms import (
    BadArity,
    cycle_graph,
    odd_cycle_2_lists_colorable,
    prism_graph,
    prism_uncompletable_colorings,
)
from chooselab.services.list_coloring import find_list_coloring

PAIRS = [frozenset(p) for p in ({1, 2}, {1, 3}, {2, 3})]


def test_prism_shape():
    prism = prism_graph(5)

    assert prism.order == 10
    assert prism.size == 15
    assert prism.has_edge(prism.vertex("x1"), prism.vertex("y1"))


def test_equal_lists_on_odd_cycle_are_uncolorable():
    colorable, coloring = odd_cycle_2_lists_colorable([{1, 2}] * 5)

    assert not colorable
    assert coloring is None


def test_closed_form_matches_solver_on_triangles():
    cycle = cycle_graph(3)
    for lists in product(PAIRS, repeat=3):
        colorable, coloring = odd_cycle_2_lists_colorable(lists)
        assignment = dict(zip(cycle.sorted_vertices, lists))
        assert colorable is (find_list_coloring(cycle, assignment) is not None)
        if colorable:
            assert all(coloring[i] in lists[i] for i in range(3))
            assert all(coloring[i] != coloring[(i + 1) % 3] for i in range(3))


def test_closed_form_rejects_bad_arity():
    with pytest.raises(BadArity):
        odd_cycle_2_lists_colorable([{1, 2}] * 4)
    with pytest.raises(BadArity):
        odd_cycle_2_lists_colorable([{1, 2}, {1, 2}, {1, 2, 3}])


def test_prism_has_at_most_one_uncompletable_coloring():
    stuck = prism_uncompletable_colorings(3, [{1, 2, 3}] * 3)

    assert len(stuck) <= 1
    assert len(prism_uncompletable_colorings(5, [{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}, {1, 2, 3}])) <= 1
    with pytest.raises(BadArity):
        prism_uncompletable_colorings(3, [{1, 2}] * 3)
