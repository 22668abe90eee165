"""Closed-form colorability facts for odd cycles and prisms over odd cycles."""

from __future__ import annotations

from collections.abc import Sequence
from itertools import product
import logging
from typing import Optional

from chooselab.models.graph import Graph
from chooselab.services.graph_ops import GraphBuilder
from chooselab.services.list_coloring import find_list_coloring

_logger = logging.getLogger(__name__)


class BadArity(ValueError):
    """Raised when a cycle or list has the wrong length for a closed-form check."""


def cycle_graph(k: int) -> Graph:
    builder = GraphBuilder()
    vertices = [builder.add_vertex(f"x{i + 1}") for i in range(k)]
    builder.add_cycle(*vertices)
    return builder.build()


def prism_graph(k: int) -> Graph:
    """Prism over C_k: outer cycle x1..xk, inner cycle y1..yk, spokes x_i y_i."""
    builder = GraphBuilder()
    outer = [builder.add_vertex(f"x{i + 1}") for i in range(k)]
    inner = [builder.add_vertex(f"y{i + 1}") for i in range(k)]
    builder.add_cycle(*outer)
    builder.add_cycle(*inner)
    for x, y in zip(outer, inner):
        builder.add_edge(x, y)
    return builder.build()


def odd_cycle_2_lists_colorable(
    cycle_lists: Sequence[frozenset[int] | set[int]],
) -> tuple[bool, Optional[list[int]]]:
    """An odd cycle with 2-lists is colorable iff the lists are not all equal.

    Returns the verdict and, when colorable, a coloring built by starting at a
    vertex whose list differs from its predecessor's and going round greedily.
    """
    k = len(cycle_lists)
    if k < 3 or k % 2 == 0:
        raise BadArity(f"Expected an odd cycle of length >= 3, got {k}.")
    lists = [frozenset(s) for s in cycle_lists]
    if any(len(s) != 2 for s in lists):
        raise BadArity("Every list must contain exactly two colors.")
    if all(s == lists[0] for s in lists):
        return False, None
    start = next(i for i in range(k) if lists[i] != lists[i - 1])
    rotation = [(start + step) % k for step in range(k)]
    colors = [0] * k
    first = rotation[0]
    colors[first] = min(lists[first] - lists[first - 1])
    previous = colors[first]
    for index in rotation[1:]:
        colors[index] = min(lists[index] - {previous})
        previous = colors[index]
    return True, colors


def prism_uncompletable_colorings(k: int, outer_lists: Sequence[frozenset[int] | set[int]]) -> set[tuple[int, ...]]:
    """Proper colorings of C1 = x1..xk that admit no completion on C2 = y1..yk.

    ``outer_lists[i]`` is S(y_{i+1}), a 3-set. Only c(x_i) in S(y_i) can block
    y_i; any other color leaves y_i three options and the odd cycle C2 then
    always colors, so candidates range over the lists themselves.
    """
    if k < 3 or k % 2 == 0:
        raise BadArity(f"Prism needs an odd cycle length >= 3, got {k}.")
    if len(outer_lists) != k or any(len(s) != 3 for s in outer_lists):
        raise BadArity("Expected k lists of exactly three colors on C2.")
    lists = [frozenset(s) for s in outer_lists]
    cycle = cycle_graph(k)
    order = cycle.sorted_vertices
    stuck: set[tuple[int, ...]] = set()
    for candidate in product(*(sorted(s) for s in lists)):
        if any(candidate[i] == candidate[(i + 1) % k] for i in range(k)):
            continue
        reduced = {order[i]: lists[i] - {candidate[i]} for i in range(k)}
        if find_list_coloring(cycle, reduced) is None:
            stuck.add(candidate)
    if len(stuck) > 1:
        _logger.warning("prism over C%d has %d uncompletable colorings", k, len(stuck))
    return stuck


__all__ = [
    "BadArity",
    "cycle_graph",
    "odd_cycle_2_lists_colorable",
    "prism_graph",
    "prism_uncompletable_colorings",
]
