"""Structural validators and the 2-choosability recognizer."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import Optional

import networkx as nx

from chooselab.models.graph import Graph, VertexId

_logger = logging.getLogger(__name__)


class NotConnected(ValueError):
    """Raised when an operation defined on connected graphs receives a disconnected one."""


@dataclass(frozen=True)
class BipartiteResult:
    bipartite: bool
    partition: Optional[tuple[frozenset[VertexId], frozenset[VertexId]]] = None
    odd_cycle: Optional[tuple[VertexId, ...]] = None

    def __bool__(self) -> bool:
        return self.bipartite


@dataclass(frozen=True)
class TriangleResult:
    triangle_free: bool
    triangle: Optional[tuple[VertexId, VertexId, VertexId]] = None

    def __bool__(self) -> bool:
        return self.triangle_free


class CoreKind(str, Enum):
    SINGLE_VERTEX = "SingleVertex"
    EVEN_CYCLE = "EvenCycle"
    THETA_2_2_2M = "Theta2_2_2m"
    OTHER = "Other"


@dataclass(frozen=True)
class CoreClass:
    """Shape of a component core; ``parameters`` holds the cycle length or theta path lengths."""

    kind: CoreKind
    parameters: tuple[int, ...] = field(default_factory=tuple)

    @property
    def two_choosable(self) -> bool:
        return self.kind is not CoreKind.OTHER


@dataclass(frozen=True)
class TwoChoosabilityReport:
    two_choosable: bool
    components: tuple[CoreClass, ...]

    def __bool__(self) -> bool:
        return self.two_choosable


def is_bipartite(graph: Graph) -> BipartiteResult:
    """Exact bipartiteness test with a partition or an odd-cycle witness."""
    nx_graph = graph.to_networkx()
    side: dict[VertexId, int] = {}
    parent: dict[VertexId, Optional[VertexId]] = {}
    depth: dict[VertexId, int] = {}
    for root in graph.sorted_vertices:
        if root in side:
            continue
        side[root] = 0
        parent[root] = None
        depth[root] = 0
        for a, b in nx.bfs_edges(nx_graph, root):
            parent[b] = a
            depth[b] = depth[a] + 1
            side[b] = depth[b] % 2
    for a, b in sorted(graph.edges):
        if side[a] == side[b]:
            cycle = _tree_cycle(a, b, parent, depth)
            return BipartiteResult(False, odd_cycle=cycle)
    left = frozenset(v for v, s in side.items() if s == 0)
    right = frozenset(v for v, s in side.items() if s == 1)
    return BipartiteResult(True, partition=(left, right))


def _tree_cycle(
    a: VertexId,
    b: VertexId,
    parent: dict[VertexId, Optional[VertexId]],
    depth: dict[VertexId, int],
) -> tuple[VertexId, ...]:
    left: list[VertexId] = [a]
    right: list[VertexId] = [b]
    x, y = a, b
    while depth[x] > depth[y]:
        x = parent[x]  # type: ignore[assignment]
        left.append(x)
    while depth[y] > depth[x]:
        y = parent[y]  # type: ignore[assignment]
        right.append(y)
    while x != y:
        x = parent[x]  # type: ignore[assignment]
        y = parent[y]  # type: ignore[assignment]
        left.append(x)
        right.append(y)
    # left ends at the common ancestor; right repeats it
    return tuple(left + list(reversed(right[:-1])))


def is_triangle_free(graph: Graph) -> TriangleResult:
    adjacency = graph.adjacency
    for a, b in sorted(graph.edges):
        common = adjacency[a] & adjacency[b]
        if common:
            c = min(common)
            return TriangleResult(False, tuple(sorted((a, b, c))))  # type: ignore[arg-type]
    return TriangleResult(True)


def planar_necessary(graph: Graph) -> bool:
    """Euler edge bound: m <= 3n - 6, or m <= 2n - 4 for triangle-free graphs."""
    n, m = graph.order, graph.size
    if n < 3:
        return True
    if is_triangle_free(graph):
        return m <= 2 * n - 4
    return m <= 3 * n - 6


def components(graph: Graph) -> list[frozenset[VertexId]]:
    found = [frozenset(c) for c in nx.connected_components(graph.to_networkx())]
    return sorted(found, key=min)


def core(graph: Graph) -> Graph:
    """Repeatedly delete degree-1 vertices of a connected graph."""
    if graph.order == 0 or nx.number_connected_components(graph.to_networkx()) != 1:
        msg = "core() requires a nonempty connected graph."
        _logger.error(msg)
        raise NotConnected(msg)
    return graph.subgraph(_strip_pendants(graph))


def _strip_pendants(graph: Graph) -> set[VertexId]:
    remaining = set(graph.vertices)
    degree = {v: graph.degree(v) for v in remaining}
    queue = [v for v in graph.sorted_vertices if degree[v] == 1]
    while queue and len(remaining) > 1:
        vertex = queue.pop()
        if vertex not in remaining or degree[vertex] != 1:
            continue
        remaining.discard(vertex)
        for neighbor in graph.neighbors(vertex):
            if neighbor in remaining:
                degree[neighbor] -= 1
                if degree[neighbor] == 1:
                    queue.append(neighbor)
    return remaining


def classify_core(core_graph: Graph) -> CoreClass:
    n = core_graph.order
    if n == 1:
        return CoreClass(CoreKind.SINGLE_VERTEX)
    degrees = [core_graph.degree(v) for v in core_graph.sorted_vertices]
    if all(d == 2 for d in degrees):
        if n % 2 == 0:
            return CoreClass(CoreKind.EVEN_CYCLE, (n,))
        return CoreClass(CoreKind.OTHER, (n,))
    branch = [v for v in core_graph.sorted_vertices if core_graph.degree(v) != 2]
    if len(branch) != 2 or any(core_graph.degree(v) != 3 for v in branch):
        return CoreClass(CoreKind.OTHER)
    lengths = _theta_paths(core_graph, branch[0], branch[1])
    if lengths is None:
        return CoreClass(CoreKind.OTHER)
    lengths = tuple(sorted(lengths))
    if all(length % 2 == 0 for length in lengths) and lengths[0] == 2 and lengths[1] == 2:
        return CoreClass(CoreKind.THETA_2_2_2M, lengths)
    return CoreClass(CoreKind.OTHER, lengths)


def _theta_paths(graph: Graph, start: VertexId, end: VertexId) -> Optional[list[int]]:
    lengths: list[int] = []
    for first in sorted(graph.neighbors(start)):
        previous, current, length = start, first, 1
        while current != end:
            if current == start:
                return None
            onward = [w for w in graph.neighbors(current) if w != previous]
            if len(onward) != 1:
                return None
            previous, current = current, onward[0]
            length += 1
        lengths.append(length)
    return lengths if len(lengths) == 3 else None


def classify_2_choosable(graph: Graph) -> TwoChoosabilityReport:
    """2-choosable iff every component core is K1, an even cycle or theta(2,2,2m)."""
    classes: list[CoreClass] = []
    for component in components(graph):
        classes.append(classify_core(core(graph.subgraph(component))))
    verdict = all(c.two_choosable for c in classes)
    _logger.debug("2-choosability classes: %s", [c.kind.value for c in classes])
    return TwoChoosabilityReport(verdict, tuple(classes))


def odd_cycle_is_valid(graph: Graph, cycle: Sequence[VertexId]) -> bool:
    if len(cycle) % 2 == 0 or len(set(cycle)) != len(cycle):
        return False
    return all(graph.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))


__all__ = [
    "BipartiteResult",
    "CoreClass",
    "CoreKind",
    "NotConnected",
    "TriangleResult",
    "TwoChoosabilityReport",
    "classify_2_choosable",
    "classify_core",
    "components",
    "core",
    "is_bipartite",
    "is_triangle_free",
    "odd_cycle_is_valid",
    "planar_necessary",
]
