"""Construction algebra: disjoint union, vertex identification, incremental builder."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
import logging
from typing import Optional

from chooselab.models.graph import Graph, GraphError, VertexId, normalize_edge

_logger = logging.getLogger(__name__)


class IdentificationCreatesLoop(GraphError):
    """Raised when a class handed to identify_vertices contains adjacent vertices."""


def copy_label(label: str, index: int) -> str:
    return f"{label}@copy{index}"


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    """Union of vertex-disjoint copies, renumbered consecutively from 0.

    Copy ``i`` (1-based) keeps its labels with ``@copy{i}`` appended.
    """
    vertices: set[VertexId] = set()
    edges: set[tuple[VertexId, VertexId]] = set()
    labels: dict[VertexId, str] = {}
    offset = 0
    for index, graph in enumerate(graphs, start=1):
        mapping = {v: offset + position for position, v in enumerate(graph.sorted_vertices)}
        vertices.update(mapping.values())
        edges.update(normalize_edge(mapping[a], mapping[b]) for a, b in graph.edges)
        for vertex, label in graph.labels.items():
            labels[mapping[vertex]] = copy_label(label, index)
        offset += graph.order
    return Graph(frozenset(vertices), frozenset(edges), labels)


def identify_vertices(
    graph: Graph,
    classes: Sequence[Iterable[VertexId]],
    labels: Optional[Mapping[int, str]] = None,
) -> Graph:
    """Collapse each class to its smallest vertex.

    ``labels`` optionally maps a class index to the label of the merged
    vertex; otherwise the representative keeps its own label and the other
    members' labels are dropped. Parallel edges collapse silently.
    """
    representative: dict[VertexId, VertexId] = {}
    merged_labels = dict(graph.labels)
    for index, members in enumerate(classes):
        group = sorted(set(members))
        if not group:
            continue
        for vertex in group:
            if vertex not in graph.vertices:
                msg = f"Vertex {vertex} in class {index} is not in the graph."
                _logger.error(msg)
                raise GraphError(msg)
            if vertex in representative:
                msg = f"Vertex {vertex} appears in more than one class."
                _logger.error(msg)
                raise GraphError(msg)
        for position, a in enumerate(group):
            for b in group[position + 1:]:
                if graph.has_edge(a, b):
                    msg = f"Identifying adjacent vertices {a} and {b} would create a loop."
                    _logger.error(msg)
                    raise IdentificationCreatesLoop(msg)
        rep = group[0]
        for vertex in group:
            representative[vertex] = rep
            if vertex != rep:
                merged_labels.pop(vertex, None)
        if labels and index in labels:
            merged_labels[rep] = labels[index]

    def target(vertex: VertexId) -> VertexId:
        return representative.get(vertex, vertex)

    vertices = frozenset(target(v) for v in graph.vertices)
    edges = frozenset(normalize_edge(target(a), target(b)) for a, b in graph.edges)
    return Graph(vertices, edges, merged_labels)


class GraphBuilder:
    """Mutable accumulator used by the gadget and reduction constructors."""

    def __init__(self) -> None:
        self._next_id = 0
        self._edges: set[tuple[VertexId, VertexId]] = set()
        self._labels: dict[VertexId, str] = {}
        self._vertices: list[VertexId] = []

    def add_vertex(self, label: Optional[str] = None) -> VertexId:
        vertex = self._next_id
        self._next_id += 1
        self._vertices.append(vertex)
        if label is not None:
            self._labels[vertex] = label
        return vertex

    def add_edge(self, a: VertexId, b: VertexId) -> None:
        if a == b:
            raise GraphError(f"Self-loop at vertex {a}.")
        self._edges.add(normalize_edge(a, b))

    def add_path(self, *vertices: VertexId) -> None:
        for a, b in zip(vertices, vertices[1:]):
            self.add_edge(a, b)

    def add_cycle(self, *vertices: VertexId) -> None:
        self.add_path(*vertices)
        self.add_edge(vertices[-1], vertices[0])

    def attach(
        self,
        graph: Graph,
        *,
        prefix: str,
        glue: Optional[Mapping[VertexId, VertexId]] = None,
    ) -> dict[VertexId, VertexId]:
        """Copy ``graph`` in, merging the vertices named in ``glue`` onto existing ones.

        Returns the map from ``graph`` vertices to builder vertices. Copied
        labels become ``prefix + label``.
        """
        glue = glue or {}
        mapping: dict[VertexId, VertexId] = {}
        for vertex in graph.sorted_vertices:
            if vertex in glue:
                mapping[vertex] = glue[vertex]
                continue
            label = graph.labels.get(vertex)
            mapping[vertex] = self.add_vertex(None if label is None else prefix + label)
        for a, b in graph.edges:
            self.add_edge(mapping[a], mapping[b])
        return mapping

    def build(self) -> Graph:
        return Graph(frozenset(self._vertices), frozenset(self._edges), dict(self._labels))


__all__ = [
    "GraphBuilder",
    "IdentificationCreatesLoop",
    "copy_label",
    "disjoint_union",
    "identify_vertices",
]
