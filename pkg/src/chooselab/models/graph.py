"""Simple undirected graph with stable vertex ids and role labels."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import networkx as nx

VertexId = int
Edge = tuple[VertexId, VertexId]


class GraphError(ValueError):
    """Raised when a graph violates the simple-graph invariants."""


def normalize_edge(a: VertexId, b: VertexId) -> Edge:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Finite simple graph.

    ``labels`` maps a vertex to its role tag (``"u"``, ``"x2@copy3"``). Vertices
    without a role are simply absent from the mapping. Labels are not part of
    the hash so graphs stay usable as dictionary keys.
    """

    vertices: frozenset[VertexId]
    edges: frozenset[Edge]
    labels: Mapping[VertexId, str] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if a == b:
                raise GraphError(f"Self-loop at vertex {a}.")
            if a > b:
                raise GraphError(f"Edge ({a}, {b}) is not normalized.")
            if a not in self.vertices or b not in self.vertices:
                raise GraphError(f"Edge ({a}, {b}) uses an undeclared vertex.")
        seen: dict[str, VertexId] = {}
        for vertex, label in self.labels.items():
            if vertex not in self.vertices:
                raise GraphError(f"Label {label!r} attached to undeclared vertex {vertex}.")
            if not label or any(ch.isspace() for ch in label):
                raise GraphError(f"Label {label!r} of vertex {vertex} must be a non-empty token.")
            if label in seen:
                raise GraphError(f"Label {label!r} used by vertices {seen[label]} and {vertex}.")
            seen[label] = vertex

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[VertexId],
        edges: Iterable[tuple[VertexId, VertexId]],
        labels: Optional[Mapping[VertexId, str]] = None,
    ) -> "Graph":
        """Build a graph, normalizing edge orientation and rejecting parallel edges."""
        normalized: set[Edge] = set()
        for a, b in edges:
            edge = normalize_edge(a, b)
            if edge in normalized:
                raise GraphError(f"Parallel edge ({a}, {b}).")
            normalized.add(edge)
        return cls(frozenset(vertices), frozenset(normalized), dict(labels or {}))

    @classmethod
    def empty(cls) -> "Graph":
        return cls(frozenset(), frozenset(), {})

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_vertices(self) -> tuple[VertexId, ...]:
        return tuple(sorted(self.vertices))

    @cached_property
    def adjacency(self) -> dict[VertexId, frozenset[VertexId]]:
        neighbors: dict[VertexId, set[VertexId]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            neighbors[a].add(b)
            neighbors[b].add(a)
        return {v: frozenset(ns) for v, ns in neighbors.items()}

    def neighbors(self, vertex: VertexId) -> frozenset[VertexId]:
        return self.adjacency[vertex]

    def degree(self, vertex: VertexId) -> int:
        return len(self.adjacency[vertex])

    def has_edge(self, a: VertexId, b: VertexId) -> bool:
        return normalize_edge(a, b) in self.edges

    def label(self, vertex: VertexId) -> str:
        return self.labels.get(vertex, "")

    def vertex(self, label: str) -> VertexId:
        """Return the vertex carrying ``label``."""
        for vertex, tag in self.labels.items():
            if tag == label:
                return vertex
        raise KeyError(label)

    def find(self, label: str) -> Optional[VertexId]:
        for vertex, tag in self.labels.items():
            if tag == label:
                return vertex
        return None

    def with_labels(self, updates: Mapping[VertexId, str]) -> "Graph":
        labels = dict(self.labels)
        labels.update(updates)
        return Graph(self.vertices, self.edges, labels)

    def with_edges(self, extra: Iterable[tuple[VertexId, VertexId]]) -> "Graph":
        edges = set(self.edges)
        for a, b in extra:
            edges.add(normalize_edge(a, b))
        return Graph(self.vertices, frozenset(edges), dict(self.labels))

    def subgraph(self, keep: Iterable[VertexId]) -> "Graph":
        kept = frozenset(keep) & self.vertices
        edges = frozenset(e for e in self.edges if e[0] in kept and e[1] in kept)
        labels = {v: tag for v, tag in self.labels.items() if v in kept}
        return Graph(kept, edges, labels)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.sorted_vertices)
        graph.add_edges_from(sorted(self.edges))
        return graph


__all__ = ["Edge", "Graph", "GraphError", "VertexId", "normalize_edge"]
