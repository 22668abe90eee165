"""Readers and writers for graph, list-assignment, size-function and role files."""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path

from chooselab.models.assignments import ListAssignment, SizeFunction
from chooselab.models.graph import Graph, GraphError, VertexId
from chooselab.services.text_formats import fail, iter_records, read_int


def parse_graph(text: str) -> Graph:
    """Parse ``p graph <n> <m>`` / ``v <id> [role]`` / ``e <id> <id>`` text."""
    header: tuple[int, int] | None = None
    vertices: list[VertexId] = []
    labels: dict[VertexId, str] = {}
    edges: list[tuple[VertexId, VertexId]] = []
    seen_edges: set[tuple[VertexId, VertexId]] = set()
    for record in iter_records(text):
        if record.tag == "p":
            if header is not None:
                raise fail("Duplicate header.", record.line)
            if len(record.fields) != 3 or record.fields[0] != "graph":
                raise fail("Header must be 'p graph <n> <m>'.", record.line)
            header = (
                read_int(record.fields[1], record.line, "vertex count"),
                read_int(record.fields[2], record.line, "edge count"),
            )
            continue
        if header is None:
            raise fail("Header 'p graph <n> <m>' must come first.", record.line)
        if record.tag == "v":
            if len(record.fields) not in (1, 2):
                raise fail("Vertex line must be 'v <id> [role]'.", record.line)
            vertex = read_int(record.fields[0], record.line, "vertex id")
            if vertex in labels or vertex in vertices:
                raise fail(f"Vertex {vertex} declared twice.", record.line)
            vertices.append(vertex)
            if len(record.fields) == 2:
                labels[vertex] = record.fields[1]
        elif record.tag == "e":
            if len(record.fields) != 2:
                raise fail("Edge line must be 'e <id> <id>'.", record.line)
            a = read_int(record.fields[0], record.line, "edge endpoint")
            b = read_int(record.fields[1], record.line, "edge endpoint")
            if a == b:
                raise fail(f"Self-loop at vertex {a}.", record.line)
            key = (min(a, b), max(a, b))
            if key in seen_edges:
                raise fail(f"Parallel edge {a}-{b}.", record.line)
            seen_edges.add(key)
            edges.append((a, b))
        else:
            raise fail(f"Unknown record type {record.tag!r}.", record.line)
    if header is None:
        raise fail("Missing header 'p graph <n> <m>'.")
    declared = set(vertices)
    for a, b in edges:
        if a not in declared or b not in declared:
            raise fail(f"Edge {a}-{b} uses an undeclared vertex.")
    if header != (len(vertices), len(edges)):
        raise fail(
            f"Header announces {header[0]} vertices / {header[1]} edges, "
            f"found {len(vertices)} / {len(edges)}."
        )
    try:
        return Graph.from_edges(vertices, edges, labels)
    except GraphError as exc:
        raise fail(str(exc)) from exc


def serialize_graph(graph: Graph) -> str:
    lines = [f"p graph {graph.order} {graph.size}"]
    for vertex in graph.sorted_vertices:
        label = graph.labels.get(vertex)
        lines.append(f"v {vertex} {label}" if label else f"v {vertex}")
    lines.extend(f"e {a} {b}" for a, b in sorted(graph.edges))
    return "\n".join(lines) + "\n"


def parse_lists(text: str) -> ListAssignment:
    lists: dict[VertexId, frozenset[int]] = {}
    for record in iter_records(text):
        if record.tag != "l":
            raise fail(f"Unknown record type {record.tag!r}; expected 'l'.", record.line)
        if len(record.fields) < 2:
            raise fail("List line must be 'l <vertexId> <c1> [c2 ...]'.", record.line)
        vertex = read_int(record.fields[0], record.line, "vertex id")
        if vertex in lists:
            raise fail(f"Vertex {vertex} listed twice.", record.line)
        lists[vertex] = frozenset(read_int(tok, record.line, "color") for tok in record.fields[1:])
    return ListAssignment(lists)


def serialize_lists(lists: ListAssignment) -> str:
    return "".join(
        f"l {v} {' '.join(str(c) for c in sorted(lists[v]))}\n" for v in sorted(lists)
    )


def parse_sizes(text: str) -> SizeFunction:
    sizes: dict[VertexId, int] = {}
    for record in iter_records(text):
        if record.tag != "f" or len(record.fields) != 2:
            raise fail("Size line must be 'f <vertexId> <size>'.", record.line)
        vertex = read_int(record.fields[0], record.line, "vertex id")
        size = read_int(record.fields[1], record.line, "size")
        if size < 1:
            raise fail(f"Size of vertex {vertex} must be >= 1.", record.line)
        if vertex in sizes:
            raise fail(f"Vertex {vertex} sized twice.", record.line)
        sizes[vertex] = size
    return SizeFunction(sizes)


def serialize_sizes(sizes: SizeFunction) -> str:
    return "".join(f"f {v} {sizes[v]}\n" for v in sorted(sizes))


def parse_roles(text: str) -> dict[str, tuple[VertexId, ...]]:
    roles: dict[str, tuple[VertexId, ...]] = {}
    for record in iter_records(text):
        if record.tag != "r" or not record.fields:
            raise fail("Role line must be 'r <part> <vertexId..>'.", record.line)
        part = record.fields[0]
        roles[part] = tuple(read_int(tok, record.line, "vertex id") for tok in record.fields[1:])
    return roles


def serialize_roles(roles: Mapping[str, tuple[VertexId, ...]]) -> str:
    return "".join(f"r {part} {' '.join(str(v) for v in ids)}\n" for part, ids in roles.items())


def read_graph(path: Path) -> Graph:
    return parse_graph(path.read_text(encoding="utf-8"))


def read_lists(path: Path) -> ListAssignment:
    return parse_lists(path.read_text(encoding="utf-8"))


def read_sizes(path: Path) -> SizeFunction:
    return parse_sizes(path.read_text(encoding="utf-8"))


def write_text(destination: Path, text: str) -> Path:
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(text, encoding="utf-8")
    return destination


__all__ = [
    "parse_graph",
    "parse_lists",
    "parse_roles",
    "parse_sizes",
    "read_graph",
    "read_lists",
    "read_sizes",
    "serialize_graph",
    "serialize_lists",
    "serialize_roles",
    "serialize_sizes",
    "write_text",
]
