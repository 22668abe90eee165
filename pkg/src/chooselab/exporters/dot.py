"""Graphviz DOT export of graphs annotated with their color lists."""

from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path
from typing import Optional

from chooselab.models.assignments import ListAssignment
from chooselab.models.graph import Graph


def format_list(colors: Iterable[int]) -> str:
    """Compact list text: ``45`` for single digits, ``10,11`` otherwise."""
    ordered = sorted(colors)
    if all(0 <= c <= 9 for c in ordered):
        return "".join(str(c) for c in ordered)
    return ",".join(str(c) for c in ordered)


def export_dot(graph: Graph, lists: Optional[ListAssignment] = None, name: str = "G") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for vertex in graph.sorted_vertices:
        role = graph.label(vertex)
        if lists is not None and vertex in lists:
            attrs = f'label="{format_list(lists[vertex])}"'
            if role:
                attrs += f', xlabel="{role}"'
        else:
            attrs = f'label="{role or vertex}"'
        lines.append(f"  {vertex} [{attrs}];")
    lines.extend(f"  {a} -- {b};" for a, b in sorted(graph.edges))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(
    graph: Graph,
    destination: Path,
    lists: Optional[ListAssignment] = None,
) -> Path:
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(export_dot(graph, lists), encoding="utf-8")
    return destination


__all__ = ["export_dot", "format_list", "write_dot"]
