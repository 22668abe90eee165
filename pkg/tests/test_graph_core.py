"""Graph model, construction algebra and the text/DOT formats."""

from __future__ import annotations

from pathlib import Path

import pytest

from chooselab.exporters.dot import export_dot, format_list, write_dot
from chooselab.models.assignments import ListAssignment, SizeFunction
from chooselab.models.graph import Graph, GraphError
from chooselab.services.gadgets import GadgetKind, build_gadget
from chooselab.services.graph_io import (
    parse_graph,
    parse_lists,
    parse_roles,
    parse_sizes,
    read_graph,
    serialize_graph,
    serialize_lists,
    serialize_roles,
    serialize_sizes,
)
from chooselab.services.graph_ops import (
    GraphBuilder,
    IdentificationCreatesLoop,
    copy_label,
    disjoint_union,
    identify_vertices,
)
from chooselab.services.text_formats import ParseError

SAMPLE_DATA = Path(__file__).resolve().parents[1] / "sample_data"


def _path(n: int) -> Graph:
    return Graph.from_edges(range(n), [(i, i + 1) for i in range(n - 1)], {0: "start"})


def test_graph_rejects_self_loops_and_parallel_edges():
    with pytest.raises(GraphError):
        Graph.from_edges([0, 1], [(1, 1)])
    with pytest.raises(GraphError):
        Graph.from_edges([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges([0], [(0, 2)])


def test_graph_rejects_duplicate_labels():
    with pytest.raises(GraphError):
        Graph.from_edges([0, 1], [], {0: "u", 1: "u"})


def test_graph_normalizes_edges_and_reports_degrees():
    graph = Graph.from_edges([0, 1, 2], [(2, 0), (1, 2)])

    assert graph.edges == frozenset({(0, 2), (1, 2)})
    assert graph.degree(2) == 2
    assert graph.neighbors(0) == frozenset({2})
    assert graph.has_edge(2, 1)


def test_disjoint_union_renumbers_and_tags_copies():
    union = disjoint_union([_path(3), _path(2)])

    assert union.order == 5
    assert union.size == 3
    assert union.vertex(copy_label("start", 1)) == 0
    assert union.vertex(copy_label("start", 2)) == 3
    assert union.has_edge(3, 4)


def test_identify_vertices_merges_classes_and_collapses_parallel_edges():
    square = Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)], {0: "a", 2: "c"})

    merged = identify_vertices(square, [[0, 2]], labels={0: "ac"})

    assert merged.order == 3
    assert merged.size == 2
    assert merged.vertex("ac") == 0
    assert merged.find("c") is None


def test_identify_vertices_rejects_adjacent_members():
    with pytest.raises(IdentificationCreatesLoop):
        identify_vertices(_path(3), [[0, 1]])


def test_builder_attach_glues_and_prefixes_labels():
    builder = GraphBuilder()
    hub = builder.add_vertex("hub")
    mapping = builder.attach(_path(3), prefix="p.", glue={0: hub})
    graph = builder.build()

    assert mapping[0] == hub
    assert graph.order == 3
    assert graph.label(hub) == "hub"
    assert graph.has_edge(hub, mapping[1])


def test_graph_text_round_trip_keeps_roles():
    graph = Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3)], {0: "u", 3: "v"})

    parsed = parse_graph(serialize_graph(graph))

    assert parsed == graph
    assert parsed.labels == {0: "u", 3: "v"}


@pytest.mark.parametrize("kind", list(GadgetKind))
def test_every_gadget_survives_a_text_round_trip(kind: GadgetKind):
    graph = build_gadget(kind)
    text = serialize_graph(graph)

    parsed = parse_graph(text)

    assert parsed == graph
    assert parsed.labels == graph.labels
    assert serialize_graph(parsed) == text


@pytest.mark.parametrize(
    "text",
    [
        "v 0\n",
        "p graph 2 1\nv 0\nv 1\ne 0 0\n",
        "p graph 2 2\nv 0\nv 1\ne 0 1\ne 1 0\n",
        "p graph 2 1\nv 0\nv 1\ne 0 5\n",
        "p graph 3 0\nv 0\nv 1\n",
        "p graph 1 0\nv zero\n",
        "p graph 1 0\nq 0\n",
    ],
)
def test_parse_graph_rejects_malformed_input(text: str):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError) as info:
        parse_graph("p graph 2 1\n# comment\nv 0\nv 1\ne 0 x\n")

    assert info.value.line == 5


def test_lists_sizes_and_roles_formats():
    lists = ListAssignment.of({0: [3, 1], 1: [2]})
    sizes = SizeFunction({0: 2, 1: 3})
    roles = {"C1": (4,), "prop:x1": (5, 6)}

    assert serialize_lists(lists) == "l 0 1 3\nl 1 2\n"
    assert parse_lists(serialize_lists(lists)) == lists
    assert parse_sizes(serialize_sizes(sizes)) == sizes
    assert parse_roles(serialize_roles(roles)) == roles
    with pytest.raises(ParseError):
        parse_sizes("f 0 0\n")
    with pytest.raises(ParseError):
        parse_lists("l 0\n")


def test_sample_graph_files_parse():
    w3 = read_graph(SAMPLE_DATA / "w3.graph")

    assert w3.order == 8
    assert w3.size == 15
    assert w3.vertex("bottom") == 1


def test_format_list_compacts_single_digits():
    assert format_list([5, 4]) == "45"
    assert format_list([11, 10, 3]) == "3,10,11"


def test_export_dot_labels_vertices_with_lists(tmp_path: Path):
    graph = Graph.from_edges([0, 1], [(0, 1)], {0: "u"})
    lists = ListAssignment.of({0: [1, 2], 1: [10, 12]})

    text = export_dot(graph, lists)
    written = write_dot(graph, tmp_path / "out" / "g.dot", lists)

    assert '0 [label="12", xlabel="u"];' in text
    assert '1 [label="10,12"];' in text
    assert "0 -- 1;" in text
    assert written.read_text(encoding="utf-8") == text
