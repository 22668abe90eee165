"""Gadget graphs, their published list assignments and the composite counterexamples."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, permutations, product
import logging
from typing import Optional

from chooselab.models.assignments import ColorPair, ListAssignment, SizeFunction
from chooselab.models.graph import Graph, VertexId
from chooselab.services.graph_ops import GraphBuilder, copy_label, disjoint_union, identify_vertices
from chooselab.services.list_coloring import feasible_colors

_logger = logging.getLogger(__name__)


class BadParams(ValueError):
    """Raised when gadget parameters are missing or inconsistent."""


class PatternNotFound(RuntimeError):
    """Raised when no forcing list pattern exists within the enumeration limit."""


class GadgetKind(str, Enum):
    W1 = "W1"
    W2 = "W2"
    W3 = "W3"
    HALF_PROPAGATOR = "HalfPropagator"
    PROPAGATOR = "Propagator"
    MULTIOUTPUT_PROPAGATOR = "MultioutputPropagator"
    EXISTS_GRAPH = "ExistsGraph"
    FORALL_GRAPH = "ForallGraph"
    H1 = "H1"
    CRIT4 = "Crit4"
    COUNTEREXAMPLE_PLANAR_4 = "CounterexamplePlanar4"
    COUNTEREXAMPLE_TRIANGLE_FREE_3 = "CounterexampleTriangleFree3"


# Boundary pairs of the 164-vertex construction, in order.
PAIR_SCHEDULE_K3: tuple[ColorPair, ...] = (
    (10, 13), (10, 14), (10, 15),
    (11, 15), (11, 13), (11, 14),
    (12, 14), (12, 15), (12, 13),
)
PINS_K3 = (frozenset({10, 11, 12}), frozenset({13, 14, 15}))
PINS_K4 = (frozenset({7, 8, 9, 10}), frozenset({7, 8, 9, 10}))
CRITICAL_PINS = {
    3: (frozenset({10, 11}), frozenset({12, 13, 14})),
    4: (frozenset({7, 8, 9}), frozenset({10, 11, 12, 13})),
}
HALF_ROLES = ("top", "mid", "low", "hinge", "tail", "out")
HALF_SIZES = {"top": 2, "mid": 2, "low": 3, "hinge": 3, "tail": 2, "out": 3}
# With the in node colored 1 these lists force the out node to 7.
HALF_PATTERN = {
    "in": (1,),
    "top": (1, 2),
    "mid": (1, 3),
    "low": (1, 4, 5),
    "hinge": (2, 3, 4),
    "tail": (5, 6),
    "out": (4, 6, 7),
}
HALF_FORCED_OUT = 7


def pair_schedule_k4() -> tuple[ColorPair, ...]:
    """The 12 ordered pairs of distinct colors from {7, 8, 9, 10}, lexicographic."""
    return tuple(permutations(sorted(PINS_K4[0]), 2))


def _labelled(builder: GraphBuilder, *labels: str) -> dict[str, VertexId]:
    return {label: builder.add_vertex(label) for label in labels}


def _build_w1() -> Graph:
    b = GraphBuilder()
    v = _labelled(b, "u", "v", "w", "x1", "x2", "x3", "y1", "y2", "y3")
    b.add_cycle(v["x1"], v["x2"], v["x3"])
    b.add_cycle(v["y1"], v["y2"], v["y3"])
    for name in ("w", "x1", "x2", "y1", "y2"):
        b.add_edge(v["u"], v[name])
    for name in ("w", "x2", "x3", "y2", "y3"):
        b.add_edge(v["v"], v[name])
    for name in ("x1", "x3", "y1", "y3"):
        b.add_edge(v["w"], v[name])
    return b.build()


def _build_w2() -> Graph:
    b = GraphBuilder()
    v = _labelled(
        b,
        "u", "v", "w",
        "x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4",
        "wl", "x1i", "x2i", "x3i", "x4i",
        "wr", "y1i", "y2i", "y3i", "y4i",
    )
    for side, hub in (("x", "wl"), ("y", "wr")):
        outer = [v["w"]] + [v[f"{side}{i}"] for i in range(1, 5)]
        inner = [v[hub]] + [v[f"{side}{i}i"] for i in range(1, 5)]
        b.add_cycle(*outer)
        b.add_cycle(*inner)
        for a, c in zip(outer, inner):
            b.add_edge(a, c)
    for name in ("x2", "w", "y2"):
        b.add_edge(v["u"], v[name])
    for name in ("x2", "x4", "y2", "y4"):
        b.add_edge(v["v"], v[name])
    return b.build()


def _build_w3() -> Graph:
    b = GraphBuilder()
    v = _labelled(b, "top", "bottom", "l1", "l2", "m1", "m2", "r1", "r2")
    for pair in (("l1", "l2"), ("m1", "m2"), ("r1", "r2")):
        b.add_edge(v[pair[0]], v[pair[1]])
        for end in pair:
            b.add_edge(v["top"], v[end])
            b.add_edge(v["bottom"], v[end])
    return b.build()


def _add_half(builder: GraphBuilder, entry: VertexId, prefix: str) -> dict[str, VertexId]:
    """Append a half-propagator fed by ``entry``; returns role -> vertex (``in`` included)."""
    roles = {"in": entry}
    for role in HALF_ROLES:
        roles[role] = builder.add_vertex(prefix + role)
    for role in ("top", "mid", "low"):
        builder.add_edge(entry, roles[role])
        builder.add_edge(roles["hinge"], roles[role])
    builder.add_edge(roles["hinge"], roles["out"])
    builder.add_path(roles["low"], roles["tail"], roles["out"])
    return roles


def _build_half_propagator() -> Graph:
    b = GraphBuilder()
    entry = b.add_vertex("in")
    _add_half(b, entry, "")
    return b.build()


def _build_propagator() -> Graph:
    b = GraphBuilder()
    entry = b.add_vertex("in")
    first = _add_half(b, entry, "h1.")
    second = _add_half(b, first["out"], "h2.")
    return b.build().with_labels({first["out"]: "relay", second["out"]: "out"})


@dataclass(frozen=True)
class PropagatorStage:
    """One output arm: the propagators leading to a hub, the hub's output and the link onward."""

    halves: tuple[dict[str, VertexId], ...]
    hub: VertexId
    output: VertexId
    link: Optional[tuple[VertexId, VertexId]]


def add_multioutput_propagator(
    builder: GraphBuilder,
    entry: VertexId,
    outputs: int,
    hop_length: int,
    prefix: str,
) -> list[PropagatorStage]:
    """Chain ``outputs`` hubs off ``entry``; each hub carries one pendant output.

    Every hop between consecutive feeding points is ``hop_length`` propagators
    (two half-propagators each). Between hubs the chain passes through two
    extra size-2 link vertices so that hubs and the entry stay on the same
    side of the bipartition.
    """
    if outputs < 1 or hop_length < 1:
        raise BadParams("outputs and hop_length must be >= 1.")
    stages: list[PropagatorStage] = []
    feed = entry
    for stage in range(1, outputs + 1):
        halves: list[dict[str, VertexId]] = []
        current = feed
        for hop in range(1, hop_length + 1):
            for half in (1, 2):
                roles = _add_half(builder, current, f"{prefix}s{stage}.p{hop}.h{half}.")
                halves.append(roles)
                current = roles["out"]
        hub = current
        output = builder.add_vertex(f"{prefix}out{stage}")
        builder.add_edge(hub, output)
        link = None
        if stage < outputs:
            first = builder.add_vertex(f"{prefix}link{stage}a")
            second = builder.add_vertex(f"{prefix}link{stage}b")
            builder.add_path(hub, first, second)
            link = (first, second)
            feed = second
        stages.append(PropagatorStage(tuple(halves), hub, output, link))
    return stages


def _build_multioutput(outputs: int, hop_length: int) -> Graph:
    b = GraphBuilder()
    entry = b.add_vertex("in")
    add_multioutput_propagator(b, entry, outputs, hop_length, "")
    return b.build()


def _build_exists() -> Graph:
    b = GraphBuilder()
    v = _labelled(b, "out1", "mid", "out2")
    b.add_path(v["out1"], v["mid"], v["out2"])
    return b.build()


def _build_forall() -> Graph:
    b = GraphBuilder()
    v = _labelled(b, "out1", "a", "p", "q", "c", "out2")
    b.add_edge(v["out1"], v["a"])
    b.add_cycle(v["a"], v["p"], v["c"], v["q"])
    b.add_edge(v["c"], v["out2"])
    return b.build()


def _merge_pins(base: Graph, copies: int) -> Graph:
    union = disjoint_union([base] * copies)
    u_class = [union.vertex(copy_label("u", i)) for i in range(1, copies + 1)]
    v_class = [union.vertex(copy_label("v", i)) for i in range(1, copies + 1)]
    return identify_vertices(union, [u_class, v_class], labels={0: "u", 1: "v"})


def build_gadget(kind: GadgetKind | str, *, outputs: int = 3, hop_length: int = 1) -> Graph:
    kind = GadgetKind(kind)
    if kind is GadgetKind.W1:
        return _build_w1()
    if kind is GadgetKind.W2:
        return _build_w2()
    if kind is GadgetKind.W3:
        return _build_w3()
    if kind is GadgetKind.HALF_PROPAGATOR:
        return _build_half_propagator()
    if kind is GadgetKind.PROPAGATOR:
        return _build_propagator()
    if kind is GadgetKind.MULTIOUTPUT_PROPAGATOR:
        return _build_multioutput(outputs, hop_length)
    if kind is GadgetKind.EXISTS_GRAPH:
        return _build_exists()
    if kind is GadgetKind.FORALL_GRAPH:
        return _build_forall()
    if kind is GadgetKind.H1:
        return build_choice_critical(3)[0]
    if kind is GadgetKind.CRIT4:
        return build_choice_critical(4)[0]
    if kind is GadgetKind.COUNTEREXAMPLE_PLANAR_4:
        return build_counterexample(4)
    return build_counterexample(3)


def gadget_sizes(kind: GadgetKind | str, graph: Optional[Graph] = None, *, outputs: int = 3, hop_length: int = 1) -> SizeFunction:
    """List sizes printed on the figures (literal/in nodes get 2)."""
    kind = GadgetKind(kind)
    graph = graph or build_gadget(kind, outputs=outputs, hop_length=hop_length)
    constant = {GadgetKind.W1: 4, GadgetKind.CRIT4: 4, GadgetKind.COUNTEREXAMPLE_PLANAR_4: 4}
    if kind in constant:
        return SizeFunction.constant(graph.vertices, constant[kind])
    if kind is GadgetKind.W3:
        return SizeFunction.constant(graph.vertices, 3).with_size(graph.vertex("bottom"), 2)
    if kind in (GadgetKind.W2, GadgetKind.H1, GadgetKind.COUNTEREXAMPLE_TRIANGLE_FREE_3):
        return SizeFunction.constant(graph.vertices, 3)
    sizes: dict[VertexId, int] = {}
    for vertex in graph.sorted_vertices:
        role = graph.label(vertex).rsplit(".", 1)[-1]
        if role in HALF_SIZES:
            sizes[vertex] = HALF_SIZES[role]
        elif role == "relay":
            sizes[vertex] = 3
        else:
            sizes[vertex] = 2
    return SizeFunction(sizes)


def _require_pair(a: Optional[int], b: Optional[int]) -> tuple[int, int]:
    if a is None or b is None:
        raise BadParams("Colors a and b are required.")
    if a == b:
        raise BadParams(f"Colors a and b must differ, got {a} twice.")
    return a, b


def _w1_lists(a: int, b: int, xs: Sequence[int], ys: Sequence[int]) -> dict[str, set[int]]:
    return {
        "w": {a, b, 1, 2},
        "x1": {a, 1, *xs},
        "x2": {a, b, *xs},
        "x3": {b, 1, *xs},
        "y1": {a, 2, *ys},
        "y2": {a, b, *ys},
        "y3": {b, 2, *ys},
    }


def _w2_lists(a: int, b: int, x: int, y: int) -> dict[str, set[int]]:
    return {
        "w": {a, 1, 2},
        "x1": {1, x, 5}, "x2": {a, b, x}, "x3": {x, 6, 7}, "x4": {b, 1, 6},
        "y1": {2, y, 5}, "y2": {a, b, y}, "y3": {y, 6, 7}, "y4": {b, 2, 6},
        "wl": {1, 8, 9}, "x1i": {5, 8, 9}, "x2i": {x, 8, 9}, "x3i": {7, 8, 9}, "x4i": {6, 8, 9},
        "wr": {2, 8, 9}, "y1i": {5, 8, 9}, "y2i": {y, 8, 9}, "y3i": {7, 8, 9}, "y4i": {6, 8, 9},
    }


def paper_lists_by_role(
    kind: GadgetKind | str,
    *,
    a: Optional[int] = None,
    b: Optional[int] = None,
    u_colors: Optional[Sequence[int]] = None,
    v_colors: Optional[Sequence[int]] = None,
    x_colors: Optional[Sequence[int]] = None,
    y_colors: Optional[Sequence[int]] = None,
) -> dict[str, set[int]]:
    """Published lists keyed by role; the generic colors of the x and y sides can be overridden."""
    kind = GadgetKind(kind)
    if kind is GadgetKind.W1:
        a, b = _require_pair(a, b)
        xs = tuple(x_colors) if x_colors is not None else (3, 4)
        ys = tuple(y_colors) if y_colors is not None else (5, 6)
        if len(xs) != 2 or len(ys) != 2:
            raise BadParams("W1 needs two x colors and two y colors.")
        lists = _w1_lists(a, b, xs, ys)
    elif kind is GadgetKind.W2:
        a, b = _require_pair(a, b)
        x = x_colors[0] if x_colors else 3
        y = y_colors[0] if y_colors else 4
        lists = _w2_lists(a, b, x, y)
    elif kind is GadgetKind.W3:
        lists = {
            "top": {1, 2, 3}, "bottom": {4, 5},
            "l1": {1, 4, 5}, "l2": {1, 4, 5},
            "m1": {2, 4, 5}, "m2": {2, 4, 5},
            "r1": {3, 4, 5}, "r2": {3, 4, 5},
        }
        return lists
    elif kind is GadgetKind.HALF_PROPAGATOR:
        return {role: set(colors) for role, colors in HALF_PATTERN.items()}
    elif kind is GadgetKind.PROPAGATOR:
        shift = HALF_FORCED_OUT - 1
        lists = {"in": set(HALF_PATTERN["in"])}
        for role in HALF_ROLES:
            lists[f"h1.{role}"] = set(HALF_PATTERN[role])
            lists[f"h2.{role}"] = {c + shift for c in HALF_PATTERN[role]}
        lists["relay"] = lists.pop("h1.out")
        lists["out"] = lists.pop("h2.out")
        return lists
    else:
        raise BadParams(f"No published assignment for {kind.value}.")
    lists["u"] = set(u_colors) if u_colors is not None else {a}
    lists["v"] = set(v_colors) if v_colors is not None else {b}
    return lists


def paper_assignment(kind: GadgetKind | str, graph: Optional[Graph] = None, **params: object) -> ListAssignment:
    """The published list assignment of a gadget, keyed by vertex id."""
    kind = GadgetKind(kind)
    graph = graph or build_gadget(kind)
    by_role = paper_lists_by_role(kind, **params)  # type: ignore[arg-type]
    return ListAssignment({graph.vertex(role): frozenset(colors) for role, colors in by_role.items()})


def _boundary_list(p: ColorPair, q: ColorPair, size: int, reserved: frozenset[int]) -> frozenset[int]:
    colors = set(p) | set(q)
    fresh = max(reserved) + 1
    while len(colors) < size:
        colors.add(fresh)
        fresh += 1
    return frozenset(colors)


def _composite_assignment(
    graph: Graph,
    kind: GadgetKind,
    pairs: Sequence[ColorPair],
    pins: tuple[frozenset[int], frozenset[int]],
    boundaries: Optional[Sequence[frozenset[int]]],
    cyclic: bool,
) -> ListAssignment:
    """Lists for copies of W1/W2 glued at u and v; ``boundaries[i]`` is the shared x2/y2 list after copy i+1."""
    lists: dict[VertexId, frozenset[int]] = {
        graph.vertex("u"): pins[0],
        graph.vertex("v"): pins[1],
    }
    count = len(pairs)
    for index, (a, b) in enumerate(pairs):
        copy = index + 1
        xs: Optional[tuple[int, ...]] = None
        ys: Optional[tuple[int, ...]] = None
        if boundaries is not None:
            if index > 0 or cyclic:
                xs = tuple(sorted(boundaries[(index - 1) % count] - {a, b}))
            if index < count - 1 or cyclic:
                ys = tuple(sorted(boundaries[index] - {a, b}))
        by_role = paper_lists_by_role(kind, a=a, b=b, x_colors=xs, y_colors=ys)
        for role, colors in by_role.items():
            if role in ("u", "v"):
                continue
            vertex = graph.find(copy_label(role, copy))
            if vertex is None:
                continue
            lists[vertex] = frozenset(colors)
        if boundaries is not None and (index < count - 1 or cyclic):
            lists[graph.vertex(f"z{copy}")] = boundaries[index]
    return ListAssignment(lists)


def _boundaries(pairs: Sequence[ColorPair], size: int, reserved: frozenset[int], cyclic: bool) -> list[frozenset[int]]:
    count = len(pairs)
    stop = count if cyclic else count - 1
    return [_boundary_list(pairs[i], pairs[(i + 1) % count], size, reserved) for i in range(stop)]


def build_counterexample(k: int, compact: bool = True) -> Graph:
    """Planar non-4-choosable (k=4) or planar triangle-free non-3-choosable (k=3) graph.

    With ``compact`` the y2 vertex of copy i is merged with x2 of copy i+1
    (cyclically for k=3); the merged vertex is labelled ``z{i}``.
    """
    if k == 4:
        graph = _merge_pins(_build_w1(), 12)
        graph = graph.with_edges([(graph.vertex("u"), graph.vertex("v"))])
        copies, cyclic = 12, False
    elif k == 3:
        graph = _merge_pins(_build_w2(), 9)
        copies, cyclic = 9, True
    else:
        raise BadParams(f"Counterexamples exist for k in (3, 4), got {k}.")
    if not compact:
        return graph
    stop = copies if cyclic else copies - 1
    classes = [
        [graph.vertex(copy_label("y2", i)), graph.vertex(copy_label("x2", i % copies + 1))]
        for i in range(1, stop + 1)
    ]
    merged = identify_vertices(graph, classes, labels={i: f"z{i + 1}" for i in range(stop)})
    _logger.debug("counterexample k=%d: %d vertices, %d edges", k, merged.order, merged.size)
    return merged


def bad_assignment(k: int, compact: bool = True, graph: Optional[Graph] = None) -> ListAssignment:
    """The uncolorable k-list assignment of build_counterexample(k, compact)."""
    graph = graph or build_counterexample(k, compact)
    if k == 4:
        pairs, pins, kind, size, cyclic = pair_schedule_k4(), PINS_K4, GadgetKind.W1, 4, False
    elif k == 3:
        pairs, pins, kind, size, cyclic = PAIR_SCHEDULE_K3, PINS_K3, GadgetKind.W2, 3, True
    else:
        raise BadParams(f"Counterexamples exist for k in (3, 4), got {k}.")
    boundaries = None
    if compact:
        boundaries = _boundaries(pairs, size, pins[0] | pins[1], cyclic)
    return _composite_assignment(graph, kind, pairs, pins, boundaries, cyclic)


def build_choice_critical(k: int) -> tuple[Graph, ListAssignment]:
    """H1 (k=3, six W2 copies) or the twelve-W1 graph (k=4), with an uncolorable witness.

    The witness gives u a (k-1)-list and every other vertex a k-list.
    """
    if k == 3:
        base, copies, kind = _build_w2(), 6, GadgetKind.W2
    elif k == 4:
        base, copies, kind = _build_w1(), 12, GadgetKind.W1
    else:
        raise BadParams(f"Choice-critical gadgets exist for k in (3, 4), got {k}.")
    graph = _merge_pins(base, copies)
    pins = CRITICAL_PINS[k]
    pairs = list(product(sorted(pins[0]), sorted(pins[1])))
    if len(pairs) != copies:
        raise BadParams("Pin sets do not yield one pair per copy.")
    witness = _composite_assignment(graph, kind, pairs, pins, None, False)
    return graph, witness


def copy_subgraph(graph: Graph, copy: int) -> Graph:
    """The copy-th gadget inside a composite, together with the shared u and v."""
    suffix = f"@copy{copy}"
    keep = {v for v, label in graph.labels.items() if label.endswith(suffix)}
    keep |= {graph.vertex("u"), graph.vertex("v")}
    return graph.subgraph(keep)


def discover_forcing_pattern(
    graph: Graph,
    sizes: Mapping[VertexId, int],
    target: VertexId,
    pinned: Optional[Mapping[VertexId, int]] = None,
    seed: Optional[ListAssignment] = None,
    limit: int = 200_000,
) -> tuple[ListAssignment, int]:
    """First list assignment under which ``target`` has exactly one feasible color.

    ``pinned`` vertices get the singleton list of their color. The seed is
    tried first, then assignments in canonical order (reused colors before
    new ones). Returns the assignment and the forced color.
    """
    pinned = dict(pinned or {})
    if seed is not None:
        forced = feasible_colors(graph, seed, target)
        if len(forced) == 1:
            return seed, next(iter(forced))
        _logger.info("seed pattern does not force vertex %d; enumerating", target)
    free = [v for v in graph.sorted_vertices if v not in pinned]
    base = {v: frozenset({c}) for v, c in pinned.items()}
    start = max(pinned.values(), default=0)
    tried = 0

    def extend(index: int, used: int, chosen: dict[VertexId, frozenset[int]]):
        nonlocal tried
        if index == len(free):
            tried += 1
            if tried > limit:
                raise PatternNotFound(f"No forcing pattern within {limit} candidates.")
            yield dict(chosen)
            return
        vertex = free[index]
        size = sizes[vertex]
        for reused in range(min(size, used), -1, -1):
            fresh = tuple(range(used + 1, used + 1 + size - reused))
            for old in combinations(range(1, used + 1), reused):
                chosen[vertex] = frozenset(old + fresh)
                yield from extend(index + 1, used + len(fresh), chosen)
                del chosen[vertex]

    for candidate in extend(0, start, dict(base)):
        lists = ListAssignment(candidate)
        forced = feasible_colors(graph, lists, target)
        if len(forced) == 1:
            _logger.debug("forcing pattern found after %d candidates", tried)
            return lists, next(iter(forced))
    raise PatternNotFound("Canonical enumeration exhausted without a forcing pattern.")


__all__ = [
    "BadParams",
    "CRITICAL_PINS",
    "GadgetKind",
    "HALF_FORCED_OUT",
    "HALF_PATTERN",
    "HALF_ROLES",
    "HALF_SIZES",
    "PAIR_SCHEDULE_K3",
    "PINS_K3",
    "PINS_K4",
    "PatternNotFound",
    "PropagatorStage",
    "add_multioutput_propagator",
    "bad_assignment",
    "build_choice_critical",
    "build_counterexample",
    "build_gadget",
    "copy_subgraph",
    "discover_forcing_pattern",
    "gadget_sizes",
    "pair_schedule_k4",
    "paper_assignment",
    "paper_lists_by_role",
]
