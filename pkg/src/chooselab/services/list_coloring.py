"""Exact list-coloring solver, counter and incomp computation.

The solver is a depth-first search with minimum-remaining-values branching,
forward checking and conflict-directed backjumping. Two reductions keep the
reduction outputs small at every node: connected components of the
uncolored part are solved independently, and a vertex whose list is larger
than its number of uncolored neighbours is set aside and colored greedily
once everything else is done.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
import logging
from typing import Optional

from chooselab.models.assignments import Color, ColorPair, Coloring, ListAssignment
from chooselab.models.graph import Graph, VertexId

_logger = logging.getLogger(__name__)

Domains = dict[VertexId, frozenset[Color]]
Reasons = dict[VertexId, frozenset[VertexId]]


class DomainMismatch(ValueError):
    """Raised when a list assignment does not cover exactly the graph's vertices."""


class SameVertex(ValueError):
    """Raised when incomp() is asked about a vertex paired with itself."""


@dataclass(frozen=True)
class ListColoringResult:
    coloring: Optional[Coloring]
    nodes: int

    @property
    def colorable(self) -> bool:
        return self.coloring is not None


def check_domain(graph: Graph, lists: Mapping[VertexId, Iterable[Color]]) -> None:
    missing = graph.vertices - set(lists)
    extra = set(lists) - graph.vertices
    if missing or extra:
        msg = (
            f"List assignment does not match the vertex set "
            f"(missing {sorted(missing)[:5]}, extra {sorted(extra)[:5]})."
        )
        _logger.error(msg)
        raise DomainMismatch(msg)


def is_proper_list_coloring(graph: Graph, lists: ListAssignment, coloring: Mapping[VertexId, Color]) -> bool:
    """Independent checker: total, list-respecting, no monochromatic edge."""
    if set(coloring) != set(graph.vertices):
        return False
    if any(coloring[v] not in lists[v] for v in graph.vertices):
        return False
    return all(coloring[a] != coloring[b] for a, b in graph.edges)


class _Search:
    def __init__(self, graph: Graph) -> None:
        self.adjacency = graph.adjacency
        self.rank = {v: i for i, v in enumerate(graph.sorted_vertices)}
        self.nodes = 0

    def solve(self, domains: Domains) -> Optional[Coloring]:
        reasons: Reasons = {v: frozenset() for v in domains}
        coloring, _ = self._node(domains, reasons)
        return coloring

    def _node(self, domains: Domains, reasons: Reasons) -> tuple[Optional[Coloring], frozenset[VertexId]]:
        self.nodes += 1
        domains = dict(domains)
        reasons = dict(reasons)
        colored: Coloring = {}
        for vertex, domain in domains.items():
            if not domain:
                return None, reasons[vertex]
        queue = deque(sorted((v for v, d in domains.items() if len(d) == 1), key=self.rank.__getitem__))
        while queue:
            vertex = queue.popleft()
            if vertex not in domains:
                continue
            (color,) = domains.pop(vertex)
            colored[vertex] = color
            cause = reasons[vertex]
            for neighbor in self.adjacency[vertex]:
                domain = domains.get(neighbor)
                if domain is None or color not in domain:
                    continue
                domain = domain - {color}
                domains[neighbor] = domain
                reasons[neighbor] = reasons[neighbor] | cause
                if not domain:
                    return None, reasons[neighbor]
                if len(domain) == 1:
                    queue.append(neighbor)

        deferred = self._defer(domains)
        skipped = set(deferred)
        core = [v for v in domains if v not in skipped]
        for component in self._components(core):
            sub, conflict = self._branch(
                {v: domains[v] for v in component},
                {v: reasons[v] for v in component},
            )
            if sub is None:
                return None, conflict
            colored.update(sub)
        for vertex in reversed(deferred):
            used = {colored[w] for w in self.adjacency[vertex] if w in colored}
            colored[vertex] = min(domains[vertex] - used)
        return colored, frozenset()

    def _branch(self, domains: Domains, reasons: Reasons) -> tuple[Optional[Coloring], frozenset[VertexId]]:
        pick = min(
            domains,
            key=lambda v: (
                len(domains[v]),
                -sum(1 for w in self.adjacency[v] if w in domains),
                self.rank[v],
            ),
        )
        accumulated: set[VertexId] = set()
        for color in sorted(domains[pick]):
            child = dict(domains)
            del child[pick]
            child_reasons = dict(reasons)
            conflict: Optional[frozenset[VertexId]] = None
            for neighbor in self.adjacency[pick]:
                domain = child.get(neighbor)
                if domain is None or color not in domain:
                    continue
                domain = domain - {color}
                child[neighbor] = domain
                child_reasons[neighbor] = child_reasons[neighbor] | {pick}
                if not domain:
                    conflict = child_reasons[neighbor]
                    break
            if conflict is None:
                sub, conflict = self._node(child, child_reasons)
                if sub is not None:
                    sub[pick] = color
                    return sub, frozenset()
            if pick not in conflict:
                return None, conflict
            accumulated |= conflict - {pick}
        return None, frozenset(accumulated | reasons[pick])

    def _defer(self, domains: Domains) -> list[VertexId]:
        remaining = set(domains)
        live = {v: sum(1 for w in self.adjacency[v] if w in remaining) for v in remaining}
        queue = deque(
            sorted((v for v in remaining if len(domains[v]) > live[v]), key=self.rank.__getitem__)
        )
        order: list[VertexId] = []
        while queue:
            vertex = queue.popleft()
            if vertex not in remaining:
                continue
            remaining.discard(vertex)
            order.append(vertex)
            for neighbor in self.adjacency[vertex]:
                if neighbor in remaining:
                    live[neighbor] -= 1
                    if len(domains[neighbor]) == live[neighbor] + 1:
                        queue.append(neighbor)
        return order

    def _components(self, vertices: list[VertexId]) -> list[list[VertexId]]:
        pending = set(vertices)
        found: list[list[VertexId]] = []
        for start in sorted(vertices, key=self.rank.__getitem__):
            if start not in pending:
                continue
            pending.discard(start)
            component = [start]
            stack = [start]
            while stack:
                vertex = stack.pop()
                for neighbor in self.adjacency[vertex]:
                    if neighbor in pending:
                        pending.discard(neighbor)
                        component.append(neighbor)
                        stack.append(neighbor)
            found.append(component)
        return found


def _initial_domains(
    graph: Graph,
    lists: Mapping[VertexId, Iterable[Color]],
    pinned: Optional[Mapping[VertexId, Color]],
) -> Domains:
    check_domain(graph, lists)
    domains = {v: frozenset(lists[v]) for v in graph.vertices}
    for vertex, color in (pinned or {}).items():
        domains[vertex] = domains[vertex] & {color}
    return domains


def solve_list_coloring(
    graph: Graph,
    lists: Mapping[VertexId, Iterable[Color]],
    pinned: Optional[Mapping[VertexId, Color]] = None,
) -> ListColoringResult:
    """Complete search; ``pinned`` fixes colors (a pin outside the list is uncolorable)."""
    search = _Search(graph)
    coloring = search.solve(_initial_domains(graph, lists, pinned))
    _logger.debug("list coloring on %d vertices: %s after %d nodes",
                  graph.order, "colorable" if coloring else "uncolorable", search.nodes)
    return ListColoringResult(coloring, search.nodes)


def find_list_coloring(
    graph: Graph,
    lists: Mapping[VertexId, Iterable[Color]],
    pinned: Optional[Mapping[VertexId, Color]] = None,
) -> Optional[Coloring]:
    """Return a proper coloring from the lists, or None when none exists."""
    return solve_list_coloring(graph, lists, pinned).coloring


def count_list_colorings(graph: Graph, lists: Mapping[VertexId, Iterable[Color]]) -> int:
    """Exact number of proper list colorings (small graphs)."""
    domains = _initial_domains(graph, lists, None)
    adjacency = graph.adjacency
    rank = {v: i for i, v in enumerate(graph.sorted_vertices)}

    def count(domains: Domains) -> int:
        if not domains:
            return 1
        if any(not d for d in domains.values()):
            return 0
        pick = min(domains, key=lambda v: (len(domains[v]), rank[v]))
        total = 0
        for color in domains[pick]:
            child = {v: d for v, d in domains.items() if v != pick}
            for neighbor in adjacency[pick]:
                if neighbor in child:
                    child[neighbor] = child[neighbor] - {color}
            total += count(child)
        return total

    return count(domains)


def iter_list_colorings(graph: Graph, lists: Mapping[VertexId, Iterable[Color]]):
    """Yield every proper list coloring (small graphs)."""
    domains = _initial_domains(graph, lists, None)
    order = sorted(graph.vertices, key=lambda v: (len(domains[v]), v))
    adjacency = graph.adjacency
    current: Coloring = {}

    def extend(index: int):
        if index == len(order):
            yield dict(current)
            return
        vertex = order[index]
        for color in sorted(domains[vertex]):
            if all(current.get(w) != color for w in adjacency[vertex]):
                current[vertex] = color
                yield from extend(index + 1)
                del current[vertex]

    yield from extend(0)


def feasible_colors(
    graph: Graph,
    lists: Mapping[VertexId, Iterable[Color]],
    vertex: VertexId,
    pinned: Optional[Mapping[VertexId, Color]] = None,
) -> frozenset[Color]:
    """Colors of ``vertex`` that extend to a full list coloring."""
    base = dict(pinned or {})
    feasible = set()
    for color in sorted(lists[vertex]):
        if vertex in base and base[vertex] != color:
            continue
        if find_list_coloring(graph, lists, {**base, vertex: color}) is not None:
            feasible.add(color)
    return frozenset(feasible)


def incomp(
    graph: Graph,
    u: VertexId,
    v: VertexId,
    lists: Mapping[VertexId, Iterable[Color]],
) -> frozenset[ColorPair]:
    """Pairs (a, b) in S(u) x S(v) for which c(u)=a, c(v)=b does not extend."""
    if u == v:
        msg = f"incomp() needs two distinct vertices, got {u} twice."
        _logger.error(msg)
        raise SameVertex(msg)
    check_domain(graph, lists)
    pairs = set()
    for a in sorted(lists[u]):
        for b in sorted(lists[v]):
            if find_list_coloring(graph, lists, {u: a, v: b}) is None:
                pairs.add((a, b))
    return frozenset(pairs)


__all__ = [
    "DomainMismatch",
    "ListColoringResult",
    "SameVertex",
    "check_domain",
    "count_list_colorings",
    "feasible_colors",
    "find_list_coloring",
    "incomp",
    "is_proper_list_coloring",
    "iter_list_colorings",
    "solve_list_coloring",
]
