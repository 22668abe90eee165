"""Adversary search for f-choosability and the deciders built on it.

The adversary hands out lists one vertex at a time along an elimination
order chosen to keep the frontier (assigned vertices that still have
unassigned neighbours) small. The search state after each step is the set of
colorings of the frontier that extend over everything assigned so far. Only
colors visible in that set matter; every other color behaves like a fresh
one, so the adversary's choices at a vertex are "j visible colors plus
f(v) - j fresh colors". An empty state is a win for the adversary. States
are compared up to color renaming and losing ones are memoised.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from itertools import combinations, product
import logging
from typing import Optional

from chooselab.constants import DEFAULT_SEARCH_BUDGET
from chooselab.models.assignments import ListAssignment, SizeFunction
from chooselab.models.graph import Graph, VertexId
from chooselab.models.verdicts import ChoosabilityVerdict, RestrictlyReport, SearchStats
from chooselab.services.list_coloring import find_list_coloring
from chooselab.services.structure import classify_2_choosable, is_bipartite

_logger = logging.getLogger(__name__)

State = frozenset[tuple[int, ...]]


class BudgetExceeded(RuntimeError):
    """Raised when an adversary search runs past its node budget; carries the partial stats."""

    def __init__(self, message: str, stats: SearchStats) -> None:
        super().__init__(message)
        self.stats = stats


class SizeFunctionError(ValueError):
    """Raised when a size function does not match the graph."""


def _check_sizes(graph: Graph, sizes: Mapping[VertexId, int]) -> None:
    if set(sizes) != set(graph.vertices):
        msg = "Size function domain differs from the vertex set."
        _logger.error(msg)
        raise SizeFunctionError(msg)
    if any(sizes[v] < 1 for v in sizes):
        msg = "List sizes must be positive."
        _logger.error(msg)
        raise SizeFunctionError(msg)


def _peel(graph: Graph, sizes: Mapping[VertexId, int]) -> set[VertexId]:
    """Vertices left after repeatedly removing those with fewer neighbours than list colors."""
    remaining = set(graph.vertices)
    degree = {v: graph.degree(v) for v in remaining}
    queue = [v for v in graph.sorted_vertices if degree[v] < sizes[v]]
    while queue:
        vertex = queue.pop()
        if vertex not in remaining:
            continue
        remaining.discard(vertex)
        for neighbor in graph.neighbors(vertex):
            if neighbor in remaining:
                degree[neighbor] -= 1
                if degree[neighbor] == sizes[neighbor] - 1:
                    queue.append(neighbor)
    return remaining


def _canonical(state: State) -> State:
    if not state:
        return state
    width = len(next(iter(state)))
    colors = sorted({c for row in state for c in row})
    signature = {
        c: tuple(sum(1 for row in state if row[p] == c) for p in range(width)) for c in colors
    }
    ranked = sorted(colors, key=lambda c: (signature[c], c))
    rename = {c: i for i, c in enumerate(ranked)}
    return frozenset(tuple(rename[c] for c in row) for row in state)


class _AdversarySearch:
    def __init__(self, graph: Graph, sizes: Mapping[VertexId, int], budget: int, stats: SearchStats) -> None:
        self.graph = graph
        self.sizes = sizes
        self.budget = budget
        self.stats = stats

    def run(self, component: Iterable[VertexId]) -> Optional[dict[VertexId, tuple[int, ...]]]:
        order = self._elimination_order(set(component))
        self._prepare(order)
        self._lost: set[tuple[int, State]] = set()
        path: list[tuple[VertexId, tuple[int, ...]]] = []
        found = self._explore(0, frozenset({()}), 1, path)
        return dict(found) if found else None

    def _elimination_order(self, vertices: set[VertexId]) -> list[VertexId]:
        graph = self.graph
        rank = {v: i for i, v in enumerate(graph.sorted_vertices)}
        start = min(vertices, key=lambda v: (-len(graph.neighbors(v) & vertices), rank[v]))
        order = [start]
        placed = {start}
        while len(order) < len(vertices):
            best_key = None
            best = None
            for candidate in vertices - placed:
                trial = placed | {candidate}
                frontier = sum(
                    1 for x in trial if any(w in vertices and w not in trial for w in graph.neighbors(x))
                )
                key = (frontier, -len(graph.neighbors(candidate) & placed), rank[candidate])
                if best_key is None or key < best_key:
                    best_key, best = key, candidate
            order.append(best)  # type: ignore[arg-type]
            placed.add(best)  # type: ignore[arg-type]
        _logger.debug("elimination order: %s", order)
        return order

    def _prepare(self, order: list[VertexId]) -> None:
        graph = self.graph
        members = set(order)
        self.order = order
        self.neighbor_positions: list[tuple[int, ...]] = []
        self.keep: list[tuple[int, ...]] = []
        frontier: list[VertexId] = []
        for index, vertex in enumerate(order):
            self.neighbor_positions.append(
                tuple(p for p, x in enumerate(frontier) if x in graph.neighbors(vertex))
            )
            extended = frontier + [vertex]
            later = set(order[index + 1:])
            kept = [p for p, x in enumerate(extended) if any(w in later for w in graph.neighbors(x) if w in members)]
            self.keep.append(tuple(kept))
            frontier = [extended[p] for p in kept]

    def _explore(
        self,
        index: int,
        state: State,
        next_color: int,
        path: list[tuple[VertexId, tuple[int, ...]]],
    ) -> Optional[list[tuple[VertexId, tuple[int, ...]]]]:
        if index == len(self.order):
            return None
        key = (index, _canonical(state))
        if key in self._lost:
            return None
        self.stats.nodes += 1
        if self.stats.nodes > self.budget:
            msg = f"Adversary search exceeded its budget of {self.budget} nodes."
            _logger.warning(msg)
            raise BudgetExceeded(msg, self.stats)
        vertex = self.order[index]
        positions = self.neighbor_positions[index]
        keep = self.keep[index]
        visible = sorted({c for row in state for c in row})
        size = self.sizes[vertex]
        for reused in range(min(size, len(visible)), -1, -1):
            fresh = tuple(range(next_color, next_color + size - reused))
            for old in combinations(visible, reused):
                self.stats.assignments += 1
                colors = old + fresh
                successor = set()
                for row in state:
                    blocked = {row[p] for p in positions}
                    for color in colors:
                        if color not in blocked:
                            extended = row + (color,)
                            successor.add(tuple(extended[p] for p in keep))
                path.append((vertex, colors))
                if not successor:
                    return list(path)
                found = self._explore(index + 1, frozenset(successor), next_color + len(fresh), path)
                if found:
                    return found
                path.pop()
        self._lost.add(key)
        return None


def _complete_witness(
    graph: Graph,
    sizes: Mapping[VertexId, int],
    partial: Mapping[VertexId, Sequence[int]],
) -> ListAssignment:
    next_color = 1 + max((c for colors in partial.values() for c in colors), default=0)
    lists: dict[VertexId, frozenset[int]] = {}
    for vertex in graph.sorted_vertices:
        if vertex in partial:
            lists[vertex] = frozenset(partial[vertex])
        else:
            lists[vertex] = frozenset(range(next_color, next_color + sizes[vertex]))
            next_color += sizes[vertex]
    return ListAssignment(lists)


def decide_f_choosable(
    graph: Graph,
    sizes: Mapping[VertexId, int],
    budget: int = DEFAULT_SEARCH_BUDGET,
    stats: Optional[SearchStats] = None,
) -> ChoosabilityVerdict:
    """Exact f-choosability; a False verdict carries a solver-checked witness."""
    _check_sizes(graph, sizes)
    stats = stats if stats is not None else SearchStats()
    core = _peel(graph, sizes)
    if not core:
        return ChoosabilityVerdict(True, None, stats)
    search = _AdversarySearch(graph, sizes, budget, stats)
    for component in _components_of(graph, core):
        partial = search.run(component)
        if partial is None:
            continue
        witness = _complete_witness(graph, sizes, partial)
        if find_list_coloring(graph, witness) is not None:
            msg = "Adversary witness turned out to be colorable."
            _logger.error(msg)
            raise RuntimeError(msg)
        _logger.info("not f-choosable: witness found after %d nodes", stats.nodes)
        return ChoosabilityVerdict(False, witness, stats)
    _logger.info("f-choosable after %d nodes", stats.nodes)
    return ChoosabilityVerdict(True, None, stats)


def _components_of(graph: Graph, vertices: set[VertexId]) -> list[list[VertexId]]:
    pending = set(vertices)
    found: list[list[VertexId]] = []
    for start in graph.sorted_vertices:
        if start not in pending:
            continue
        pending.discard(start)
        component, stack = [start], [start]
        while stack:
            vertex = stack.pop()
            for neighbor in graph.neighbors(vertex):
                if neighbor in pending:
                    pending.discard(neighbor)
                    component.append(neighbor)
                    stack.append(neighbor)
        found.append(component)
    return found


def is_k_choosable(graph: Graph, k: int, budget: int = DEFAULT_SEARCH_BUDGET) -> ChoosabilityVerdict:
    return decide_f_choosable(graph, SizeFunction.constant(graph.vertices, k), budget)


def choice_number(graph: Graph, budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    if graph.order == 0:
        return 0
    k = 1
    while not is_k_choosable(graph, k, budget):
        k += 1
    return k


def is_restrictly_choosable(
    graph: Graph,
    k: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
    stop_at_first: bool = False,
) -> RestrictlyReport:
    """f_v-choosability for every v, where f_v(v) = k - 1 and k elsewhere."""
    if k < 2:
        raise SizeFunctionError("k-restrictly-choosable needs k >= 2.")
    base = SizeFunction.constant(graph.vertices, k)
    per_vertex: dict[VertexId, bool] = {}
    witnesses: dict[VertexId, ListAssignment] = {}
    for vertex in graph.sorted_vertices:
        verdict = decide_f_choosable(graph, base.with_size(vertex, k - 1), budget)
        per_vertex[vertex] = verdict.answer
        if verdict.witness is not None:
            witnesses[vertex] = verdict.witness
            if stop_at_first:
                break
    return RestrictlyReport(k, per_vertex, witnesses)


def is_choice_critical(graph: Graph, k: int, budget: int = DEFAULT_SEARCH_BUDGET) -> bool:
    if not is_k_choosable(graph, k, budget):
        return False
    return not is_restrictly_choosable(graph, k, budget, stop_at_first=True)


def bipartite_planar_choice_number(graph: Graph) -> int:
    """ch of a bipartite planar graph: 1 if edgeless, 2 if the core recognizer accepts, else 3."""
    if not is_bipartite(graph):
        raise ValueError("bipartite_planar_choice_number() needs a bipartite graph.")
    if graph.order == 0:
        return 0
    if graph.size == 0:
        return 1
    return 2 if classify_2_choosable(graph) else 3


def iter_canonical_assignments(
    vertices: Sequence[VertexId],
    sizes: Mapping[VertexId, int],
    universe: int,
) -> Iterator[ListAssignment]:
    """All list assignments over colors 1..universe with colors named in first-use order."""

    def extend(index: int, used: int, chosen: list[tuple[int, ...]]) -> Iterator[ListAssignment]:
        if index == len(vertices):
            yield ListAssignment(dict(zip(vertices, (frozenset(c) for c in chosen))))
            return
        size = sizes[vertices[index]]
        for fresh in range(0, size + 1):
            if used + fresh > universe or fresh > size:
                break
            new_colors = tuple(range(used + 1, used + fresh + 1))
            for old in combinations(range(1, used + 1), size - fresh):
                chosen.append(old + new_colors)
                yield from extend(index + 1, used + fresh, chosen)
                chosen.pop()

    yield from extend(0, 0, [])


def decide_f_choosable_naive(graph: Graph, sizes: Mapping[VertexId, int], universe: int) -> bool:
    """Reference decider: every assignment from colors 1..universe, no symmetry reduction."""
    _check_sizes(graph, sizes)
    vertices = graph.sorted_vertices
    options = [list(combinations(range(1, universe + 1), sizes[v])) for v in vertices]
    for choice in product(*options):
        lists = {v: frozenset(c) for v, c in zip(vertices, choice)}
        if find_list_coloring(graph, lists) is None:
            return False
    return True


__all__ = [
    "BudgetExceeded",
    "SizeFunctionError",
    "bipartite_planar_choice_number",
    "choice_number",
    "decide_f_choosable",
    "decide_f_choosable_naive",
    "is_choice_critical",
    "is_k_choosable",
    "is_restrictly_choosable",
    "iter_canonical_assignments",
]
