"""Behavioural replays of the gadget lemmas; a failing check points at a transcription bug."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from itertools import combinations, product
import logging
import random
from typing import Any, Optional

from chooselab.constants import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    HALF_PROPAGATOR_UNIVERSE,
    LEMMA41_MAX_UNIVERSE,
    PRISM_UNIVERSE,
    UNIVERSE_3_LISTS,
    UNIVERSE_4_LISTS,
)
from chooselab.models.assignments import ListAssignment
from chooselab.models.graph import Graph, VertexId
from chooselab.services.choosability import iter_canonical_assignments
from chooselab.services.closed_forms import cycle_graph, odd_cycle_2_lists_colorable, prism_uncompletable_colorings
from chooselab.services.gadgets import (
    CRITICAL_PINS,
    GadgetKind,
    HALF_FORCED_OUT,
    build_choice_critical,
    build_gadget,
    copy_subgraph,
    gadget_sizes,
    paper_assignment,
    paper_lists_by_role,
)
from chooselab.services.list_coloring import feasible_colors, find_list_coloring, incomp

_logger = logging.getLogger(__name__)

LEMMA_IDS = ("L41", "L42", "L43", "L44", "L45", "L47", "L48", "HP1", "HP2", "HP3", "HP4")
W1_PINS = (frozenset({7, 8, 9, 10}), frozenset({11, 12, 13, 14}))
W2_PINS = (frozenset({10, 11, 12}), frozenset({13, 14, 15}))


class LemmaViolated(AssertionError):
    """Raised when a lemma replay finds a counterexample; ``assignment`` reproduces it."""

    def __init__(self, lemma_id: str, message: str, assignment: Optional[ListAssignment]) -> None:
        super().__init__(f"{lemma_id}: {message}")
        self.lemma_id = lemma_id
        self.assignment = assignment


@dataclass
class LemmaReport:
    lemma_id: str
    trials: int
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict[str, Any]:
        return {
            "lemma": self.lemma_id,
            "trials": self.trials,
            "checked": self.checked,
            "passed": self.passed,
            "violations": list(self.violations),
            "details": dict(self.details),
        }


class _Recorder:
    def __init__(self, report: LemmaReport, strict: bool) -> None:
        self.report = report
        self.strict = strict

    def fail(self, message: str, assignment: Optional[ListAssignment] = None) -> None:
        self.report.violations.append(message)
        _logger.error("%s: %s", self.report.lemma_id, message)
        if self.strict:
            raise LemmaViolated(self.report.lemma_id, message, assignment)


def _random_lists(rng: random.Random, vertices: list[VertexId], sizes: dict[VertexId, int], universe: int) -> ListAssignment:
    return ListAssignment(
        {v: frozenset(rng.sample(range(1, universe + 1), sizes[v])) for v in vertices}
    )


def _incomp_suite(kind: GadgetKind, size: int, universe: int, pins: tuple[frozenset[int], frozenset[int]],
                  trials: int, rng: random.Random, rec: _Recorder) -> None:
    graph = build_gadget(kind)
    u, v = graph.vertex("u"), graph.vertex("v")
    sizes = {x: size for x in graph.vertices}
    vertices = list(graph.sorted_vertices)
    worst = 0
    for _ in range(trials):
        lists = _random_lists(rng, vertices, sizes, universe)
        blocked = incomp(graph, u, v, lists)
        worst = max(worst, len(blocked))
        rec.report.checked += 1
        if len(blocked) > 1:
            rec.fail(f"|incomp| = {len(blocked)} on a random assignment", lists)
    exact = 0
    for a, b in product(sorted(pins[0]), sorted(pins[1])):
        lists = paper_assignment(kind, graph, a=a, b=b, u_colors=pins[0], v_colors=pins[1])
        blocked = incomp(graph, u, v, lists)
        rec.report.checked += 1
        if blocked != {(a, b)}:
            rec.fail(f"published lists at a={a}, b={b} give incomp {sorted(blocked)}", lists)
        else:
            exact += 1
    rec.report.details.update({"max_incomp": worst, "published_exact": exact})


def _check_l41(trials: int, rng: random.Random, rec: _Recorder) -> None:
    disagreements = 0
    for k in (3, 5, 7):
        cycle = cycle_graph(k)
        vertices = list(cycle.sorted_vertices)
        sizes = {x: 2 for x in vertices}
        for lists in iter_canonical_assignments(vertices, sizes, LEMMA41_MAX_UNIVERSE):
            closed, _ = odd_cycle_2_lists_colorable([lists[x] for x in vertices])
            solved = find_list_coloring(cycle, lists) is not None
            rec.report.checked += 1
            if closed != solved:
                disagreements += 1
                rec.fail(f"C{k}: closed form {closed} but solver {solved}", lists)
    rec.report.details["disagreements"] = disagreements


def _check_l42(trials: int, rng: random.Random, rec: _Recorder) -> None:
    largest = 0
    for k in (3, 5):
        for _ in range(trials):
            outer = [frozenset(rng.sample(range(1, PRISM_UNIVERSE + 1), 3)) for _ in range(k)]
            stuck = prism_uncompletable_colorings(k, outer)
            largest = max(largest, len(stuck))
            rec.report.checked += 1
            if len(stuck) > 1:
                rec.fail(f"prism over C{k} has {len(stuck)} uncompletable colorings for {outer}")
    rec.report.details["max_uncompletable"] = largest


def _check_l43(trials: int, rng: random.Random, rec: _Recorder) -> None:
    _incomp_suite(GadgetKind.W2, 3, UNIVERSE_3_LISTS, W2_PINS, trials, rng, rec)


def _check_l47(trials: int, rng: random.Random, rec: _Recorder) -> None:
    _incomp_suite(GadgetKind.W1, 4, UNIVERSE_4_LISTS, W1_PINS, trials, rng, rec)


def _replay_h1(graph: Graph, lists: ListAssignment, copies: list[Graph], rec: _Recorder) -> None:
    """Colour H1 the way the 3-choosability proof does."""
    u, v = graph.vertex("u"), graph.vertex("v")
    common = lists[u] & lists[v]
    if common:
        color = min(common)
        coloring = find_list_coloring(graph, lists, {u: color, v: color})
        if coloring is None:
            rec.fail(f"common color {color} on u and v does not extend", lists)
        return
    blocked: set[tuple[int, int]] = set()
    for copy in copies:
        local = incomp(copy, u, v, lists.restrict(copy.vertices))
        if len(local) > 1:
            rec.fail(f"a W2 copy has |incomp| = {len(local)}", lists)
            return
        blocked |= local
    if len(blocked) >= len(lists[u]) * len(lists[v]):
        rec.fail("every (c(u), c(v)) pair is blocked", lists)
        return
    a, b = min(set(product(lists[u], lists[v])) - blocked)
    if find_list_coloring(graph, lists, {u: a, v: b}) is None:
        rec.fail(f"free pair ({a}, {b}) does not extend", lists)


def _check_l44(trials: int, rng: random.Random, rec: _Recorder) -> None:
    graph, _ = build_choice_critical(3)
    copies = [copy_subgraph(graph, i) for i in range(1, 7)]
    vertices = list(graph.sorted_vertices)
    sizes = {x: 3 for x in vertices}
    for _ in range(trials):
        rec.report.checked += 1
        _replay_h1(graph, _random_lists(rng, vertices, sizes, UNIVERSE_3_LISTS), copies, rec)
    pairs = list(product(sorted(W2_PINS[0]), sorted(W2_PINS[1])))
    structured = 0
    for chosen in combinations(pairs, 6):
        lists: dict[VertexId, frozenset[int]] = {
            graph.vertex("u"): W2_PINS[0],
            graph.vertex("v"): W2_PINS[1],
        }
        for copy, (a, b) in enumerate(chosen, start=1):
            for role, colors in paper_lists_by_role(GadgetKind.W2, a=a, b=b).items():
                if role not in ("u", "v"):
                    lists[graph.vertex(f"{role}@copy{copy}")] = frozenset(colors)
        rec.report.checked += 1
        structured += 1
        _replay_h1(graph, ListAssignment(lists), copies, rec)
    rec.report.details["structured"] = structured


def _check_witness(k: int, rec: _Recorder) -> None:
    graph, witness = build_choice_critical(k)
    u = graph.vertex("u")
    rec.report.checked += 1
    sizes_ok = len(witness[u]) == k - 1 and all(len(witness[x]) == k for x in graph.vertices if x != u)
    if not sizes_ok:
        rec.fail("witness list sizes are not (k-1 at u, k elsewhere)", witness)
    if find_list_coloring(graph, witness) is not None:
        rec.fail("choice-critical witness is colorable", witness)
    rec.report.details.update({"vertices": graph.order, "pins": [sorted(s) for s in CRITICAL_PINS[k]]})


def _check_l45(trials: int, rng: random.Random, rec: _Recorder) -> None:
    _check_witness(3, rec)


def _check_l48(trials: int, rng: random.Random, rec: _Recorder) -> None:
    _check_witness(4, rec)


def _half() -> tuple[Graph, VertexId, VertexId, list[VertexId], dict[VertexId, int]]:
    graph = build_gadget(GadgetKind.HALF_PROPAGATOR)
    entry, out = graph.vertex("in"), graph.vertex("out")
    sizes = dict(gadget_sizes(GadgetKind.HALF_PROPAGATOR, graph))
    others = [x for x in graph.sorted_vertices if x != entry]
    return graph, entry, out, others, sizes


def _check_hp1(trials: int, rng: random.Random, rec: _Recorder) -> None:
    graph, entry, out, _, _ = _half()
    lists = ListAssignment({x: frozenset({1, 2}) for x in graph.vertices})
    for color in (1, 2):
        rec.report.checked += 1
        forced = feasible_colors(graph, lists, out, {entry: color})
        if forced != {3 - color}:
            rec.fail(f"in colored {color} leaves out colors {sorted(forced)}", lists)


def _check_hp2(trials: int, rng: random.Random, rec: _Recorder) -> None:
    graph, entry, _, others, sizes = _half()
    for _ in range(trials):
        lists = _random_lists(rng, others, sizes, HALF_PROPAGATOR_UNIVERSE)
        color = rng.randint(1, HALF_PROPAGATOR_UNIVERSE + 1)
        full = lists.with_lists({entry: {color}})
        rec.report.checked += 1
        if find_list_coloring(graph, full) is None:
            rec.fail(f"in color {color} is not extendable", full)


def _check_hp3(trials: int, rng: random.Random, rec: _Recorder) -> None:
    graph, entry, out, others, sizes = _half()
    in_colors = range(1, HALF_PROPAGATOR_UNIVERSE + 2)
    for _ in range(trials):
        lists = _random_lists(rng, others, sizes, HALF_PROPAGATOR_UNIVERSE)
        for y in sorted(lists[out]):
            bad = [
                x for x in in_colors
                if find_list_coloring(graph, lists.with_lists({entry: {x}}), {out: y}) is None
            ]
            rec.report.checked += 1
            if len(bad) > 1:
                rec.fail(f"out color {y} is incompatible with in colors {bad}", lists)


def _check_hp4(trials: int, rng: random.Random, rec: _Recorder) -> None:
    graph = build_gadget(GadgetKind.HALF_PROPAGATOR)
    lists = paper_assignment(GadgetKind.HALF_PROPAGATOR, graph)
    forced = feasible_colors(graph, lists, graph.vertex("out"))
    rec.report.checked += 1
    rec.report.details["out_colors"] = sorted(forced)
    if forced != {HALF_FORCED_OUT}:
        rec.fail(f"forcing lists leave out colors {sorted(forced)}", lists)


_CHECKS: dict[str, Callable[[int, random.Random, _Recorder], None]] = {
    "L41": _check_l41,
    "L42": _check_l42,
    "L43": _check_l43,
    "L44": _check_l44,
    "L45": _check_l45,
    "L47": _check_l47,
    "L48": _check_l48,
    "HP1": _check_hp1,
    "HP2": _check_hp2,
    "HP3": _check_hp3,
    "HP4": _check_hp4,
}


def check_lemma(
    lemma_id: str,
    trials: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    strict: bool = True,
) -> LemmaReport:
    """Run one replay. ``strict`` raises LemmaViolated on the first counterexample."""
    lemma_id = lemma_id.upper()
    if lemma_id not in _CHECKS:
        raise ValueError(f"Unknown lemma id {lemma_id!r}; expected one of {', '.join(LEMMA_IDS)}.")
    count = trials if trials is not None else DEFAULT_TRIALS.get(lemma_id, 0)
    report = LemmaReport(lemma_id, count)
    _CHECKS[lemma_id](count, random.Random(seed), _Recorder(report, strict))
    _logger.info("%s: %d instances checked, %d violations", lemma_id, report.checked, len(report.violations))
    return report


__all__ = ["LEMMA_IDS", "LemmaReport", "LemmaViolated", "check_lemma"]
