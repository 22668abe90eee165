"""Formula-to-graph reductions and the critical-gadget attachments between choosability problems."""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import count
import logging
import random
from typing import Optional

from chooselab.constants import REDUCTION_SAMPLE_UNIVERSE
from chooselab.models.assignments import Coloring, ListAssignment, SizeFunction
from chooselab.models.graph import Graph, VertexId, normalize_edge
from chooselab.models.qbf import Literal, QbfError, QbfInstance, Quantifier, RotationSystem, Variable
from chooselab.models.reduction_output import ReductionOutput, literal_name
from chooselab.services.gadgets import (
    HALF_FORCED_OUT,
    HALF_PATTERN,
    HALF_ROLES,
    HALF_SIZES,
    GadgetKind,
    PropagatorStage,
    add_multioutput_propagator,
    build_choice_critical,
    build_gadget,
    discover_forcing_pattern,
    gadget_sizes,
)
from chooselab.services.graph_ops import GraphBuilder
from chooselab.services.list_coloring import find_list_coloring, is_proper_list_coloring
from chooselab.services.qbf import clause_literals, eval_qbf, find_falsifying_universal, substitute
from chooselab.services.structure import is_bipartite

_logger = logging.getLogger(__name__)


class NotOps(ValueError):
    """Raised when a formula is not a forall-exists planar CNF with clauses of at most three variables."""


class NotRps(ValueError):
    """Raised when a formula breaks one of the restricted-form constraints."""

    def __init__(self, violations: list[tuple["RpsViolation", str]]) -> None:
        self.violations = violations
        super().__init__("; ".join(f"{kind.value}: {detail}" for kind, detail in violations))


class BadSizes(ValueError):
    """Raised when a size function is not a {2, 3}-valued map over the graph's vertices."""


class SynthesisFailed(RuntimeError):
    """Raised when a synthesized adversary assignment turns out to be colorable."""


class PreconditionError(ValueError):
    """Raised when an operation is asked to refute a true formula."""


class RpsViolation(str, Enum):
    PREFIX_NOT_PI2 = "PREFIX_NOT_PI2"
    CLAUSE_WIDTH = "CLAUSE_WIDTH"
    VARIABLE_OCCURRENCES = "VARIABLE_OCCURRENCES"
    NONPLANAR = "NONPLANAR"


def validate_rps(q: QbfInstance) -> list[tuple[RpsViolation, str]]:
    violations: list[tuple[RpsViolation, str]] = []
    if not q.is_pi2():
        violations.append((RpsViolation.PREFIX_NOT_PI2, "a universal variable follows an existential one"))
    for index, clause in enumerate(q.clauses, start=1):
        if len(clause) != 3:
            violations.append((RpsViolation.CLAUSE_WIDTH, f"clause {index} has {len(clause)} variables"))
    for variable, places in q.occurrences().items():
        if len(places) > 3:
            violations.append(
                (RpsViolation.VARIABLE_OCCURRENCES, f"variable {variable} occurs in {len(places)} clauses")
            )
    if not q.is_planar():
        violations.append((RpsViolation.NONPLANAR, "incidence graph is not planar"))
    return violations


def _check_ops(q: QbfInstance) -> None:
    problems: list[str] = []
    if not q.is_pi2():
        problems.append("prefix is not forall-exists")
    problems.extend(
        f"clause {i} has {len(c)} variables" for i, c in enumerate(q.clauses, start=1) if len(c) > 3
    )
    if not q.is_planar():
        problems.append("incidence graph is not planar")
    if problems:
        msg = "Not an OPS instance: " + "; ".join(problems)
        _logger.error(msg)
        raise NotOps(msg)


def ops_to_rps(q: QbfInstance, rot: Optional[RotationSystem] = None) -> QbfInstance:
    """Split repeated variables along their rotation and pad short clauses with universals.

    A variable met in clauses C_1..C_n (rotation order) becomes V_1..V_n tied by
    the cyclic clauses V_i or not V_{i+1}; V_1 keeps the original quantifier and
    V_2..V_n are appended existentially. Clauses with fewer than three
    variables gain fresh universal variables quantified at the front.
    """
    _check_ops(q)
    rot = rot or RotationSystem.from_embedding(q)
    try:
        rot.check(q)
    except QbfError as exc:
        _logger.error(str(exc))
        raise NotOps(str(exc)) from exc
    fresh = count(q.max_variable + 1)
    clauses = [set(c) for c in q.clauses]
    cyclic: list[set[Literal]] = []
    appended: list[Variable] = []
    for variable in q.variables:
        order = rot.order(variable)
        if len(order) < 2:
            continue
        copies = [variable] + [next(fresh) for _ in order[1:]]
        for copy, index in zip(copies, order):
            literal = variable if variable in q.clauses[index] else -variable
            clauses[index].discard(literal)
            clauses[index].add(copy if literal > 0 else -copy)
        n = len(copies)
        cyclic.extend({copies[i], -copies[(i + 1) % n]} for i in range(n))
        appended.extend(copies[1:])
    padding: list[Variable] = []
    for clause in clauses + cyclic:
        while len(clause) < 3:
            extra = next(fresh)
            clause.add(extra)
            padding.append(extra)
    prefix = [(Quantifier.FORALL, v) for v in padding]
    prefix += list(q.prefix)
    prefix += [(Quantifier.EXISTS, v) for v in appended]
    result = QbfInstance(tuple(prefix), tuple(frozenset(c) for c in clauses + cyclic))
    violations = validate_rps(result)
    if violations:
        _logger.warning("ops_to_rps output breaks %s", ", ".join(kind.value for kind, _ in violations))
    _logger.info(
        "ops_to_rps: %d variables / %d clauses -> %d / %d",
        len(q.variables), len(q.clauses), len(result.variables), len(result.clauses),
    )
    return result


def rps_to_bpg(q: QbfInstance, hop_length: int = 1) -> ReductionOutput:
    """Bipartite graph with sizes in {2, 3} that is f-choosable iff q is true."""
    violations = validate_rps(q)
    if violations:
        error = NotRps(violations)
        _logger.error(str(error))
        raise error
    builder = GraphBuilder()
    templates = {
        Quantifier.FORALL: build_gadget(GadgetKind.FORALL_GRAPH),
        Quantifier.EXISTS: build_gadget(GadgetKind.EXISTS_GRAPH),
    }
    gadgets: dict[Variable, dict[str, VertexId]] = {}
    roles: dict[str, tuple[VertexId, ...]] = {}
    for quantifier, variable in q.prefix:
        template = templates[quantifier]
        mapping = builder.attach(template, prefix=f"x{variable}.")
        gadgets[variable] = {template.label(x): mapping[x] for x in template.sorted_vertices}
        roles[f"gadget:x{variable}"] = tuple(sorted(mapping.values()))
    outputs = 3 * len(q.clauses)
    chains: dict[Literal, tuple[PropagatorStage, ...]] = {}
    entries: dict[Literal, VertexId] = {}
    for variable in q.variables:
        for literal, role in ((variable, "out1"), (-variable, "out2")):
            entries[literal] = gadgets[variable][role]
            roles[literal_name(literal)] = (entries[literal],)
            if not outputs:
                continue
            stages = add_multioutput_propagator(
                builder, entries[literal], outputs, hop_length, f"{literal_name(literal)}:"
            )
            chains[literal] = tuple(stages)
            members: list[VertexId] = []
            for stage in stages:
                members.extend(v for half in stage.halves for r, v in half.items() if r != "in")
                members.append(stage.output)
                members.extend(stage.link or ())
            roles[f"prop:{literal_name(literal)}"] = tuple(sorted(set(members)))
    clause_nodes: list[VertexId] = []
    for i, clause in enumerate(q.clauses, start=1):
        node = builder.add_vertex(f"C{i}")
        clause_nodes.append(node)
        roles[f"C{i}"] = (node,)
        for j, literal in enumerate(clause_literals(clause), start=1):
            output = chains[literal][3 * (i - 1) + j - 1].output
            builder.add_edge(node, output)
            roles[f"slot:C{i}.{j}"] = (output,)
    graph = builder.build().with_labels(
        {entries[lit]: literal_name(lit) for lit in entries}
    )
    sizes = _reduction_sizes(graph, gadgets, chains, clause_nodes)
    if not is_bipartite(graph):
        msg = "Reduction output is not bipartite."
        _logger.error(msg)
        raise RuntimeError(msg)
    _logger.info(
        "rps_to_bpg: %d vertices, %d edges, %d clause nodes", graph.order, graph.size, len(clause_nodes)
    )
    return ReductionOutput(graph, sizes, roles, q, gadgets, chains, tuple(clause_nodes))


def _reduction_sizes(
    graph: Graph,
    gadgets: Mapping[Variable, Mapping[str, VertexId]],
    chains: Mapping[Literal, tuple[PropagatorStage, ...]],
    clause_nodes: list[VertexId],
) -> SizeFunction:
    sizes: dict[VertexId, int] = {v: 2 for gadget in gadgets.values() for v in gadget.values()}
    for stages in chains.values():
        for stage in stages:
            for half in stage.halves:
                sizes.update({half[role]: HALF_SIZES[role] for role in HALF_ROLES})
            sizes[stage.output] = 2
            sizes.update({v: 2 for v in stage.link or ()})
    sizes.update({v: 3 for v in clause_nodes})
    missing = graph.vertices - sizes.keys()
    if missing:
        raise RuntimeError(f"Unsized reduction vertices: {sorted(missing)[:5]}")
    return SizeFunction(sizes)


@lru_cache(maxsize=None)
def _forall_pattern(target: str) -> tuple[tuple[tuple[str, tuple[int, ...]], ...], int]:
    """A list pattern on the forall gadget that forces ``target`` to one color."""
    graph = build_gadget(GadgetKind.FORALL_GRAPH)
    sizes = gadget_sizes(GadgetKind.FORALL_GRAPH, graph)
    lists, forced = discover_forcing_pattern(graph, sizes, graph.vertex(target))
    pattern = tuple((graph.label(v), tuple(sorted(lists[v]))) for v in graph.sorted_vertices)
    return pattern, forced


_HALF_COLORS = sorted({c for colors in HALF_PATTERN.values() for c in colors} - {HALF_PATTERN["in"][0]})


def _resolve_tau(q: QbfInstance, tau: Optional[Mapping[Variable, bool]]) -> dict[Variable, bool]:
    if tau is None:
        found = find_falsifying_universal(q)
        if found is None:
            msg = "The formula is true; no falsifying universal assignment exists."
            _logger.error(msg)
            raise PreconditionError(msg)
        return found
    if set(tau) != set(q.universals):
        raise PreconditionError("tau must assign exactly the universal variables.")
    if eval_qbf(substitute(q, tau)):
        msg = "tau leaves the existential part satisfiable."
        _logger.error(msg)
        raise PreconditionError(msg)
    return dict(tau)


def synthesize_falsifying_assignment(
    r: ReductionOutput,
    tau: Optional[Mapping[Variable, bool]] = None,
) -> ListAssignment:
    """Adversary lists realizing ``tau``; solver-checked to be uncolorable.

    A literal is active when its node takes the literal's signal color. Active
    chains force every hub, so a clause whose three literals are false sees
    its three colors blocked by the outputs.
    """
    q = r.instance
    if q is None:
        raise PreconditionError("Reduction output carries no formula.")
    tau = _resolve_tau(q, tau)
    fresh = count(1)
    lists: dict[VertexId, frozenset[int]] = {}
    signal: dict[Literal, int] = {}
    for quantifier, variable in q.prefix:
        gadget = r.gadgets[variable]
        if quantifier is Quantifier.EXISTS:
            p, s = next(fresh), next(fresh)
            lists.update({v: frozenset({p, s}) for v in gadget.values()})
            signal[variable], signal[-variable] = p, s
            continue
        false_literal = -variable if tau[variable] else variable
        pattern, forced = _forall_pattern("out2" if tau[variable] else "out1")
        rename: dict[int, int] = {}
        for role, colors in pattern:
            for c in colors:
                rename.setdefault(c, next(fresh))
            lists[gadget[role]] = frozenset(rename[c] for c in colors)
        signal[false_literal] = rename[forced]
        signal[-false_literal] = next(fresh)
    slots: dict[tuple[int, int], tuple[Literal, int]] = {}
    for i, clause in enumerate(q.clauses):
        literals = clause_literals(clause)
        colors = [next(fresh) for _ in literals]
        slots.update({(i, j): (lit, c) for j, (lit, c) in enumerate(zip(literals, colors))})
        lists[r.clause_nodes[i]] = frozenset(colors)
    for literal, stages in r.chains.items():
        current = signal[literal]
        for index, stage in enumerate(stages):
            for half in stage.halves:
                rename = {HALF_PATTERN["in"][0]: current}
                rename.update({c: next(fresh) for c in _HALF_COLORS})
                lists.update({half[role]: frozenset(rename[c] for c in HALF_PATTERN[role]) for role in HALF_ROLES})
                current = rename[HALF_FORCED_OUT]
            hub_color = current
            owner, alpha = slots[divmod(index, 3)]
            lists[stage.output] = frozenset({hub_color, alpha if owner == literal else next(fresh)})
            if stage.link is not None:
                beta, gamma = next(fresh), next(fresh)
                lists[stage.link[0]] = frozenset({hub_color, beta})
                lists[stage.link[1]] = frozenset({beta, gamma})
                current = gamma
    assignment = ListAssignment(lists)
    wrong = [v for v in r.graph.sorted_vertices if len(assignment.get(v, ())) != r.sizes[v]]
    if wrong:
        msg = f"Synthesized lists miss the size function at {len(wrong)} vertices."
        _logger.error(msg)
        raise SynthesisFailed(msg)
    coloring = find_list_coloring(r.graph, assignment)
    if coloring is not None:
        msg = "Synthesized assignment is colorable."
        _logger.error(msg)
        raise SynthesisFailed(msg)
    _logger.info("falsifying assignment verified on %d vertices", r.graph.order)
    return assignment


def iter_random_assignments(
    sizes: Mapping[VertexId, int],
    rng: random.Random,
    universe: int = REDUCTION_SAMPLE_UNIVERSE,
) -> Iterator[ListAssignment]:
    palette = range(1, universe + 1)
    order = sorted(sizes)
    while True:
        yield ListAssignment({v: frozenset(rng.sample(palette, sizes[v])) for v in order})


def sample_colorability(
    graph: Graph,
    sizes: Mapping[VertexId, int],
    trials: int,
    rng: random.Random,
    universe: int = REDUCTION_SAMPLE_UNIVERSE,
) -> list[ListAssignment]:
    """Random assignments respecting ``sizes`` that turned out uncolorable."""
    failures: list[ListAssignment] = []
    samples = iter_random_assignments(sizes, rng, universe)
    for _ in range(trials):
        lists = next(samples)
        if find_list_coloring(graph, lists) is None:
            failures.append(lists)
    if failures:
        _logger.warning("%d of %d sampled assignments are uncolorable", len(failures), trials)
    return failures


@dataclass(frozen=True)
class Attachment:
    """Critical gadget copies hung off a graph; ``copies[v]`` maps gadget vertices to output ids."""

    graph: Graph
    k: int
    gadget: Graph
    witness: ListAssignment
    copies: Mapping[VertexId, tuple[Mapping[VertexId, VertexId], ...]] = field(default_factory=dict, hash=False)


def _check_size_function(g: Graph, f: Mapping[VertexId, int]) -> None:
    if set(f) != set(g.vertices):
        msg = "Size function must cover exactly the graph's vertices."
        _logger.error(msg)
        raise BadSizes(msg)
    bad = sorted(v for v, size in f.items() if size not in (2, 3))
    if bad:
        msg = f"Sizes must be 2 or 3; vertex {bad[0]} has {f[bad[0]]}."
        _logger.error(msg)
        raise BadSizes(msg)


def _unused_label(candidate: str, taken: set[str]) -> str:
    label, n = candidate, 1
    while label in taken:
        n += 1
        label = f"{candidate}~{n}"
    taken.add(label)
    return label


def attach_critical(g: Graph, f: Mapping[VertexId, int], k: int) -> Attachment:
    """Join k - f(v) copies of the k-choice-critical gadget to each vertex v by their u vertex."""
    _check_size_function(g, f)
    gadget, witness = build_choice_critical(k)
    u = gadget.vertex("u")
    vertices = set(g.vertices)
    edges = set(g.edges)
    labels = dict(g.labels)
    taken = set(labels.values())
    ids = count(max(g.vertices, default=-1) + 1)
    copies: dict[VertexId, tuple[Mapping[VertexId, VertexId], ...]] = {}
    for v in g.sorted_vertices:
        base = g.labels.get(v, f"v{v}")
        attached = []
        for j in range(1, k - f[v] + 1):
            mapping = {x: next(ids) for x in gadget.sorted_vertices}
            vertices.update(mapping.values())
            for x in gadget.sorted_vertices:
                labels[mapping[x]] = _unused_label(f"{base}/{j}/{gadget.label(x)}", taken)
            edges.update(normalize_edge(mapping[a], mapping[b]) for a, b in gadget.edges)
            edges.add(normalize_edge(v, mapping[u]))
            attached.append(mapping)
        if attached:
            copies[v] = tuple(attached)
    graph = Graph(frozenset(vertices), frozenset(edges), labels)
    _logger.info("attached %d gadget copies (k=%d): %d vertices", sum(map(len, copies.values())), k, graph.order)
    return Attachment(graph, k, gadget, witness, copies)


def bpg_to_ptfg3(g: Graph, f: Mapping[VertexId, int]) -> Graph:
    return attach_critical(g, f, 3).graph


def bpg_to_pg4(g: Graph, f: Mapping[VertexId, int]) -> Graph:
    return attach_critical(g, f, 4).graph


def lift_assignment(g: Graph, f: Mapping[VertexId, int], lists: ListAssignment, k: int = 3) -> ListAssignment:
    """Extend an f-assignment of g to a k-assignment of the attached graph.

    Every copy receives the gadget's uncolorable witness with one new color d
    added at its u and at the vertex it hangs from, so u is forced to d and
    any coloring of the lift restricts to a coloring of g from ``lists``.
    """
    attachment = attach_critical(g, f, k)
    wrong = [v for v in g.sorted_vertices if len(lists[v]) != f[v]]
    if wrong:
        raise BadSizes(f"List of vertex {wrong[0]} does not have size {f[wrong[0]]}.")
    u = attachment.gadget.vertex("u")
    fresh = count(1 + max(lists.colors() | attachment.witness.colors()))
    lifted: dict[VertexId, frozenset[int]] = {v: lists[v] for v in g.vertices}
    for v, copies in attachment.copies.items():
        for mapping in copies:
            d = next(fresh)
            for x, target in mapping.items():
                extra = {d} if x == u else set()
                lifted[target] = attachment.witness[x] | extra
            lifted[v] = lifted[v] | {d}
    return ListAssignment(lifted)


def color_via_attachments(
    g: Graph,
    f: Mapping[VertexId, int],
    lists: ListAssignment,
    k: int = 3,
) -> Optional[Coloring]:
    """Color each gadget copy, strip its u color from the vertex it hangs from, then color g."""
    attachment = attach_critical(g, f, k)
    u = attachment.gadget.vertex("u")
    coloring: Coloring = {}
    reduced = {v: set(lists[v]) for v in g.vertices}
    for v, copies in attachment.copies.items():
        for mapping in copies:
            part = attachment.graph.subgraph(mapping.values())
            local = find_list_coloring(part, lists.restrict(part.vertices))
            if local is None:
                _logger.info("gadget copy at vertex %d is uncolorable", v)
                return None
            coloring.update(local)
            reduced[v].discard(local[mapping[u]])
    if any(not colors for colors in reduced.values()):
        return None
    base = find_list_coloring(g, reduced)
    if base is None:
        return None
    coloring.update(base)
    if not is_proper_list_coloring(attachment.graph, lists, coloring):
        raise RuntimeError("Recombined coloring is not proper.")
    return coloring


__all__ = [
    "Attachment",
    "BadSizes",
    "NotOps",
    "NotRps",
    "PreconditionError",
    "RpsViolation",
    "SynthesisFailed",
    "attach_critical",
    "bpg_to_pg4",
    "bpg_to_ptfg3",
    "color_via_attachments",
    "iter_random_assignments",
    "lift_assignment",
    "ops_to_rps",
    "rps_to_bpg",
    "sample_colorability",
    "synthesize_falsifying_assignment",
    "validate_rps",
]
