"""Claim-by-claim reproduction suite behind ``verify-paper``."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
import logging
import random
import time

import networkx as nx

from chooselab.models.assignments import SizeFunction
from chooselab.models.graph import Graph
from chooselab.models.qbf import QbfInstance
from chooselab.services.choosability import decide_f_choosable, is_choice_critical, is_restrictly_choosable
from chooselab.services.gadgets import GadgetKind, bad_assignment, build_counterexample, build_gadget, paper_assignment
from chooselab.services.lemma_checks import check_lemma
from chooselab.services.list_coloring import find_list_coloring
from chooselab.services.qbf import eval_qbf, random_ops_instance, random_rps_instance
from chooselab.services.reductions import (
    bpg_to_pg4,
    bpg_to_ptfg3,
    ops_to_rps,
    rps_to_bpg,
    sample_colorability,
    synthesize_falsifying_assignment,
    validate_rps,
)
from chooselab.services.run_config import RunConfig
from chooselab.services.structure import classify_2_choosable, is_bipartite, is_triangle_free, planar_necessary

_logger = logging.getLogger(__name__)

SECTIONS = ("1", "2", "3", "4")
E2E_CORPUS_SIZE = 10


@dataclass(frozen=True)
class ClaimResult:
    section: str
    name: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status}" + (f" ({self.detail})" if self.detail else "")

    def as_dict(self) -> dict[str, object]:
        return {
            "section": self.section,
            "claim": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "elapsed_s": round(self.elapsed, 3),
        }


def _from_networkx(graph: nx.Graph) -> Graph:
    return Graph.from_edges(graph.nodes, graph.edges)


def _atlas_sweep(config: RunConfig) -> tuple[bool, str]:
    checked = mismatches = 0
    for candidate in nx.graph_atlas_g():
        order = candidate.number_of_nodes()
        if order == 0 or order > config.max_graph_order or not nx.is_connected(candidate):
            continue
        graph = _from_networkx(candidate)
        fast = bool(classify_2_choosable(graph))
        exact = decide_f_choosable(graph, SizeFunction.constant(graph.vertices, 2), config.budget).answer
        checked += 1
        if fast != exact:
            mismatches += 1
            _logger.error("recognizer disagrees on atlas graph with edges %s", sorted(candidate.edges))
    return mismatches == 0, f"{checked} connected graphs, {mismatches} disagreements"


def _counterexample(k: int, compact: bool) -> tuple[bool, str]:
    graph = build_counterexample(k, compact)
    lists = bad_assignment(k, compact, graph)
    expected = {(4, True): 75, (3, True): 164, (4, False): 86, (3, False): 173}[(k, compact)]
    checks = {
        "order": graph.order == expected,
        "list sizes": all(len(lists[v]) == k for v in graph.vertices),
        "uncolorable": find_list_coloring(graph, lists) is None,
        "planar necessary": planar_necessary(graph),
    }
    if k == 3:
        checks["triangle-free"] = bool(is_triangle_free(graph))
    failed = [name for name, ok in checks.items() if not ok]
    return not failed, "failed: " + ", ".join(failed) if failed else f"{graph.order} vertices, {graph.size} edges"


def _lemma(lemma_id: str, config: RunConfig) -> Callable[[], tuple[bool, str]]:
    def run() -> tuple[bool, str]:
        report = check_lemma(lemma_id, config.trials_for(lemma_id), config.seed, strict=False)
        detail = f"{report.checked} instances"
        if report.violations:
            detail += f", first violation: {report.violations[0]}"
        return report.passed, detail

    return run


def _ops_to_rps(config: RunConfig) -> tuple[bool, str]:
    rng = random.Random(config.seed)
    trials = config.trials_for("OPS")
    failures = 0
    for _ in range(trials):
        source = random_ops_instance(rng)
        target = ops_to_rps(source)
        if validate_rps(target) or eval_qbf(source) != eval_qbf(target):
            failures += 1
    return failures == 0, f"{trials} random instances, {failures} failures"


def e2e_corpus(rng: random.Random, size: int = E2E_CORPUS_SIZE) -> list[QbfInstance]:
    """Hand-picked true and false restricted instances topped up with random ones."""
    corpus = [
        QbfInstance.pi2([1, 2, 3], [], [{1, 2, 3}]),
        QbfInstance.pi2([1, 2], [3], [{1, 2, 3}, {1, 2, -3}]),
        QbfInstance.pi2([1], [2, 3], [{1, 2, 3}]),
        QbfInstance.pi2([1, 2], [3], [{-1, 2, 3}, {1, -2, -3}]),
    ]
    while len(corpus) < size:
        corpus.append(random_rps_instance(rng))
    return corpus


def _rps_structure(config: RunConfig) -> tuple[bool, str]:
    problems: list[str] = []
    corpus = e2e_corpus(random.Random(config.seed))
    for index, q in enumerate(corpus, start=1):
        out = rps_to_bpg(q)
        m = len(q.clauses)
        if sorted(out.sizes[c] for c in out.clause_nodes) != [3] * m:
            problems.append(f"#{index} clause nodes")
        if len(out.chains) != 2 * len(q.variables) or any(len(s) != 3 * m for s in out.chains.values()):
            problems.append(f"#{index} propagators")
        if not is_bipartite(out.graph) or not planar_necessary(out.graph):
            problems.append(f"#{index} bipartite/planar")
        if set(out.sizes.values()) - {2, 3}:
            problems.append(f"#{index} sizes")
    return not problems, ", ".join(problems) or f"{len(corpus)} instances"


def _directions(config: RunConfig) -> tuple[bool, str]:
    rng = random.Random(config.seed)
    corpus = e2e_corpus(rng)
    trials = config.trials_for("E2E")
    falses = trues = 0
    problems: list[str] = []
    for index, q in enumerate(corpus, start=1):
        out = rps_to_bpg(q)
        if eval_qbf(q):
            trues += 1
            failures = sample_colorability(out.graph, out.sizes, trials, rng, config.sample_universe)
            if failures:
                problems.append(f"#{index} true but {len(failures)} uncolorable samples")
        else:
            falses += 1
            lists = synthesize_falsifying_assignment(out)
            if find_list_coloring(out.graph, lists) is not None:
                problems.append(f"#{index} witness colorable")
    return not problems, ", ".join(problems) or f"{falses} false with witnesses, {trues} true x {trials} samples"


def _w3_suite(config: RunConfig) -> tuple[bool, str]:
    graph = build_gadget(GadgetKind.W3)
    lists = paper_assignment(GadgetKind.W3, graph)
    restricted = find_list_coloring(graph, lists) is None
    critical = is_choice_critical(graph, 3, config.budget)
    report = is_restrictly_choosable(graph, 3, config.budget)
    failing = ",".join(graph.label(v) for v in report.failing_vertices()) or "none"
    detail = f"figure lists uncolorable={restricted}, 3-choice-critical={critical}, fails at {failing}"
    return restricted and critical, detail


def _attachments() -> tuple[bool, str]:
    single = Graph.from_edges([0], [])
    ptfg = bpg_to_ptfg3(single, {0: 2})
    pg_two = bpg_to_pg4(single, {0: 2})
    pg_three = bpg_to_pg4(single, {0: 3})
    ok = (
        ptfg.order == 117
        and bool(is_triangle_free(ptfg))
        and pg_two.order == 1 + 2 * 86
        and pg_three.order == 1 + 86
        and planar_necessary(pg_two)
    )
    return ok, f"{ptfg.order}, {pg_two.order}, {pg_three.order} vertices"


def _claims(config: RunConfig) -> list[tuple[str, str, Callable[[], tuple[bool, str]]]]:
    return [
        ("1", f"2-choosability recognizer vs exact search (<= {config.max_graph_order} vertices)",
         lambda: _atlas_sweep(config)),
        ("2", "75 vertices", lambda: _counterexample(4, True)),
        ("2", "164 vertices", lambda: _counterexample(3, True)),
        ("2", "86 vertices before merging", lambda: _counterexample(4, False)),
        ("2", "173 vertices before merging", lambda: _counterexample(3, False)),
        ("3", "half-propagator opposite colors (HP1)", _lemma("HP1", config)),
        ("3", "half-propagator any in color extends (HP2)", _lemma("HP2", config)),
        ("3", "half-propagator at most one bad in color (HP3)", _lemma("HP3", config)),
        ("3", "half-propagator forcing pattern (HP4)", _lemma("HP4", config)),
        ("3", "OPS to RPS preserves truth", lambda: _ops_to_rps(config)),
        ("3", "RPS to BPG structure", lambda: _rps_structure(config)),
        ("3", "RPS to BPG directions", lambda: _directions(config)),
        ("4", "odd cycle 2-lists closed form (L41)", _lemma("L41", config)),
        ("4", "prism completions (L42)", _lemma("L42", config)),
        ("4", "W2 incomp <= 1 (L43)", _lemma("L43", config)),
        ("4", "H1 3-choosable (L44)", _lemma("L44", config)),
        ("4", "H1 not 3-restrictly-choosable (L45)", _lemma("L45", config)),
        ("4", "W1 incomp <= 1 (L47)", _lemma("L47", config)),
        ("4", "4-choice-critical composite (L48)", _lemma("L48", config)),
        ("4", "W3 3-choice-critical", lambda: _w3_suite(config)),
        ("4", "critical gadget attachments", _attachments),
    ]


def verify_claims(config: RunConfig, sections: Iterable[str] | None = None) -> list[ClaimResult]:
    wanted = set(sections or SECTIONS)
    unknown = wanted - set(SECTIONS)
    if unknown:
        raise ValueError(f"Unknown section(s) {', '.join(sorted(unknown))}; expected {', '.join(SECTIONS)}.")
    results: list[ClaimResult] = []
    for section, name, run in _claims(config):
        if section not in wanted:
            continue
        started = time.perf_counter()
        try:
            passed, detail = run()
        except Exception as exc:  # a crashing claim is reported, not fatal
            _logger.exception("claim %r raised", name)
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        result = ClaimResult(section, name, passed, detail, time.perf_counter() - started)
        _logger.info(result.line())
        results.append(result)
    return results


__all__ = ["ClaimResult", "E2E_CORPUS_SIZE", "SECTIONS", "e2e_corpus", "verify_claims"]
