"""Command-line surface: solve, decide, gadget, reduce, qbf-eval and verify-paper."""

from __future__ import annotations

import argparse
from collections.abc import Callable, Sequence
import logging
from pathlib import Path
import sys
import time
from typing import Optional

from chooselab.constants import (
    DEFAULT_SEED,
    EXIT_BUDGET,
    EXIT_INPUT_ERROR,
    EXIT_INTERNAL_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
)
from chooselab.exporters.dot import write_dot
from chooselab.exporters.reports import CommandReport, dump_record, render_report
from chooselab.models.assignments import ListAssignment
from chooselab.models.graph import Graph, GraphError
from chooselab.models.qbf import QbfError
from chooselab.services.choosability import BudgetExceeded, SizeFunctionError, decide_f_choosable
from chooselab.services.gadgets import (
    BadParams,
    GadgetKind,
    bad_assignment,
    build_choice_critical,
    build_gadget,
    gadget_sizes,
    paper_assignment,
)
from chooselab.services.graph_io import (
    parse_graph,
    parse_lists,
    parse_sizes,
    serialize_graph,
    serialize_lists,
    serialize_roles,
    serialize_sizes,
    write_text,
)
from chooselab.services.list_coloring import DomainMismatch, solve_list_coloring
from chooselab.services.paper_claims import SECTIONS, verify_claims
from chooselab.services.qbf import eval_qbf, find_falsifying_universal, parse_qbf, serialize_qbf
from chooselab.services.reductions import (
    BadSizes,
    NotOps,
    NotRps,
    PreconditionError,
    bpg_to_pg4,
    bpg_to_ptfg3,
    ops_to_rps,
    rps_to_bpg,
    synthesize_falsifying_assignment,
)
from chooselab.services.run_config import RunConfig, RunConfigError, load_run_config
from chooselab.services.structure import classify_2_choosable, is_bipartite, is_triangle_free
from chooselab.services.text_formats import ParseError

_logger = logging.getLogger(__name__)

INPUT_ERRORS = (
    ParseError,
    RunConfigError,
    DomainMismatch,
    GraphError,
    QbfError,
    BadParams,
    BadSizes,
    NotOps,
    NotRps,
    SizeFunctionError,
    PreconditionError,
    OSError,
)
REDUCE_STEPS = ("ops-to-rps", "rps-to-bpg", "bpg-to-ptfg3", "bpg-to-pg4")


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _cmd_solve(args: argparse.Namespace, config: RunConfig) -> CommandReport:
    graph = parse_graph(_read(args.graph))
    lists = parse_lists(_read(args.lists))
    result = solve_list_coloring(graph, lists)
    report = CommandReport(sys.argv, "COLORABLE" if result.colorable else "UNCOLORABLE")
    report.stats = {"nodes": result.nodes}
    if result.coloring is None:
        report.exit_code = EXIT_NEGATIVE
        report.text.append("UNCOLORABLE")
    else:
        report.outputs["coloring"] = {v: result.coloring[v] for v in graph.sorted_vertices}
        report.text.extend(f"c {v} {result.coloring[v]}" for v in graph.sorted_vertices)
    report.text.append(f"search nodes: {result.nodes}")
    if args.dot:
        write_dot(graph, args.dot, lists)
        report.outputs["dot"] = str(args.dot)
    return report


def _write_negative(
    report: CommandReport,
    args: argparse.Namespace,
    witness: ListAssignment,
    record: dict[str, object],
) -> None:
    stem = args.graph.with_suffix("")
    witness_path = args.witness or stem.with_name(stem.name + ".witness.lists")
    record_path = stem.with_name(stem.name + ".verdict.yaml")
    write_text(witness_path, serialize_lists(witness))
    dump_record({**record, "witness": str(witness_path)}, record_path)
    report.outputs.update({"witness": str(witness_path), "record": str(record_path)})
    report.text.append(f"witness written to {witness_path}")


def _cmd_decide(args: argparse.Namespace, config: RunConfig) -> CommandReport:
    graph = parse_graph(_read(args.graph))
    sizes = parse_sizes(_read(args.sizes))
    report = CommandReport(sys.argv, "")
    record: dict[str, object] = {"graph": str(args.graph), "sizes": str(args.sizes)}
    if sizes.values_set() == {2} and set(sizes) == set(graph.vertices):
        recognized = classify_2_choosable(graph)
        classes = [c.kind.value for c in recognized.components]
        report.outputs["core_classes"] = classes
        report.text.append(f"core classes: {', '.join(classes) or 'none'}")
        if recognized:
            report.verdict = "YES"
            report.outputs["decided_by"] = "recognizer"
            report.text.insert(0, "YES")
            report.text.append("decided by the core recognizer; no adversary search")
            return report
    try:
        verdict = decide_f_choosable(graph, sizes, config.budget)
    except BudgetExceeded as exc:
        report.verdict, report.exit_code = "BUDGET", EXIT_BUDGET
        report.stats = exc.stats.as_dict()
        report.text.append(f"BUDGET exhausted after {exc.stats.nodes} nodes")
        return report
    report.stats = verdict.stats.as_dict()
    report.outputs["decided_by"] = "search"
    if verdict:
        report.verdict = "YES"
        report.text.insert(0, "YES")
        return report
    report.verdict, report.exit_code = "NO", EXIT_NEGATIVE
    report.text.insert(0, "NO")
    _write_negative(report, args, verdict.witness, {**record, "verdict": "NO", "stats": report.stats})
    return report


def _gadget_lists(kind: GadgetKind, graph: Graph, pair: Optional[Sequence[int]]) -> Optional[ListAssignment]:
    if kind in (GadgetKind.H1, GadgetKind.CRIT4):
        return build_choice_critical(3 if kind is GadgetKind.H1 else 4)[1]
    if kind is GadgetKind.COUNTEREXAMPLE_PLANAR_4:
        return bad_assignment(4, graph=graph)
    if kind is GadgetKind.COUNTEREXAMPLE_TRIANGLE_FREE_3:
        return bad_assignment(3, graph=graph)
    if kind in (GadgetKind.W1, GadgetKind.W2):
        if pair is None:
            return None
        return paper_assignment(kind, graph, a=pair[0], b=pair[1])
    if kind in (GadgetKind.W3, GadgetKind.HALF_PROPAGATOR, GadgetKind.PROPAGATOR):
        return paper_assignment(kind, graph)
    return None


def _cmd_gadget(args: argparse.Namespace, config: RunConfig) -> CommandReport:
    kind = GadgetKind(args.kind)
    graph = build_gadget(kind, outputs=args.outputs, hop_length=args.hop_length)
    sizes = gadget_sizes(kind, graph, outputs=args.outputs, hop_length=args.hop_length)
    lists = _gadget_lists(kind, graph, args.pair)
    report = CommandReport(sys.argv, "BUILT")
    report.outputs = {"kind": kind.value, "vertices": graph.order, "edges": graph.size}
    report.text.append(f"{kind.value}: {graph.order} vertices, {graph.size} edges")
    if args.out is not None:
        written = [
            write_text(args.out.with_suffix(".graph"), serialize_graph(graph)),
            write_text(args.out.with_suffix(".sizes"), serialize_sizes(sizes)),
        ]
        if lists is not None:
            written.append(write_text(args.out.with_suffix(".lists"), serialize_lists(lists)))
        report.outputs["files"] = [str(p) for p in written]
        report.text.extend(f"wrote {p}" for p in written)
    else:
        report.text.append(serialize_graph(graph).rstrip("\n"))
    if args.dot:
        write_dot(graph, args.dot, lists)
        report.outputs["dot"] = str(args.dot)
    return report


def _reduce_qbf(args: argparse.Namespace, report: CommandReport) -> None:
    if len(args.inputs) != 1:
        raise BadParams(f"{args.step} takes one QDIMACS file.")
    q = parse_qbf(_read(args.inputs[0]))
    if args.step == "ops-to-rps":
        text = serialize_qbf(ops_to_rps(q))
        if args.out is None:
            report.text.append(text.rstrip("\n"))
        else:
            report.text.append(f"wrote {write_text(args.out.with_suffix('.qdimacs'), text)}")
        return
    out = rps_to_bpg(q, hop_length=args.hop_length)
    bipartite = bool(is_bipartite(out.graph))
    report.outputs.update({"vertices": out.graph.order, "edges": out.graph.size, "bipartite": bipartite})
    report.text.append(f"{out.graph.order} vertices, {out.graph.size} edges, {len(out.clause_nodes)} clause nodes")
    report.text.append(f"bipartite check: {'PASS' if bipartite else 'FAIL'}")
    if not bipartite:
        report.exit_code = EXIT_NEGATIVE
    if args.out is None:
        return
    written = [
        write_text(args.out.with_suffix(".graph"), serialize_graph(out.graph)),
        write_text(args.out.with_suffix(".sizes"), serialize_sizes(out.sizes)),
        write_text(args.out.with_suffix(".roles"), serialize_roles(out.roles)),
    ]
    if args.synthesize and not eval_qbf(q):
        lists = synthesize_falsifying_assignment(out)
        written.append(write_text(args.out.with_suffix(".lists"), serialize_lists(lists)))
    report.outputs["files"] = [str(p) for p in written]
    report.text.extend(f"wrote {p}" for p in written)


def _cmd_reduce(args: argparse.Namespace, config: RunConfig) -> CommandReport:
    report = CommandReport(sys.argv, "BUILT")
    if args.step in ("ops-to-rps", "rps-to-bpg"):
        _reduce_qbf(args, report)
        return report
    if len(args.inputs) != 2:
        raise BadParams(f"{args.step} takes a graph file and a sizes file.")
    graph = parse_graph(_read(args.inputs[0]))
    sizes = parse_sizes(_read(args.inputs[1]))
    if args.step == "bpg-to-ptfg3":
        result = bpg_to_ptfg3(graph, sizes)
        triangle_free = bool(is_triangle_free(result))
        report.outputs["triangle_free"] = triangle_free
        report.text.append(f"triangle-free check: {'PASS' if triangle_free else 'FAIL'}")
    else:
        result = bpg_to_pg4(graph, sizes)
    report.outputs.update({"vertices": result.order, "edges": result.size})
    report.text.insert(0, f"{result.order} vertices, {result.size} edges")
    if args.out is None:
        report.text.append(serialize_graph(result).rstrip("\n"))
    else:
        report.text.append(f"wrote {write_text(args.out.with_suffix('.graph'), serialize_graph(result))}")
    return report


def _cmd_qbf_eval(args: argparse.Namespace, config: RunConfig) -> CommandReport:
    q = parse_qbf(_read(args.formula))
    value = eval_qbf(q)
    report = CommandReport(sys.argv, "TRUE" if value else "FALSE")
    report.text.append(report.verdict)
    if not value:
        report.exit_code = EXIT_NEGATIVE
        if q.is_pi2():
            tau = find_falsifying_universal(q) or {}
            report.outputs["falsifying_universal"] = {v: int(b) for v, b in sorted(tau.items())}
            report.text.append("falsifying universal: " + " ".join(f"{v}={int(b)}" for v, b in sorted(tau.items())))
    return report


def _cmd_verify_paper(args: argparse.Namespace, config: RunConfig) -> CommandReport:
    results = verify_claims(config, args.section or None)
    failed = [r for r in results if not r.passed]
    report = CommandReport(sys.argv, "PASS" if not failed else "FAIL")
    report.exit_code = EXIT_OK if not failed else EXIT_NEGATIVE
    report.outputs["claims"] = [r.as_dict() for r in results]
    report.outputs["seed"] = config.seed
    current = None
    for result in results:
        if result.section != current:
            current = result.section
            report.text.append(f"[section {current}]")
        report.text.append(result.line())
    report.text.append(f"{len(results) - len(failed)}/{len(results)} claims passed")
    return report


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], CommandReport]] = {
    "solve": _cmd_solve,
    "decide": _cmd_decide,
    "gadget": _cmd_gadget,
    "reduce": _cmd_reduce,
    "qbf-eval": _cmd_qbf_eval,
    "verify-paper": _cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"Random seed (default {DEFAULT_SEED}).")
    common.add_argument("--budget", type=int, default=None, help="Node budget of the choosability search.")
    common.add_argument("--trials", type=int, default=None, help="Trial count for every sampled check.")
    common.add_argument("--config", type=Path, default=None, help="YAML run configuration.")
    common.add_argument("--json", action="store_true", help="Print the report as JSON.")
    common.add_argument("--verbose", action="store_true", help="Debug logging to stderr.")

    parser = argparse.ArgumentParser(prog="chooselab", description="List coloring and choosability workbench.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="List-color a graph from given lists.")
    solve.add_argument("graph", type=Path)
    solve.add_argument("lists", type=Path)
    solve.add_argument("--dot", type=Path, default=None, help="Also write the listed graph as DOT.")

    decide = sub.add_parser("decide", parents=[common], help="Decide f-choosability.")
    decide.add_argument("graph", type=Path)
    decide.add_argument("sizes", type=Path)
    decide.add_argument("--witness", type=Path, default=None, help="Witness lists path on NO.")

    gadget = sub.add_parser("gadget", parents=[common], help="Build a gadget graph.")
    gadget.add_argument("kind", choices=[k.value for k in GadgetKind])
    gadget.add_argument("--outputs", type=int, default=3, help="Outputs of a multioutput propagator.")
    gadget.add_argument("--hop-length", type=int, default=1, help="Propagators between outputs.")
    gadget.add_argument("--pair", type=int, nargs=2, default=None, metavar=("A", "B"),
                        help="Blocked pair (a, b) for the W1/W2 published lists.")
    gadget.add_argument("--out", type=Path, default=None, help="Output prefix for .graph/.sizes/.lists.")
    gadget.add_argument("--dot", type=Path, default=None)

    reduce = sub.add_parser("reduce", parents=[common], help="Run one reduction step.")
    reduce.add_argument("step", choices=REDUCE_STEPS)
    reduce.add_argument("inputs", type=Path, nargs="+")
    reduce.add_argument("--out", type=Path, default=None, help="Output prefix.")
    reduce.add_argument("--hop-length", type=int, default=1)
    reduce.add_argument("--synthesize", action="store_true",
                        help="rps-to-bpg: also write falsifying lists when the formula is false.")

    qbf_eval = sub.add_parser("qbf-eval", parents=[common], help="Evaluate a QDIMACS formula.")
    qbf_eval.add_argument("formula", type=Path)

    verify = sub.add_parser("verify-paper", parents=[common], help="Reproduce every claim.")
    verify.add_argument("--section", action="append", choices=SECTIONS, default=None)
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    started = time.perf_counter()
    try:
        config = load_run_config(args.config) if args.config else RunConfig()
        config = config.overridden(seed=args.seed, budget=args.budget, trials=args.trials)
        report = COMMANDS[args.command](args, config)
    except INPUT_ERRORS as exc:
        _logger.debug("input error", exc_info=True)
        print(f"Input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except BudgetExceeded as exc:
        print(f"Budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except RuntimeError as exc:
        _logger.error("internal error: %s", exc, exc_info=True)
        print(f"Internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    report.command = ["chooselab", *(argv if argv is not None else sys.argv[1:])]
    report.elapsed = time.perf_counter() - started
    if args.json:
        sys.stdout.write(render_report(report, as_json=True))
    else:
        for line in report.text:
            print(line)
    return report.exit_code


__all__ = ["COMMANDS", "build_parser", "main"]
