"""End-to-end runs of the command-line entry point on the sample data."""

from __future__ import annotations

import json
from pathlib import Path
import shutil

import pytest
import yaml

from chooselab import cli
from chooselab.cli import main
from chooselab.constants import EXIT_INPUT_ERROR, EXIT_INTERNAL_ERROR, EXIT_NEGATIVE, EXIT_OK
from chooselab.services.reductions import SynthesisFailed
from chooselab.services.graph_io import read_graph, read_lists, read_sizes

SAMPLE_DATA = Path(__file__).resolve().parents[1] / "sample_data"


def _copy(tmp_path: Path, *names: str) -> list[Path]:
    return [Path(shutil.copy(SAMPLE_DATA / name, tmp_path / name)) for name in names]


def test_solve_reports_coloring(capsys):
    code = main(["solve", str(SAMPLE_DATA / "k23.graph"), str(SAMPLE_DATA / "k23.lists")])
    out = capsys.readouterr().out

    assert code == EXIT_OK
    assert sum(line.startswith("c ") for line in out.splitlines()) == 5


def test_solve_uncolorable_w3(capsys, tmp_path: Path):
    dot = tmp_path / "w3.dot"

    code = main(["solve", str(SAMPLE_DATA / "w3.graph"), str(SAMPLE_DATA / "w3.lists"), "--dot", str(dot)])

    assert code == EXIT_NEGATIVE
    assert capsys.readouterr().out.splitlines()[0] == "UNCOLORABLE"
    assert dot.read_text(encoding="utf-8").startswith("graph G {")


def test_malformed_input_exits_with_input_error(capsys, tmp_path: Path):
    broken = tmp_path / "broken.graph"
    broken.write_text("p graph 2 1\nv 0\ne 0 1\n", encoding="utf-8")

    code = main(["solve", str(broken), str(SAMPLE_DATA / "k23.lists")])

    assert code == EXIT_INPUT_ERROR
    assert "Input error" in capsys.readouterr().err


def test_missing_file_exits_with_input_error(tmp_path: Path):
    assert main(["qbf-eval", str(tmp_path / "absent.qdimacs")]) == EXIT_INPUT_ERROR


def test_decide_even_cycle_via_recognizer(capsys, tmp_path: Path):
    graph, sizes = _copy(tmp_path, "c6.graph", "c6.sizes")

    code = main(["decide", str(graph), str(sizes)])
    out = capsys.readouterr().out

    assert code == EXIT_OK
    assert out.splitlines()[0] == "YES"
    assert "EvenCycle" in out
    assert "decided by the core recognizer" in out


def test_decide_odd_cycle_writes_witness_and_record(capsys, tmp_path: Path):
    graph_path, sizes_path = _copy(tmp_path, "c5.graph", "c5.sizes")

    code = main(["decide", str(graph_path), str(sizes_path)])

    assert code == EXIT_NEGATIVE
    assert capsys.readouterr().out.splitlines()[0] == "NO"
    witness = read_lists(tmp_path / "c5.witness.lists")
    sizes = read_sizes(sizes_path)
    assert all(len(witness[v]) == sizes[v] for v in read_graph(graph_path).vertices)
    record = yaml.safe_load((tmp_path / "c5.verdict.yaml").read_text(encoding="utf-8"))
    assert record["verdict"] == "NO"
    assert record["witness"] == str(tmp_path / "c5.witness.lists")


def test_decide_json_report(capsys, tmp_path: Path):
    graph, sizes = _copy(tmp_path, "c6.graph", "c6.sizes")

    code = main(["decide", str(graph), str(sizes), "--json"])
    data = json.loads(capsys.readouterr().out)

    assert code == EXIT_OK
    assert data["verdict"] == "YES"
    assert data["exit_code"] == EXIT_OK
    assert data["command"].startswith("chooselab decide")
    assert data["outputs"]["decided_by"] == "recognizer"
    assert "stats" not in data


def test_gadget_writes_graph_sizes_and_lists(capsys, tmp_path: Path):
    prefix = tmp_path / "w3"

    code = main(["gadget", "W3", "--out", str(prefix)])

    assert code == EXIT_OK
    assert read_graph(tmp_path / "w3.graph").order == 8
    assert sorted(read_sizes(tmp_path / "w3.sizes").values()).count(2) == 1
    assert len(read_lists(tmp_path / "w3.lists")) == 8
    assert "W3: 8 vertices, 15 edges" in capsys.readouterr().out


def test_gadget_rejects_bad_parameters():
    assert main(["gadget", "MultioutputPropagator", "--outputs", "0"]) == EXIT_INPUT_ERROR


def test_reduce_rps_to_bpg_with_synthesis(capsys, tmp_path: Path):
    prefix = tmp_path / "rps"

    code = main(["reduce", "rps-to-bpg", str(SAMPLE_DATA / "two_clause_rps.qdimacs"), "--out", str(prefix), "--synthesize"])
    out = capsys.readouterr().out

    assert code == EXIT_OK
    assert "bipartite check: PASS" in out
    assert (tmp_path / "rps.roles").exists()
    solved = main(["solve", str(tmp_path / "rps.graph"), str(tmp_path / "rps.lists")])
    assert solved == EXIT_NEGATIVE


def test_reduce_rejects_unrestricted_formula():
    code = main(["reduce", "rps-to-bpg", str(SAMPLE_DATA / "forall_exists_true.qdimacs")])

    assert code == EXIT_INPUT_ERROR


def test_reduce_ops_to_rps_prints_formula(capsys):
    code = main(["reduce", "ops-to-rps", str(SAMPLE_DATA / "forall_exists_true.qdimacs")])
    out = capsys.readouterr().out

    assert code == EXIT_OK
    assert out.startswith("p cnf ")


def test_reduce_bpg_to_ptfg3(capsys):
    code = main(["reduce", "bpg-to-ptfg3", str(SAMPLE_DATA / "c6.graph"), str(SAMPLE_DATA / "c6.sizes")])
    out = capsys.readouterr().out

    assert code == EXIT_OK
    assert out.splitlines()[0] == "702 vertices, 1344 edges"
    assert "triangle-free check: PASS" in out


def test_qbf_eval(capsys):
    assert main(["qbf-eval", str(SAMPLE_DATA / "forall_exists_true.qdimacs")]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "TRUE"

    assert main(["qbf-eval", str(SAMPLE_DATA / "forall_false.qdimacs")]) == EXIT_NEGATIVE
    assert capsys.readouterr().out.splitlines() == ["FALSE", "falsifying universal: 1=0"]


def test_verify_paper_single_section(capsys):
    code = main(["verify-paper", "--section", "2"])
    out = capsys.readouterr().out.splitlines()

    assert code == EXIT_OK
    assert out[0] == "[section 2]"
    assert "75 vertices: PASS" in out[1]
    assert out[-1] == "4/4 claims passed"


def test_search_verdict_is_marked_as_search(capsys, tmp_path: Path):
    graph, sizes = _copy(tmp_path, "c5.graph", "c5.sizes")

    main(["decide", str(graph), str(sizes), "--json"])
    data = json.loads(capsys.readouterr().out)

    assert data["outputs"]["decided_by"] == "search"
    assert data["stats"]["nodes"] >= 1


def _raise(error: Exception):
    def fail(*args, **kwargs):
        raise error

    return fail


def test_decider_failure_exits_with_internal_error(capsys, monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    graph, sizes = _copy(tmp_path, "c5.graph", "c5.sizes")
    monkeypatch.setattr(cli, "decide_f_choosable", _raise(RuntimeError("witness turned out colorable")))

    code = main(["decide", str(graph), str(sizes)])

    assert code == EXIT_INTERNAL_ERROR
    assert "Internal error: witness turned out colorable" in capsys.readouterr().err


def test_synthesis_failure_exits_with_internal_error(monkeypatch: pytest.MonkeyPatch, tmp_path: Path):
    monkeypatch.setattr(cli, "synthesize_falsifying_assignment", _raise(SynthesisFailed("colorable")))
    argv = ["reduce", "rps-to-bpg", str(SAMPLE_DATA / "two_clause_rps.qdimacs"), "--out", str(tmp_path / "rps"), "--synthesize"]

    assert main(argv) == EXIT_INTERNAL_ERROR
