"""Command reports, verdict records and the claim suite."""

from __future__ import annotations

import json
from pathlib import Path
import random

import pytest
import yaml

from chooselab.exporters.reports import CommandReport, dump_record, render_report
from chooselab.services.paper_claims import E2E_CORPUS_SIZE, ClaimResult, _w3_suite, e2e_corpus, verify_claims
from chooselab.services.reductions import validate_rps
from chooselab.services.run_config import RunConfig


def test_report_renders_same_mapping_as_yaml_and_json():
    report = CommandReport(["chooselab", "solve"], "COLORABLE", outputs={"coloring": {0: 1}}, text=["c 0 1"])

    as_yaml = yaml.safe_load(render_report(report))
    as_json = json.loads(render_report(report, as_json=True))

    assert as_yaml["verdict"] == as_json["verdict"] == "COLORABLE"
    assert as_yaml["command"] == "chooselab solve"
    assert "text" not in as_yaml
    assert "stats" not in as_json


def test_dump_record_writes_yaml(tmp_path: Path):
    destination = tmp_path / "records" / "c5.verdict.yaml"

    text = dump_record({"verdict": "NO", "stats": {"nodes": 3}}, destination)

    assert destination.read_text(encoding="utf-8") == text
    assert yaml.safe_load(text) == {"verdict": "NO", "stats": {"nodes": 3}}


def test_claim_line_format():
    assert ClaimResult("2", "75 vertices", True, "75 vertices, 219 edges").line() == (
        "75 vertices: PASS (75 vertices, 219 edges)"
    )
    assert ClaimResult("4", "W3", False).line() == "W3: FAIL"


def test_e2e_corpus_is_restricted():
    corpus = e2e_corpus(random.Random(1))

    assert len(corpus) == E2E_CORPUS_SIZE
    assert all(validate_rps(q) == [] for q in corpus)


def test_counterexample_section_passes():
    results = verify_claims(RunConfig(), ["2"])

    assert [r.name for r in results] == [
        "75 vertices",
        "164 vertices",
        "86 vertices before merging",
        "173 vertices before merging",
    ]
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_unknown_section_is_rejected():
    with pytest.raises(ValueError):
        verify_claims(RunConfig(), ["9"])


def test_w3_claim_checks_choice_criticality():
    passed, detail = _w3_suite(RunConfig())

    assert passed
    assert "3-choice-critical=True" in detail
    assert detail.endswith("fails at top,bottom")
