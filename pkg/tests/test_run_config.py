"""Run configuration loading and command-line overrides."""

from __future__ import annotations

from pathlib import Path

import pytest

from chooselab.constants import DEFAULT_SEARCH_BUDGET, DEFAULT_SEED, DEFAULT_TRIALS
from chooselab.services.run_config import TRIAL_KEYS, RunConfig, RunConfigError, load_run_config

SAMPLE_DATA = Path(__file__).resolve().parents[1] / "sample_data"


def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "run.yaml"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults():
    config = RunConfig()

    assert config.seed == DEFAULT_SEED
    assert config.budget == DEFAULT_SEARCH_BUDGET
    assert config.trials_for("HP2") == DEFAULT_TRIALS["HP2"]
    assert config.trials_for("HP1") == 0


def test_sample_config_matches_defaults():
    config = load_run_config(SAMPLE_DATA / "verify_paper.yaml")

    assert config.seed == DEFAULT_SEED
    assert config.max_graph_order == 7
    assert config.trials_for("E2E") == DEFAULT_TRIALS["E2E"]


def test_partial_config_keeps_other_defaults(tmp_path: Path):
    config = load_run_config(_write(tmp_path, "seed: 5\ntrials:\n  L43: 12\n"))

    assert config.seed == 5
    assert config.trials_for("L43") == 12
    assert config.trials_for("L47") == DEFAULT_TRIALS["L47"]


def test_empty_file_is_default(tmp_path: Path):
    assert load_run_config(_write(tmp_path, "")) == RunConfig()


@pytest.mark.parametrize(
    "text",
    [
        "- 1\n- 2\n",
        "colour: red\n",
        "seed: -1\n",
        "seed: true\n",
        "budget: lots\n",
        "max_graph_order: 9\n",
        "trials: 5\n",
        "trials:\n  L99: 3\n",
        "trials:\n  L43: -2\n",
        "seed: [unclosed\n",
    ],
)
def test_invalid_configs_are_rejected(tmp_path: Path, text: str):
    with pytest.raises(RunConfigError):
        load_run_config(_write(tmp_path, text))


def test_missing_file_is_rejected(tmp_path: Path):
    with pytest.raises(RunConfigError):
        load_run_config(tmp_path / "absent.yaml")


def test_overrides_apply_to_every_check():
    config = RunConfig().overridden(seed=3, trials=2)

    assert config.seed == 3
    assert config.budget == DEFAULT_SEARCH_BUDGET
    assert {config.trials_for(key) for key in TRIAL_KEYS} == {2}
    assert RunConfig().overridden() == RunConfig()
