"""YAML run configuration for the batch commands."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import yaml

from chooselab.constants import (
    DEFAULT_SEARCH_BUDGET,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    MAX_ATLAS_ORDER,
    REDUCTION_SAMPLE_UNIVERSE,
)
from chooselab.services.lemma_checks import LEMMA_IDS

TRIAL_KEYS = (*LEMMA_IDS, "OPS", "E2E")
_KNOWN_KEYS = {"seed", "budget", "trials", "sample_universe", "max_graph_order"}


class RunConfigError(ValueError):
    """Raised when the run configuration is invalid."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_SEARCH_BUDGET
    trials: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_TRIALS), hash=False)
    sample_universe: int = REDUCTION_SAMPLE_UNIVERSE
    max_graph_order: int = MAX_ATLAS_ORDER

    def trials_for(self, check: str) -> int:
        return self.trials.get(check, DEFAULT_TRIALS.get(check, 0))

    def overridden(
        self,
        *,
        seed: Optional[int] = None,
        budget: Optional[int] = None,
        trials: Optional[int] = None,
    ) -> "RunConfig":
        """Apply command-line overrides; a single ``trials`` value caps every sampled check."""
        updated = self
        if seed is not None:
            updated = replace(updated, seed=seed)
        if budget is not None:
            updated = replace(updated, budget=budget)
        if trials is not None:
            updated = replace(updated, trials={key: trials for key in TRIAL_KEYS})
        return updated


def load_run_config(path: Path) -> RunConfig:
    """Load a run configuration from YAML; missing keys keep their defaults."""
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise RunConfigError(f"Cannot read run config {path}: {exc}") from exc
    if data is None:
        return RunConfig()
    if not isinstance(data, dict):
        raise RunConfigError("Run config must be a YAML mapping.")
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise RunConfigError(f"Unknown run config keys: {', '.join(map(str, unknown))}.")

    trials = dict(DEFAULT_TRIALS)
    raw_trials = data.get("trials", {})
    if not isinstance(raw_trials, dict):
        raise RunConfigError("'trials' must be a mapping of check name to count.")
    for key in raw_trials:
        if key not in TRIAL_KEYS:
            raise RunConfigError(f"'trials.{key}' is not a known check; expected one of {', '.join(TRIAL_KEYS)}.")
        trials[key] = _read_int(raw_trials, key, default=0, min_value=0, prefix="trials.")

    return RunConfig(
        seed=_read_int(data, "seed", default=DEFAULT_SEED, min_value=0),
        budget=_read_int(data, "budget", default=DEFAULT_SEARCH_BUDGET, min_value=1),
        trials=trials,
        sample_universe=_read_int(data, "sample_universe", default=REDUCTION_SAMPLE_UNIVERSE, min_value=3),
        max_graph_order=_read_int(data, "max_graph_order", default=MAX_ATLAS_ORDER, min_value=1, max_value=7),
    )


def _read_int(
    data: dict,
    key: str,
    *,
    default: int,
    min_value: int | None = None,
    max_value: int | None = None,
    prefix: str = "",
) -> int:
    raw = data.get(key, default)
    if isinstance(raw, bool):
        raise RunConfigError(f"'{prefix}{key}' must be an integer.")
    try:
        value = int(raw)
    except (TypeError, ValueError) as exc:
        raise RunConfigError(f"'{prefix}{key}' must be an integer.") from exc
    if min_value is not None and value < min_value:
        raise RunConfigError(f"'{prefix}{key}' must be >= {min_value}.")
    if max_value is not None and value > max_value:
        raise RunConfigError(f"'{prefix}{key}' must be <= {max_value}.")
    return value


__all__ = ["RunConfig", "RunConfigError", "TRIAL_KEYS", "load_run_config"]
