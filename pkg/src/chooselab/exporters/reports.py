"""Machine-readable command reports and verdict records."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
from pathlib import Path
from typing import Any

import yaml


@dataclass
class CommandReport:
    """What a CLI command did; the YAML and JSON renderings come from the same mapping.

    ``text`` holds the human-readable lines and is not part of the mapping.
    """

    command: list[str]
    verdict: str
    exit_code: int = 0
    outputs: dict[str, Any] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0
    text: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "command": " ".join(self.command),
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "elapsed_s": round(self.elapsed, 3),
        }
        if self.outputs:
            data["outputs"] = self.outputs
        if self.stats:
            data["stats"] = self.stats
        return data


def render_report(report: CommandReport, as_json: bool = False) -> str:
    data = report.as_dict()
    if as_json:
        return json.dumps(data, indent=2, default=str) + "\n"
    return yaml.safe_dump(data, sort_keys=False)


def dump_record(data: dict[str, Any], destination: Path | None = None) -> str:
    """Serialize a verdict record to YAML, optionally writing to disk."""
    yaml_text = yaml.safe_dump(data, sort_keys=False)

    if destination is not None:
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_text(yaml_text, encoding="utf-8")

    return yaml_text


__all__ = ["CommandReport", "dump_record", "render_report"]
