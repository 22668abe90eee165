"""Result records produced by the deciders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from chooselab.models.assignments import ListAssignment
from chooselab.models.graph import VertexId


@dataclass
class SearchStats:
    """Counters of an adversary search; mutable so the search can update them in place."""

    nodes: int = 0
    assignments: int = 0

    def as_dict(self) -> dict[str, int]:
        return {"nodes": self.nodes, "assignments": self.assignments}


@dataclass(frozen=True)
class ChoosabilityVerdict:
    answer: bool
    witness: Optional[ListAssignment]
    stats: SearchStats = field(default_factory=SearchStats)

    def __bool__(self) -> bool:
        return self.answer

    def as_dict(self) -> dict[str, Any]:
        return {"answer": self.answer, "stats": self.stats.as_dict()}


@dataclass(frozen=True)
class RestrictlyReport:
    """Per-vertex outcome of the k-restrictly-choosable test."""

    k: int
    per_vertex: dict[VertexId, bool]
    witnesses: dict[VertexId, ListAssignment] = field(default_factory=dict)

    @property
    def restrictly_choosable(self) -> bool:
        return all(self.per_vertex.values())

    def __bool__(self) -> bool:
        return self.restrictly_choosable

    def failing_vertices(self) -> list[VertexId]:
        return sorted(v for v, ok in self.per_vertex.items() if not ok)


__all__ = ["ChoosabilityVerdict", "RestrictlyReport", "SearchStats"]
