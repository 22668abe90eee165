"""Result of the formula-to-graph construction."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from chooselab.models.assignments import SizeFunction
from chooselab.models.graph import Graph, VertexId
from chooselab.models.qbf import Literal, QbfInstance, Variable

if TYPE_CHECKING:
    from chooselab.services.gadgets import PropagatorStage


@dataclass(frozen=True)
class ReductionOutput:
    """Graph, list sizes and a role map naming the formula part behind each vertex.

    ``gadgets`` maps a variable to its initial gadget (role -> vertex);
    ``chains`` maps a literal to the stages of its multioutput propagator.
    """

    graph: Graph
    sizes: SizeFunction
    roles: Mapping[str, tuple[VertexId, ...]] = field(default_factory=dict, hash=False)
    instance: QbfInstance | None = None
    gadgets: Mapping[Variable, Mapping[str, VertexId]] = field(default_factory=dict, hash=False)
    chains: Mapping[Literal, tuple["PropagatorStage", ...]] = field(default_factory=dict, hash=False)
    clause_nodes: tuple[VertexId, ...] = ()

    def literal_node(self, literal: Literal) -> VertexId:
        return self.roles[literal_name(literal)][0]


def literal_name(literal: Literal) -> str:
    return f"x{literal}" if literal > 0 else f"~x{-literal}"


__all__ = ["ReductionOutput", "literal_name"]
