"""Prenex CNF formulas and the rotation systems of their incidence graphs."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import networkx as nx

Variable = int
Literal = int
Clause = frozenset[Literal]


class QbfError(ValueError):
    """Raised when a quantified formula is malformed."""


class Quantifier(str, Enum):
    FORALL = "a"
    EXISTS = "e"


@dataclass(frozen=True)
class QbfInstance:
    """Quantifier prefix plus CNF matrix; literals are signed variable ids."""

    prefix: tuple[tuple[Quantifier, Variable], ...]
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        prefix = tuple((Quantifier(q), int(v)) for q, v in self.prefix)
        clauses = tuple(frozenset(int(lit) for lit in clause) for clause in self.clauses)
        seen: set[Variable] = set()
        for _, variable in prefix:
            if variable < 1:
                raise QbfError(f"Variable ids must be positive, got {variable}.")
            if variable in seen:
                raise QbfError(f"Variable {variable} is quantified twice.")
            seen.add(variable)
        for index, clause in enumerate(clauses, start=1):
            for literal in clause:
                if literal == 0:
                    raise QbfError(f"Clause {index} contains literal 0.")
                if -literal in clause:
                    raise QbfError(f"Clause {index} contains {abs(literal)} with both signs.")
                if abs(literal) not in seen:
                    raise QbfError(f"Variable {abs(literal)} in clause {index} is not quantified.")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def pi2(
        cls,
        universals: Iterable[Variable],
        existentials: Iterable[Variable],
        clauses: Iterable[Iterable[Literal]],
    ) -> "QbfInstance":
        prefix = [(Quantifier.FORALL, v) for v in universals]
        prefix += [(Quantifier.EXISTS, v) for v in existentials]
        return cls(tuple(prefix), tuple(frozenset(c) for c in clauses))

    @property
    def variables(self) -> tuple[Variable, ...]:
        return tuple(v for _, v in self.prefix)

    @cached_property
    def quantifiers(self) -> dict[Variable, Quantifier]:
        return {v: q for q, v in self.prefix}

    @property
    def universals(self) -> tuple[Variable, ...]:
        return tuple(v for q, v in self.prefix if q is Quantifier.FORALL)

    @property
    def existentials(self) -> tuple[Variable, ...]:
        return tuple(v for q, v in self.prefix if q is Quantifier.EXISTS)

    @property
    def max_variable(self) -> Variable:
        return max(self.variables, default=0)

    def is_pi2(self) -> bool:
        """True when no universal variable follows an existential one."""
        seen_exists = False
        for quantifier, _ in self.prefix:
            if quantifier is Quantifier.EXISTS:
                seen_exists = True
            elif seen_exists:
                return False
        return True

    def occurrences(self) -> dict[Variable, list[int]]:
        """Variable -> indexes of the clauses mentioning it, in clause order."""
        found: dict[Variable, list[int]] = {v: [] for v in self.variables}
        for index, clause in enumerate(self.clauses):
            for literal in sorted(clause, key=abs):
                found[abs(literal)].append(index)
        return found

    def incidence_graph(self) -> nx.Graph:
        """Variables and clauses as nodes, an edge whenever a clause mentions a variable."""
        graph = nx.Graph()
        graph.add_nodes_from(("x", v) for v in self.variables)
        graph.add_nodes_from(("c", i) for i in range(len(self.clauses)))
        for index, clause in enumerate(self.clauses):
            graph.add_edges_from((("x", abs(lit)), ("c", index)) for lit in clause)
        return graph

    def is_planar(self) -> bool:
        planar, _ = nx.check_planarity(self.incidence_graph())
        return planar


@dataclass(frozen=True)
class RotationSystem:
    """Variable -> cyclic order of the clauses around it."""

    orders: Mapping[Variable, tuple[int, ...]] = field(default_factory=dict, hash=False)

    def order(self, variable: Variable) -> tuple[int, ...]:
        return self.orders[variable]

    def check(self, q: QbfInstance) -> None:
        occurrences = q.occurrences()
        for variable, clauses in occurrences.items():
            if sorted(self.orders.get(variable, ())) != sorted(clauses):
                raise QbfError(
                    f"Rotation of variable {variable} is not a permutation of its clauses {clauses}."
                )

    @classmethod
    def clause_order(cls, q: QbfInstance) -> "RotationSystem":
        return cls({v: tuple(c) for v, c in q.occurrences().items()})

    @classmethod
    def from_embedding(cls, q: QbfInstance) -> "RotationSystem":
        """Clockwise orders read off a planar embedding of the incidence graph."""
        planar, embedding = nx.check_planarity(q.incidence_graph())
        if not planar:
            raise QbfError("Incidence graph is not planar; no clockwise rotation exists.")
        orders: dict[Variable, tuple[int, ...]] = {}
        for variable in q.variables:
            node = ("x", variable)
            around = list(embedding.neighbors_cw_order(node)) if embedding.degree(node) else []
            orders[variable] = tuple(index for _, index in around)
        return cls(orders)


__all__ = ["Clause", "Literal", "QbfError", "QbfInstance", "Quantifier", "RotationSystem", "Variable"]
