"""QDIMACS reading and writing, exact evaluation and random formula corpora."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
import logging
import random
from typing import Optional

from chooselab.constants import DEFAULT_QBF_MAX_VARIABLES
from chooselab.models.qbf import Clause, Literal, QbfError, QbfInstance, Quantifier, Variable
from chooselab.services.text_formats import fail, iter_records, read_int

_logger = logging.getLogger(__name__)


class TooLarge(QbfError):
    """Raised when a formula has more variables than the evaluator accepts."""


def parse_qbf(text: str) -> QbfInstance:
    """Parse ``p cnf`` / ``a .. 0`` / ``e .. 0`` / clause lines into a QbfInstance."""
    header: Optional[tuple[int, int]] = None
    prefix: list[tuple[Quantifier, Variable]] = []
    clauses: list[Clause] = []
    for record in iter_records(text, comment_prefixes=("c",)):
        tokens = (record.tag, *record.fields)
        if record.tag == "p":
            if header is not None:
                raise fail("Duplicate header.", record.line)
            if len(record.fields) != 3 or record.fields[0] != "cnf":
                raise fail("Header must be 'p cnf <vars> <clauses>'.", record.line)
            header = (
                read_int(record.fields[1], record.line, "variable count"),
                read_int(record.fields[2], record.line, "clause count"),
            )
            continue
        if header is None:
            raise fail("Header 'p cnf <vars> <clauses>' must come first.", record.line)
        body = tokens[1:] if record.tag in ("a", "e") else tokens
        if not body or body[-1] != "0":
            raise fail("Line must end with 0.", record.line)
        values = [read_int(tok, record.line, "literal") for tok in body[:-1]]
        if 0 in values:
            raise fail("Literal 0 may only terminate a line.", record.line)
        for value in values:
            if abs(value) > header[0]:
                raise fail(f"Variable {abs(value)} exceeds the declared count {header[0]}.", record.line)
        if record.tag in ("a", "e"):
            if clauses:
                raise fail("Quantifier lines must precede the clauses.", record.line)
            if any(v < 0 for v in values):
                raise fail("Quantified variables must be positive.", record.line)
            prefix.extend((Quantifier(record.tag), v) for v in values)
        else:
            clauses.append(frozenset(values))
    if header is None:
        raise fail("Missing header 'p cnf <vars> <clauses>'.")
    if len(clauses) != header[1]:
        raise fail(f"Header announces {header[1]} clauses, found {len(clauses)}.")
    try:
        return QbfInstance(tuple(prefix), tuple(clauses))
    except QbfError as exc:
        raise fail(str(exc)) from exc


def serialize_qbf(q: QbfInstance) -> str:
    lines = [f"p cnf {q.max_variable} {len(q.clauses)}"]
    block: list[Variable] = []
    current: Optional[Quantifier] = None
    for quantifier, variable in q.prefix:
        if quantifier is not current and block:
            lines.append(f"{current.value} {' '.join(map(str, block))} 0")
            block = []
        current = quantifier
        block.append(variable)
    if block:
        lines.append(f"{current.value} {' '.join(map(str, block))} 0")
    for clause in q.clauses:
        lines.append(" ".join([*(str(lit) for lit in sorted(clause, key=abs)), "0"]))
    return "\n".join(lines) + "\n"


def _assign(clauses: list[Clause], literal: Literal) -> list[Clause]:
    return [c - {-literal} for c in clauses if literal not in c]


class _Evaluator:
    """Prefix-ordered game tree search with unit and pure-literal simplification.

    A False result carries the universal moves made on the refuting path.
    """

    def __init__(self, q: QbfInstance) -> None:
        self.order = q.variables
        self.quantifiers = q.quantifiers
        self.nodes = 0

    def _universal(self, literal: Literal) -> bool:
        return self.quantifiers[abs(literal)] is Quantifier.FORALL

    def run(self, clauses: list[Clause], moves: dict[Variable, bool]) -> tuple[bool, dict[Variable, bool]]:
        self.nodes += 1
        moves = dict(moves)
        while True:
            if not clauses:
                return True, {}
            for clause in clauses:
                if all(self._universal(lit) for lit in clause):
                    moves.update({abs(lit): lit < 0 for lit in clause})
                    return False, moves
            unit = next(
                (lit for c in clauses if len(c) == 1 for lit in c if not self._universal(lit)),
                None,
            )
            if unit is None:
                literals = {lit for c in clauses for lit in c}
                pure = next((lit for lit in sorted(literals, key=abs) if -lit not in literals), None)
                if pure is None:
                    break
                unit = -pure if self._universal(pure) else pure
            moves[abs(unit)] = unit > 0
            clauses = _assign(clauses, unit)
        present = {abs(lit) for c in clauses for lit in c}
        variable = next(v for v in self.order if v in present)
        universal = self.quantifiers[variable] is Quantifier.FORALL
        refutation: dict[Variable, bool] = {}
        for value in (False, True) if universal else (True, False):
            literal = variable if value else -variable
            holds, witness = self.run(_assign(clauses, literal), {**moves, variable: value})
            if universal and not holds:
                return False, witness
            if not universal and holds:
                return True, {}
            refutation = witness
        return (True, {}) if universal else (False, refutation)


def _check_size(q: QbfInstance, max_variables: int) -> None:
    if len(q.variables) > max_variables:
        msg = f"Formula has {len(q.variables)} variables; the evaluator accepts at most {max_variables}."
        _logger.error(msg)
        raise TooLarge(msg)


def eval_qbf(q: QbfInstance, max_variables: int = DEFAULT_QBF_MAX_VARIABLES) -> bool:
    _check_size(q, max_variables)
    evaluator = _Evaluator(q)
    value, _ = evaluator.run(list(q.clauses), {})
    _logger.debug("eval_qbf: %s after %d nodes", value, evaluator.nodes)
    return value


def substitute(q: QbfInstance, assignment: Mapping[Variable, bool]) -> QbfInstance:
    """Fix the given variables and drop them from the prefix."""
    clauses = list(q.clauses)
    for variable, value in assignment.items():
        clauses = _assign(clauses, variable if value else -variable)
    prefix = tuple((quant, v) for quant, v in q.prefix if v not in assignment)
    return QbfInstance(prefix, tuple(clauses))


def find_falsifying_universal(
    q: QbfInstance,
    max_variables: int = DEFAULT_QBF_MAX_VARIABLES,
) -> Optional[dict[Variable, bool]]:
    """Universal assignment leaving the existential part unsatisfiable, or None if q is true."""
    if not q.is_pi2():
        raise QbfError("A single universal assignment refutes only forall-exists formulas.")
    _check_size(q, max_variables)
    value, moves = _Evaluator(q).run(list(q.clauses), {})
    if value:
        return None
    tau = {v: moves.get(v, False) for v in q.universals}
    if eval_qbf(substitute(q, tau), max_variables):
        msg = "Refuting path does not fix the universal block."
        _logger.error(msg)
        raise RuntimeError(msg)
    return tau


def _random_clause(rng: random.Random, pool: list[Variable], width: int) -> Clause:
    chosen = rng.sample(pool, width)
    return frozenset(v if rng.random() < 0.5 else -v for v in chosen)


def random_ops_instance(
    rng: random.Random,
    max_variables: int = 8,
    max_clauses: int = 6,
    attempts: int = 1000,
) -> QbfInstance:
    """Random forall-exists formula with clauses of 1..3 variables and a planar incidence graph."""
    for _ in range(attempts):
        n = rng.randint(2, max_variables)
        k = rng.randint(1, n - 1)
        pool = list(range(1, n + 1))
        clauses = [
            _random_clause(rng, pool, rng.randint(1, min(3, n)))
            for _ in range(rng.randint(1, max_clauses))
        ]
        q = QbfInstance.pi2(pool[:k], pool[k:], clauses)
        if q.is_planar():
            return q
    raise QbfError(f"No planar instance after {attempts} attempts.")


def random_rps_instance(
    rng: random.Random,
    max_variables: int = 6,
    max_clauses: int = 3,
    attempts: int = 1000,
) -> QbfInstance:
    """Random formula already in restricted form: width 3, at most 3 occurrences, planar.

    Only variables that occur are quantified; at least one is universal.
    """
    for _ in range(attempts):
        n = rng.randint(3, max_variables)
        m = rng.randint(1, max_clauses)
        uses = {v: 0 for v in range(1, n + 1)}
        clauses: list[Clause] = []
        for _ in range(m):
            pool = [v for v, count in uses.items() if count < 3]
            if len(pool) < 3:
                break
            clause = _random_clause(rng, pool, 3)
            clauses.append(clause)
            for lit in clause:
                uses[abs(lit)] += 1
        used = sorted(v for v, count in uses.items() if count)
        if len(clauses) < m or len(used) < 2:
            continue
        k = rng.randint(1, len(used) - 1)
        q = QbfInstance.pi2(used[:k], used[k:], clauses)
        if q.is_planar():
            return q
    raise QbfError(f"No restricted instance after {attempts} attempts.")


def clause_literals(clause: Iterable[Literal]) -> tuple[Literal, ...]:
    """Literals of a clause ordered by variable, the slot order used by the reductions."""
    return tuple(sorted(clause, key=abs))


__all__ = [
    "TooLarge",
    "clause_literals",
    "eval_qbf",
    "find_falsifying_universal",
    "parse_qbf",
    "random_ops_instance",
    "random_rps_instance",
    "serialize_qbf",
    "substitute",
]
