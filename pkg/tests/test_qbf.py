"""QBF model, QDIMACS format and the exact evaluator."""

from __future__ import annotations

from pathlib import Path
import random

import pytest

from chooselab.models.qbf import QbfError, QbfInstance, Quantifier, RotationSystem
from chooselab.services.qbf import (
    TooLarge,
    clause_literals,
    eval_qbf,
    find_falsifying_universal,
    parse_qbf,
    random_ops_instance,
    random_rps_instance,
    serialize_qbf,
    substitute,
)
from chooselab.services.reductions import validate_rps
from chooselab.services.text_formats import ParseError

SAMPLE_DATA = Path(__file__).resolve().parents[1] / "sample_data"


def _sample(name: str) -> QbfInstance:
    return parse_qbf((SAMPLE_DATA / name).read_text(encoding="utf-8"))


def test_parse_sample_formula():
    q = _sample("forall_exists_true.qdimacs")

    assert q.prefix == ((Quantifier.FORALL, 1), (Quantifier.EXISTS, 2))
    assert q.clauses == (frozenset({1, 2}), frozenset({-1, -2}))
    assert q.universals == (1,)
    assert q.existentials == (2,)
    assert q.is_pi2()


def test_serialize_groups_quantifier_blocks():
    q = QbfInstance.pi2([1, 2], [3], [{1, 2, 3}, {1, 2, -3}])

    text = serialize_qbf(q)

    assert text.splitlines() == ["p cnf 3 2", "a 1 2 0", "e 3 0", "1 2 3 0", "1 2 -3 0"]
    assert parse_qbf(text) == q


@pytest.mark.parametrize(
    "text",
    [
        "a 1 0\n1 0\n",
        "p cnf 1 1\na 1 0\n1\n",
        "p cnf 1 1\na 1 0\n1 0 0\n",
        "p cnf 1 1\na 2 0\n2 0\n",
        "p cnf 2 1\na 1 0\n1 2 0\n",
        "p cnf 1 2\na 1 0\n1 0\n",
        "p cnf 2 1\na 1 0\n1 0\ne 2 0\n",
        "p cnf 1 1\na 1 0\ne 1 0\n1 0\n",
    ],
)
def test_parse_rejects_malformed_formulas(text: str):
    with pytest.raises(ParseError):
        parse_qbf(text)


def test_instance_validation():
    with pytest.raises(QbfError):
        QbfInstance.pi2([1], [], [{1, -1}])
    with pytest.raises(QbfError):
        QbfInstance.pi2([0], [], [])
    with pytest.raises(QbfError):
        QbfInstance.pi2([1], [1], [])


@pytest.mark.parametrize(
    ("q", "expected"),
    [
        (QbfInstance.pi2([1], [2], [{1, 2}, {-1, -2}]), True),
        (QbfInstance.pi2([1], [2], [{1, 2}, {-1, 2}]), True),
        (QbfInstance.pi2([1], [], [{1}, {-1}]), False),
        (QbfInstance.pi2([1, 2], [3], [{1, 2, 3}, {1, 2, -3}]), False),
        (QbfInstance.pi2([1], [2, 3], [{1, 2, 3}]), True),
        (QbfInstance.pi2([], [1, 2], [{1}, {-1, 2}, {-2}]), False),
        (QbfInstance(((Quantifier.EXISTS, 2), (Quantifier.FORALL, 1)), (frozenset({1, 2}), frozenset({-1, -2}))), False),
        (QbfInstance.pi2([], [], []), True),
    ],
)
def test_eval_qbf(q: QbfInstance, expected: bool):
    assert eval_qbf(q) is expected


def test_sample_formulas_evaluate():
    assert eval_qbf(_sample("forall_exists_true.qdimacs"))
    assert not eval_qbf(_sample("forall_false.qdimacs"))
    assert not eval_qbf(_sample("two_clause_rps.qdimacs"))


def test_falsifying_universal_is_verified():
    q = QbfInstance.pi2([1, 2], [3], [{1, 2, 3}, {1, 2, -3}])

    tau = find_falsifying_universal(q)

    assert tau == {1: False, 2: False}
    assert not eval_qbf(substitute(q, tau))
    assert find_falsifying_universal(QbfInstance.pi2([1], [2], [{1, 2}, {-1, -2}])) is None


def test_falsifying_universal_needs_forall_exists_prefix():
    q = QbfInstance(((Quantifier.EXISTS, 1), (Quantifier.FORALL, 2)), (frozenset({1, 2}),))

    with pytest.raises(QbfError):
        find_falsifying_universal(q)


def test_evaluator_refuses_large_formulas():
    q = QbfInstance.pi2(range(1, 6), [], [])

    with pytest.raises(TooLarge):
        eval_qbf(q, max_variables=4)


def test_substitute_drops_assigned_variables():
    q = QbfInstance.pi2([1], [2], [{1, 2}, {-1, 2}])

    reduced = substitute(q, {1: True})

    assert reduced.variables == (2,)
    assert reduced.clauses == (frozenset({2}),)


def test_occurrences_and_rotations():
    q = QbfInstance.pi2([1], [2, 3], [{1, 2}, {-1, 3}, {2, -3}])

    assert q.occurrences() == {1: [0, 1], 2: [0, 2], 3: [1, 2]}
    assert q.is_planar()
    rotation = RotationSystem.from_embedding(q)
    rotation.check(q)
    assert sorted(rotation.order(2)) == [0, 2]
    with pytest.raises(QbfError):
        RotationSystem({1: (0,), 2: (0, 2), 3: (1, 2)}).check(q)


def test_clause_literals_orders_by_variable():
    assert clause_literals({-3, 1, -2}) == (1, -2, -3)


def test_random_generators_respect_their_classes():
    rng = random.Random(3)
    for _ in range(20):
        ops = random_ops_instance(rng)
        rps = random_rps_instance(rng)
        assert ops.is_pi2() and ops.is_planar()
        assert all(1 <= len(c) <= 3 for c in ops.clauses)
        assert validate_rps(rps) == []
