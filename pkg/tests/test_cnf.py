"""CNF container, normalization, and DIMACS round-trip tests."""

import random

import pytest

from satmine import CnfFormula, DimacsError, Status, parse_dimacs, write_dimacs
from satmine.cnf import normalize_clause

from helpers import all_models, clause_true, random_formula


def test_normalize_dedupes_keeping_first_occurrence():
    assert normalize_clause([3, -1, 3, 2, -1]) == (3, -1, 2)


def test_normalize_drops_tautology():
    assert normalize_clause([1, -2, -1]) is None


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize_clause([1, 0, 2])


def test_add_clause_grows_num_vars():
    formula = CnfFormula()
    formula.add_clause([1, -5])
    assert formula.num_vars == 5
    formula.add_clause([2])
    assert formula.num_vars == 5


def test_add_clause_returns_stored_tuple_or_none():
    formula = CnfFormula(3)
    assert formula.add_clause([2, 2, -3]) == (2, -3)
    assert formula.add_clause([1, -1]) is None
    assert formula.clauses == [(2, -3)]


def test_empty_clause_flags_unsat_and_is_stored():
    formula = CnfFormula(2)
    formula.add_clause([])
    assert formula.has_empty_clause
    assert () in formula.clauses
    assert all_models(formula) == set()


def test_evaluate_three_values():
    formula = CnfFormula(3)
    formula.add_clause([1, 2])
    formula.add_clause([-3])
    assert formula.evaluate({1: True, 3: False}) is Status.SATISFIED
    assert formula.evaluate({1: False, 2: False}) is Status.FALSIFIED
    assert formula.evaluate({1: True}) is Status.UNDETERMINED


def test_evaluate_falsified_wins_over_undetermined():
    formula = CnfFormula(3)
    formula.add_clause([1, 2])  # undetermined under the assignment below
    formula.add_clause([3])
    assert formula.evaluate({3: False}) is Status.FALSIFIED


def test_evaluate_total_assignment_matches_brute_force():
    rng = random.Random(101)
    for _ in range(100):
        formula = random_formula(rng, max_vars=6)
        models = all_models(formula)
        for bits in range(2 ** formula.num_vars):
            assign = {v: bool(bits >> (v - 1) & 1) for v in range(1, formula.num_vars + 1)}
            expected = frozenset(v for v, b in assign.items() if b) in models
            got = formula.evaluate(assign) is Status.SATISFIED
            assert got == expected


def test_parse_happy_path_with_comments_and_split_clauses():
    text = "c intro\np cnf 4 3\n1 -2 0 3\n4 0\nc mid\n-1 -3 -4 0\n"
    formula = parse_dimacs(text)
    assert formula.num_vars == 4
    assert formula.clauses == [(1, -2), (3, 4), (-1, -3, -4)]


def test_parse_empty_clause_line():
    formula = parse_dimacs("p cnf 2 2\n0\n1 2 0\n")
    assert formula.has_empty_clause
    assert formula.clauses == [(), (1, 2)]


@pytest.mark.parametrize(
    "text,line,needle",
    [
        ("p cnf 1 1\np cnf 1 1\n1 0\n", 2, "duplicate"),
        ("p cnf x 1\n", 1, "malformed header"),
        ("p cnf 1\n", 1, "malformed header"),
        ("p cnf -1 0\n", 1, "malformed header"),
        ("1 0\np cnf 1 1\n", 1, "before 'p cnf' header"),
        ("p cnf 2 1\n1 zz 0\n", 2, "non-integer token"),
        ("p cnf 2 1\n3 0\n", 2, "exceeds declared variable count"),
        ("p cnf 2 1\n1 0\n2 0\n", 3, "more clauses than declared"),
        ("c only a comment\n", 1, "missing 'p cnf' header"),
        ("", 1, "missing 'p cnf' header"),
        ("p cnf 2 1\n1 2\n", 2, "missing '0' terminator"),
        ("p cnf 2 3\n1 0\n2 0\n", 3, "declared 3 clauses, found 2"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, needle):
    with pytest.raises(DimacsError) as excinfo:
        parse_dimacs(text)
    assert excinfo.value.line == line
    assert needle in str(excinfo.value)


def test_write_minimal_formula():
    assert write_dimacs(CnfFormula()) == "p cnf 0 0\n"


def test_write_golden():
    formula = CnfFormula(3)
    formula.add_clause([1, -2])
    formula.add_clause([])
    formula.add_clause([3])
    assert write_dimacs(formula) == "p cnf 3 3\n1 -2 0\n0\n3 0\n"


def test_round_trip_random_formulas():
    rng = random.Random(202)
    for _ in range(200):
        formula = random_formula(rng)
        back = parse_dimacs(write_dimacs(formula))
        assert back.num_vars == formula.num_vars
        assert back.clauses == formula.clauses
        assert back.has_empty_clause == formula.has_empty_clause


def test_round_trip_preserves_literal_order():
    formula = CnfFormula(5)
    formula.add_clause([5, -1, 3])
    back = parse_dimacs(write_dimacs(formula))
    assert back.clauses == [(5, -1, 3)]
