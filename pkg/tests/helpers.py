"""Shared test utilities: brute-force model sets, independent UP, generators."""

from __future__ import annotations

import contextlib
import itertools
import os
import random

from satmine import CnfFormula, TransactionDb

# verdict lines collected by the acceptance tests; conftest echoes them
# into the terminal summary so a plain pytest run shows one line each
VERDICT_LINES: list = []


@contextlib.contextmanager
def verdict(tag: str, description: str):
    try:
        yield
    except BaseException:
        VERDICT_LINES.append(f"{tag} {description}: FAIL")
        raise
    VERDICT_LINES.append(f"{tag} {description}: PASS")

# seven-transaction demo database used throughout the docs
DEMO_TEXT = "A B C D\nA B E F\nA B C\nA C D F\nG\nD\nD G\n"

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)

BRUTE_FORCE_LIMIT = 22


def clause_true(clause, assign) -> bool:
    return any(assign[abs(lit)] == (lit > 0) for lit in clause)


def all_models(formula: CnfFormula) -> set:
    """Every total satisfying assignment, as frozensets of true variables."""
    assert formula.num_vars <= BRUTE_FORCE_LIMIT
    variables = range(1, formula.num_vars + 1)
    models = set()
    for bits in itertools.product((False, True), repeat=formula.num_vars):
        assign = dict(zip(variables, bits))
        if all(clause_true(c, assign) for c in formula.clauses):
            models.add(frozenset(v for v in variables if assign[v]))
    return models


def projected_models(formula: CnfFormula, projection) -> set:
    proj = frozenset(projection)
    return {model & proj for model in all_models(formula)}


def unit_propagate(clauses, assign: dict):
    """Plain-list unit propagation to fixpoint; None on conflict.

    Independent of the package's watched-literal machinery on purpose.
    """
    assign = dict(assign)
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            unassigned = []
            satisfied = False
            for lit in clause:
                val = assign.get(abs(lit))
                if val is None:
                    unassigned.append(lit)
                elif val == (lit > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if not unassigned:
                return None
            if len(unassigned) == 1:
                lit = unassigned[0]
                assign[abs(lit)] = lit > 0
                changed = True
    return assign


def extension_count(clauses, fixed: dict, free_vars) -> int:
    """How many total assignments over free_vars extend `fixed` to a model."""
    free = [v for v in free_vars if v not in fixed]
    assign = dict(fixed)

    def recurse(idx: int) -> int:
        for clause in clauses:
            seen_open = False
            sat = False
            for lit in clause:
                val = assign.get(abs(lit))
                if val is None:
                    seen_open = True
                elif val == (lit > 0):
                    sat = True
                    break
            if not sat and not seen_open:
                return 0
        if idx == len(free):
            return 1
        var = free[idx]
        total = 0
        for value in (False, True):
            assign[var] = value
            total += recurse(idx + 1)
        del assign[var]
        return total

    return recurse(0)


def random_formula(rng: random.Random, max_vars: int = 8, max_clauses: int = 14) -> CnfFormula:
    num_vars = rng.randint(1, max_vars)
    formula = CnfFormula(num_vars)
    for _ in range(rng.randint(0, max_clauses)):
        width = rng.choice((1, 1, 2, 2, 3, 3, 4))
        width = min(width, num_vars)
        variables = rng.sample(range(1, num_vars + 1), width)
        formula.add_clause(v if rng.random() < 0.5 else -v for v in variables)
    return formula


def random_db(rng: random.Random, max_items: int = 10, max_trans: int = 15) -> TransactionDb:
    n_items = rng.randint(1, max_items)
    labels = tuple("item%d" % i for i in range(n_items))
    rows = []
    for tid in range(1, rng.randint(1, max_trans) + 1):
        row = frozenset(i for i in range(n_items) if rng.random() < 0.45)
        rows.append((tid, row))
    return TransactionDb(labels, rows)
