"""Propositional CNF core: literals, clauses, formulas, DIMACS I/O.

Literals are signed integers in the DIMACS convention: +v is the positive
literal of variable v (variables are 1-based), -v is its negation. A clause
is a tuple of literals, a formula is a clause list plus a variable count.
Assignments are mappings from variable to bool; a missing key means the
variable is unassigned.
"""

from __future__ import annotations

import enum
from typing import Iterable, Mapping, Optional

Variable = int
Literal = int
Clause = tuple[int, ...]
Assignment = Mapping[int, bool]


class Status(enum.Enum):
    """Three-valued result of evaluating a formula under an assignment."""

    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


class DimacsError(ValueError):
    """Malformed DIMACS input; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def normalize_clause(literals: Iterable[int]) -> Optional[Clause]:
    """Drop duplicate literals (first occurrence wins); None for tautologies."""
    seen: set[int] = set()
    out: list[int] = []
    for lit in literals:
        lit = int(lit)
        if lit == 0:
            raise ValueError("literal 0 is reserved for the DIMACS terminator")
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


class CnfFormula:
    """A CNF formula over variables 1..num_vars.

    Clauses are normalized on insertion (duplicate literals collapse,
    tautologies are dropped). An inserted empty clause flags the formula
    as trivially unsatisfiable. Built formulas are treated as immutable;
    sharing one across threads or enumerator instances is safe because
    solvers copy clause contents on attach.
    """

    def __init__(self, num_vars: int = 0):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        self.num_vars = num_vars
        self.clauses: list[Clause] = []
        self.has_empty_clause = False

    def add_clause(self, literals: Iterable[int]) -> Optional[Clause]:
        """Insert a clause; returns the stored tuple, or None if it was a
        tautology and got dropped. The variable range grows as needed."""
        clause = normalize_clause(literals)
        if clause is None:
            return None
        for lit in clause:
            v = lit if lit > 0 else -lit
            if v > self.num_vars:
                self.num_vars = v
        if not clause:
            self.has_empty_clause = True
        self.clauses.append(clause)
        return clause

    def evaluate(self, assignment: Assignment) -> Status:
        """Evaluate under a (possibly partial) assignment.

        Falsified wins over undetermined: one fully-false clause suffices.
        On a total assignment the result is never UNDETERMINED.
        """
        undetermined = False
        for clause in self.clauses:
            clause_open = False
            clause_sat = False
            for lit in clause:
                val = assignment.get(lit if lit > 0 else -lit)
                if val is None:
                    clause_open = True
                elif val == (lit > 0):
                    clause_sat = True
                    break
            if clause_sat:
                continue
            if not clause_open:
                return Status.FALSIFIED
            undetermined = True
        return Status.UNDETERMINED if undetermined else Status.SATISFIED

    def __repr__(self) -> str:
        return f"CnfFormula(num_vars={self.num_vars}, clauses={len(self.clauses)})"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse standard DIMACS CNF: 'p cnf V C' header, 0-terminated clauses,
    'c' comment lines. Clauses may span lines and share lines.

    Strict: the header must precede all clause data, every literal must fit
    the declared variable count, the final clause must be 0-terminated, and
    exactly C clauses must be present. Violations raise DimacsError with
    the offending line number.
    """
    declared_vars = 0
    declared_clauses = 0
    formula: Optional[CnfFormula] = None
    pending: list[int] = []
    clauses_read = 0
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if formula is not None:
                raise DimacsError(lineno, "duplicate 'p cnf' header")
            fields = stripped.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise DimacsError(lineno, f"malformed header {stripped!r}")
            try:
                declared_vars = int(fields[2])
                declared_clauses = int(fields[3])
            except ValueError:
                raise DimacsError(lineno, f"malformed header {stripped!r}") from None
            if declared_vars < 0 or declared_clauses < 0:
                raise DimacsError(lineno, f"malformed header {stripped!r}")
            formula = CnfFormula(declared_vars)
            continue
        if formula is None:
            raise DimacsError(lineno, "clause data before 'p cnf' header")
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(lineno, f"non-integer token {token!r}") from None
            if lit == 0:
                clauses_read += 1
                if clauses_read > declared_clauses:
                    raise DimacsError(lineno, "more clauses than declared")
                formula.add_clause(pending)
                pending.clear()
            else:
                if abs(lit) > declared_vars:
                    raise DimacsError(lineno, "literal exceeds declared variable count")
                pending.append(lit)
    if formula is None:
        raise DimacsError(lineno or 1, "missing 'p cnf' header")
    if pending:
        raise DimacsError(lineno, "clause missing '0' terminator")
    if clauses_read != declared_clauses:
        raise DimacsError(
            lineno, f"declared {declared_clauses} clauses, found {clauses_read}"
        )
    return formula


def write_dimacs(formula: CnfFormula) -> str:
    """Serialize to DIMACS text; parse_dimacs(write_dimacs(f)) round-trips
    clause-for-clause for formulas built through add_clause."""
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        if clause:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        else:
            lines.append("0")
    return "\n".join(lines) + "\n"
