"""At-least-k threshold constraints in CNF.

Sequential unary counter with full biconditional ladder definitions: cell
(i, j) holds iff at least j of the first i inputs are true, so

    cell(i, j) <-> cell(i-1, j) or (x_i and cell(i-1, j-1))

with cell(i, 0) = true and cell(i, j) = false for j > i. Encoding both
directions of the equivalence makes every counter cell a function of the
inputs: each input assignment meeting the threshold extends to exactly one
model of the encoding, and unit propagation alone fixes all cells once the
inputs are assigned. Enumerating models projected onto the inputs therefore
never double-counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cnf import Clause


@dataclass(frozen=True)
class CardinalityEncoding:
    """Clausal form of sum(input_vars) >= bound plus its counter cells."""

    input_vars: tuple[int, ...]
    bound: int
    aux_vars: tuple[int, ...]
    clauses: tuple[Clause, ...]


def encode_at_least_k(
    variables: Sequence[int], k: int, next_free_var: int
) -> CardinalityEncoding:
    """Encode "at least k of variables are true".

    Auxiliary variables are allocated densely from next_free_var, which must
    exceed every input index. k = 0 yields no clauses; k > len(variables)
    yields an encoding containing the empty clause (unsatisfiable).
    """
    inputs = tuple(int(v) for v in variables)
    if k < 0:
        raise ValueError("bound must be non-negative")
    if len(set(inputs)) != len(inputs):
        raise ValueError("input variables must be distinct")
    if any(v < 1 for v in inputs):
        raise ValueError("input variables must be positive indices")
    if inputs and next_free_var <= max(inputs):
        raise ValueError("next_free_var must exceed every input variable")

    if k == 0:
        return CardinalityEncoding(inputs, 0, (), ())
    m = len(inputs)
    if k > m:
        return CardinalityEncoding(inputs, k, (), ((),))

    cell: dict[tuple[int, int], int] = {}
    aux: list[int] = []
    nxt = next_free_var
    for i in range(1, m + 1):
        for j in range(1, min(i, k) + 1):
            cell[(i, j)] = nxt
            aux.append(nxt)
            nxt += 1

    clauses: list[Clause] = []
    for i in range(1, m + 1):
        x = inputs[i - 1]
        for j in range(1, min(i, k) + 1):
            s = cell[(i, j)]
            a = cell.get((i - 1, j))  # carry: threshold met without x
            b = cell.get((i - 1, j - 1)) if j >= 2 else None  # None: trivially true
            if a is not None:
                clauses.append((-a, s))
            if b is not None:
                clauses.append((-x, -b, s))
            else:
                clauses.append((-x, s))
            if a is not None:
                clauses.append((-s, a, x))
                if b is not None:
                    clauses.append((-s, a, b))
            else:
                clauses.append((-s, x))
                if b is not None:
                    clauses.append((-s, b))
    clauses.append((cell[(m, k)],))
    return CardinalityEncoding(inputs, k, tuple(aux), tuple(clauses))


def count_projected_models(encoding: CardinalityEncoding) -> int:
    """Exhaustively count input assignments that extend to a model.

    Validation oracle for encode_at_least_k: walks all 2^m assignments of
    the input variables and decides, by clause-driven search over the
    auxiliary variables, whether a satisfying extension exists. Makes no
    use of the ladder structure. Limited to 20 inputs.
    """
    m = len(encoding.input_vars)
    if m > 20:
        raise ValueError("exhaustive count limited to 20 input variables")
    count = 0
    for pattern in range(1 << m):
        fixed = {v: bool(pattern >> i & 1) for i, v in enumerate(encoding.input_vars)}
        if _extendable(encoding.clauses, fixed, encoding.aux_vars):
            count += 1
    return count


def _extendable(clauses, fixed, free_vars) -> bool:
    """True iff some assignment of free_vars satisfies every clause given
    the fixed partial assignment. Plain unit propagation plus backtracking;
    independent of how the clauses were produced."""
    clauses = list(clauses)
    assigned = dict(fixed)

    def lit_value(lit):
        v = assigned.get(abs(lit))
        return None if v is None else v == (lit > 0)

    def search():
        trail = []
        while True:  # unit propagation to fixpoint
            unit = None
            conflict = False
            for cl in clauses:
                sat = False
                open_lit = None
                n_open = 0
                for lit in cl:
                    lv = lit_value(lit)
                    if lv:
                        sat = True
                        break
                    if lv is None:
                        open_lit = lit
                        n_open += 1
                if sat:
                    continue
                if n_open == 0:
                    conflict = True
                    break
                if n_open == 1:
                    unit = open_lit
                    break
            if conflict:
                for lit in trail:
                    del assigned[abs(lit)]
                return False
            if unit is None:
                break
            assigned[abs(unit)] = unit > 0
            trail.append(unit)
        branch = next((v for v in free_vars if v not in assigned), None)
        if branch is None:
            result = True
        else:
            result = False
            for choice in (False, True):
                assigned[branch] = choice
                if search():
                    result = True
                    break
            del assigned[branch]
        for lit in trail:
            del assigned[abs(lit)]
        return result

    return search()
