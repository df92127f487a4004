"""AllSAT enumeration by chronological backtracking, no clause learning.

The enumerator walks the decision variables depth-first: whenever all of
them are assigned (a model) or propagation hits a conflict, it flips the
deepest unflipped decision in place and carries on. Enumeration is
complete when no unflipped decision remains. The clause database never
grows: no learned clauses, no blocking clauses, and nothing to restart
for, so every model costs one backtrack instead of a solver re-descent.

Branching heuristics:
  "jw"    static two-sided Jeroslow-Wang, ties broken by lowest index
  "vsids" conflict analysis is run at each conflict purely to bump
          variable activities; the derived clause is discarded
  "rand"  uniform over unassigned decision variables, explicit seed

The decision set must determine all remaining variables under unit
propagation (true by construction for the mining encodings, where item
variables fix transaction and counter variables); enumerate raises if it
catches a violation.
"""

from __future__ import annotations

import random
import time
from typing import Callable, Optional, Sequence

from .cnf import CnfFormula
from .stats import TIME_CHECK_INTERVAL, Budget, EnumerationStats

HEURISTICS = ("jw", "vsids", "rand")

VAR_ACTIVITY_BUMP = 1.0
VAR_ACTIVITY_DECAY = 0.95
VAR_ACTIVITY_RESCALE = 1e100


class EnumerationError(RuntimeError):
    """The decision set failed to determine the remaining variables."""


class ModelView:
    """Indexable view of the solver's current total assignment.

    model[var] -> bool. Only valid while the model callback runs; copy
    what you need.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        self._values = values

    def __getitem__(self, var: int) -> bool:
        return self._values[var] > 0


class DpllEnumerator:
    def __init__(
        self,
        formula: CnfFormula,
        decision_vars: Optional[Sequence[int]] = None,
        heuristic: str = "jw",
        seed: int = 0,
        positive_first: bool = False,
        budget: Optional[Budget] = None,
    ):
        if heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {heuristic!r}")
        self.formula = formula
        self.heuristic = heuristic
        self.positive_first = positive_first
        self.budget = budget or Budget()
        n = formula.num_vars
        self.n = n
        if decision_vars is None:
            decision_vars = range(1, n + 1)
        self.decision_vars = tuple(sorted(set(int(v) for v in decision_vars)))
        for v in self.decision_vars:
            if not 1 <= v <= n:
                raise ValueError(f"decision variable {v} out of range")

        # values is indexed directly by literal: values[lit] is 1 when the
        # literal is true, -1 when false, 0 when unassigned. Negative
        # literals wrap around to the upper half of the list.
        self.values = [0] * (2 * n + 1)
        self.levels: list[list] = []  # [decision_lit, flipped, trail_start]
        self.trail: list[int] = []
        self.qhead = 0
        self.reason: list = [None] * (n + 1)
        self.level = [0] * (n + 1)
        self.watches: list[list] = [[] for _ in range(2 * n + 1)]

        self._root_conflict = formula.has_empty_clause
        self._root_units: list[int] = []
        for clause in formula.clauses:
            if len(clause) == 1:
                self._root_units.append(clause[0])
            elif len(clause) >= 2:
                cl = list(clause)
                self.watches[cl[0]].append((cl, cl[1]))
                self.watches[cl[1]].append((cl, cl[0]))

        self.activity = [0.0] * (n + 1)
        self._act_inc = VAR_ACTIVITY_BUMP
        self._seen = bytearray(n + 1)
        if heuristic == "jw":
            score = [0.0] * (n + 1)
            for clause in formula.clauses:
                if not clause:
                    continue
                weight = 2.0 ** -len(clause)
                for lit in clause:
                    score[abs(lit)] += weight
            self._jw_order = sorted(self.decision_vars, key=lambda v: (-score[v], v))
        self._rng = random.Random(seed)

        self.stats = EnumerationStats(peak_stored_clauses=len(formula.clauses))
        self._deadline: Optional[float] = None
        self._out_of_budget = False

    # -- assignment plumbing ------------------------------------------------

    def _enqueue(self, lit: int, reason) -> None:
        self.values[lit] = 1
        self.values[-lit] = -1
        var = lit if lit > 0 else -lit
        self.level[var] = len(self.levels)
        self.reason[var] = reason
        self.trail.append(lit)

    def assume(self, lit: int) -> None:
        """Open a new decision level and assign lit as its decision."""
        self.levels.append([lit, False, len(self.trail)])
        self._enqueue(lit, None)

    def _undo_to(self, trail_start: int) -> None:
        values = self.values
        trail = self.trail
        for idx in range(len(trail) - 1, trail_start - 1, -1):
            lit = trail[idx]
            values[lit] = 0
            values[-lit] = 0
        del trail[trail_start:]
        self.qhead = trail_start

    def propagate(self):
        """Unit propagation to fixpoint; returns a conflicting clause or None."""
        values = self.values
        watches = self.watches
        trail = self.trail
        stats = self.stats
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            ws = watches[-p]
            i = j = 0
            end = len(ws)
            while i < end:
                entry = ws[i]
                i += 1
                cl, blocker = entry
                if values[blocker] == 1:
                    ws[j] = entry
                    j += 1
                    continue
                if cl[0] == -p:
                    cl[0] = cl[1]
                    cl[1] = -p
                first = cl[0]
                if values[first] == 1:
                    ws[j] = (cl, first)
                    j += 1
                    continue
                for k in range(2, len(cl)):
                    lk = cl[k]
                    if values[lk] != -1:
                        cl[1] = lk
                        cl[k] = -p
                        watches[lk].append((cl, first))
                        break
                else:
                    ws[j] = (cl, first)
                    j += 1
                    if values[first] == -1:
                        while i < end:  # keep the untouched tail
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return cl
                    stats.propagations += 1
                    if (
                        stats.propagations % TIME_CHECK_INTERVAL == 0
                        and self._deadline is not None
                        and time.perf_counter() > self._deadline
                    ):
                        self._out_of_budget = True
                    self._enqueue(first, cl)
            del ws[j:]
        return None

    # -- branching ----------------------------------------------------------

    def pick_branch(self) -> Optional[int]:
        """Next decision literal, or None when every decision var is set."""
        values = self.values
        if self.heuristic == "jw":
            var = next((v for v in self._jw_order if values[v] == 0), None)
        elif self.heuristic == "vsids":
            var = None
            best = -1.0
            activity = self.activity
            for v in self.decision_vars:
                if values[v] == 0 and activity[v] > best:
                    best = activity[v]
                    var = v
        else:
            free = [v for v in self.decision_vars if values[v] == 0]
            var = self._rng.choice(free) if free else None
        if var is None:
            return None
        return var if self.positive_first else -var

    def _bump_from_conflict(self, confl) -> None:
        # First-UIP derivation over the implication graph, used only to
        # weight the variables met along the way; the clause is discarded.
        seen = self._seen
        level = self.level
        reason = self.reason
        trail = self.trail
        current = len(self.levels)
        touched = []
        path_count = 0
        p = None
        idx = len(trail) - 1
        clause = confl
        while True:
            for lit in clause if p is None else clause[1:]:
                var = lit if lit > 0 else -lit
                if not seen[var] and level[var] > 0:
                    seen[var] = 1
                    touched.append(var)
                    if level[var] >= current:
                        path_count += 1
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            var = p if p > 0 else -p
            idx -= 1
            path_count -= 1
            if path_count <= 0:
                break
            clause = reason[var]
        inc = self._act_inc
        activity = self.activity
        rescale = False
        for var in touched:
            seen[var] = 0
            activity[var] += inc
            if activity[var] > VAR_ACTIVITY_RESCALE:
                rescale = True
        if rescale:
            for v in range(1, self.n + 1):
                activity[v] *= 1e-100
            self._act_inc *= 1e-100
        self._act_inc /= VAR_ACTIVITY_DECAY

    # -- enumeration --------------------------------------------------------

    def _backtrack_flip(self) -> bool:
        """Flip the deepest unflipped decision; False when exhausted."""
        levels = self.levels
        while levels:
            top = levels[-1]
            self._undo_to(top[2])
            if top[1]:
                levels.pop()
            else:
                top[0] = -top[0]
                top[1] = True
                self._enqueue(top[0], None)
                return True
        return False

    def enumerate(self, on_model: Optional[Callable] = None) -> EnumerationStats:
        """Run to completion or budget; invokes on_model(model) once per
        model projection onto the decision set."""
        stats = self.stats
        start = time.perf_counter()
        if self.budget.max_seconds is not None:
            self._deadline = start + self.budget.max_seconds
        view = ModelView(self.values)
        max_conflicts = self.budget.max_conflicts

        if self._root_conflict:
            stats.elapsed = time.perf_counter() - start
            return stats
        ok = True
        for lit in self._root_units:
            if self.values[lit] == -1:
                ok = False
                break
            if self.values[lit] == 0:
                self._enqueue(lit, None)
        if not ok:
            stats.elapsed = time.perf_counter() - start
            return stats

        while True:
            confl = self.propagate()
            if self._out_of_budget:
                stats.completed = False
                break
            if confl is not None:
                stats.conflicts += 1
                if self.heuristic == "vsids" and self.levels:
                    self._bump_from_conflict(confl)
                if max_conflicts is not None and stats.conflicts >= max_conflicts:
                    stats.completed = False
                    break
                if self._deadline is not None and time.perf_counter() > self._deadline:
                    stats.completed = False
                    break
                if not self._backtrack_flip():
                    break
                continue
            lit = self.pick_branch()
            if lit is None:
                if len(self.trail) != self.n:
                    raise EnumerationError(
                        "decision set leaves variables undetermined; "
                        "pass a decision set that fixes the rest under propagation"
                    )
                stats.models_found += 1
                if on_model is not None:
                    on_model(view)
                if self._deadline is not None and time.perf_counter() > self._deadline:
                    stats.completed = False
                    break
                if not self._backtrack_flip():
                    break
            else:
                stats.decisions += 1
                self.assume(lit)
        stats.elapsed = time.perf_counter() - start
        return stats


def enumerate_models(
    formula: CnfFormula,
    decision_vars: Optional[Sequence[int]] = None,
    heuristic: str = "jw",
    seed: int = 0,
    positive_first: bool = False,
    budget: Optional[Budget] = None,
    on_model: Optional[Callable] = None,
) -> EnumerationStats:
    """One-shot wrapper around DpllEnumerator.enumerate."""
    solver = DpllEnumerator(
        formula,
        decision_vars=decision_vars,
        heuristic=heuristic,
        seed=seed,
        positive_first=positive_first,
        budget=budget,
    )
    return solver.enumerate(on_model=on_model)
