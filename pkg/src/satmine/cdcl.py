"""AllSAT enumeration by conflict-driven search plus blocking clauses.

Standard CDCL: two-watched-literal propagation, first-UIP conflict
analysis with non-chronological backjumping, VSIDS decisions with phase
saving, Luby restarts (unit 100 conflicts), and periodic halving of the
conflict-learned clause store. Each time a model is found its projection
is forbidden with a blocking clause, the solver restarts, and the search
resumes; enumeration ends when the formula plus accumulated blocking
clauses becomes unsatisfiable (a conflict at decision level zero).

Blocking clauses are never deleted, so memory grows with the model count;
conflict-learned clauses remain deletable. By default blocking covers the
given projection variables; pass projection=None to block full models.
"""

from __future__ import annotations

import heapq
import time
from typing import Callable, Optional, Sequence

from .cnf import CnfFormula
from .stats import TIME_CHECK_INTERVAL, Budget, EnumerationStats
from .dpll import ModelView

VAR_ACTIVITY_BUMP = 1.0
VAR_ACTIVITY_DECAY = 0.95
VAR_ACTIVITY_RESCALE = 1e100
CLA_ACTIVITY_DECAY = 0.999
CLA_ACTIVITY_RESCALE = 1e20
RESTART_UNIT = 100
FIRST_REDUCE_CONFLICTS = 4000

_ORIGINAL, _LEARNT, _BLOCKING = 0, 1, 2

_SAT, _UNSAT, _BUDGET = 0, 1, 2


class _Clause(list):
    __slots__ = ("activity", "kind")

    def __init__(self, lits, kind):
        super().__init__(lits)
        self.activity = 0.0
        self.kind = kind


def _luby(i: int) -> int:
    # 1,1,2,1,1,2,4,1,... (1-based index)
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1


def make_blocking_clause(model, projection: Sequence[int]) -> tuple[int, ...]:
    """Clause forbidding the model's restriction to the projection vars."""
    return tuple(-v if model[v] else v for v in sorted(projection))


class CdclEnumerator:
    def __init__(
        self,
        formula: CnfFormula,
        projection: Optional[Sequence[int]] = None,
        budget: Optional[Budget] = None,
        on_learned: Optional[Callable] = None,
    ):
        self.formula = formula
        n = formula.num_vars
        self.n = n
        if projection is None:
            projection = range(1, n + 1)
        self.projection = tuple(sorted(set(int(v) for v in projection)))
        for v in self.projection:
            if not 1 <= v <= n:
                raise ValueError(f"projection variable {v} out of range")
        self.budget = budget or Budget()
        self.on_learned = on_learned

        self.values = [0] * (2 * n + 1)  # indexed by literal, negatives wrap
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.reason: list = [None] * (n + 1)
        self.level = [0] * (n + 1)
        self.watches: list[list] = [[] for _ in range(2 * n + 1)]
        self.activity = [0.0] * (n + 1)
        self.saved_phase = bytearray(n + 1)  # 0: try false first
        self._var_inc = VAR_ACTIVITY_BUMP
        self._cla_inc = 1.0
        self._seen = bytearray(n + 1)
        self._order = [(0.0, v) for v in range(1, n + 1)]
        heapq.heapify(self._order)

        self.learnts: list[_Clause] = []
        self.blocking: list[_Clause] = []
        self._unit_learnts = 0
        self._root_conflict = formula.has_empty_clause
        self._root_units: list[int] = []
        self._originals: list[_Clause] = []
        for clause in formula.clauses:
            if len(clause) == 1:
                self._root_units.append(clause[0])
            elif len(clause) >= 2:
                cl = _Clause(clause, _ORIGINAL)
                self._originals.append(cl)
                self.watches[cl[0]].append((cl, cl[1]))
                self.watches[cl[1]].append((cl, cl[0]))

        self.stats = EnumerationStats(peak_stored_clauses=len(formula.clauses))
        self._n_original = len(formula.clauses)
        self._deadline: Optional[float] = None
        self._out_of_budget = False
        self._restart_idx = 1
        self._next_reduce = FIRST_REDUCE_CONFLICTS
        self._reduce_interval = FIRST_REDUCE_CONFLICTS

    # -- assignment plumbing ------------------------------------------------

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason) -> None:
        self.values[lit] = 1
        self.values[-lit] = -1
        var = lit if lit > 0 else -lit
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)

    def _backtrack(self, target_level: int) -> None:
        if len(self.trail_lim) <= target_level:
            return
        start = self.trail_lim[target_level]
        values = self.values
        trail = self.trail
        saved = self.saved_phase
        activity = self.activity
        order = self._order
        for idx in range(len(trail) - 1, start - 1, -1):
            lit = trail[idx]
            var = lit if lit > 0 else -lit
            saved[var] = 1 if lit > 0 else 0
            values[lit] = 0
            values[-lit] = 0
            heapq.heappush(order, (-activity[var], var))
        del trail[start:]
        del self.trail_lim[target_level:]
        self.qhead = start

    def propagate(self):
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
                        while i < end:
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

    # -- conflict analysis ----------------------------------------------------

    def _bump_var(self, var: int) -> bool:
        self.activity[var] += self._var_inc
        heapq.heappush(self._order, (-self.activity[var], var))
        return self.activity[var] > VAR_ACTIVITY_RESCALE

    def _rescale_activities(self) -> None:
        activity = self.activity
        for v in range(1, self.n + 1):
            activity[v] *= 1e-100
        self._var_inc *= 1e-100
        values = self.values
        self._order = [(-activity[v], v) for v in range(1, self.n + 1) if values[v] == 0]
        heapq.heapify(self._order)

    def _bump_clause(self, cl: _Clause) -> None:
        cl.activity += self._cla_inc
        if cl.activity > CLA_ACTIVITY_RESCALE:
            for other in self.learnts:
                other.activity *= 1e-20
            self._cla_inc *= 1e-20

    def analyze(self, confl) -> tuple[list[int], int]:
        """Derive the first-UIP clause for a conflict at level >= 1;
        returns (learnt, backjump_level) with the asserting literal first."""
        seen = self._seen
        level = self.level
        reason = self.reason
        trail = self.trail
        current = len(self.trail_lim)
        learnt: list[int] = [0]
        touched: list[int] = []
        rescale = False
        path_count = 0
        p = None
        idx = len(trail) - 1
        clause = confl
        while True:
            if clause.kind == _LEARNT:
                self._bump_clause(clause)
            for li in range(0 if p is None else 1, len(clause)):
                lit = clause[li]
                var = lit if lit > 0 else -lit
                if not seen[var] and level[var] > 0:
                    seen[var] = 1
                    touched.append(var)
                    if self._bump_var(var):
                        rescale = True
                    if level[var] >= current:
                        path_count += 1
                    else:
                        learnt.append(lit)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            pvar = p if p > 0 else -p
            idx -= 1
            seen[pvar] = 0
            path_count -= 1
            if path_count <= 0:
                break
            clause = reason[pvar]
        learnt[0] = -p
        for var in touched:
            seen[var] = 0
        if rescale:
            self._rescale_activities()
        if len(learnt) == 1:
            backjump = 0
        else:
            max_i = 1
            for i in range(2, len(learnt)):
                if level[abs(learnt[i])] > level[abs(learnt[max_i])]:
                    max_i = i
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            backjump = level[abs(learnt[1])]
        return learnt, backjump

    # -- clause store ---------------------------------------------------------

    def _record_stored(self) -> None:
        stored = (
            self._n_original + len(self.learnts) + self._unit_learnts + len(self.blocking)
        )
        if stored > self.stats.peak_stored_clauses:
            self.stats.peak_stored_clauses = stored

    def _attach_learnt(self, lits: list[int]) -> None:
        # called right after backtracking to the assertion level
        if len(lits) == 1:
            self._unit_learnts += 1
            self._enqueue(lits[0], None)
        else:
            cl = _Clause(lits, _LEARNT)
            self._bump_clause(cl)
            self.watches[cl[0]].append((cl, cl[1]))
            self.watches[cl[1]].append((cl, cl[0]))
            self.learnts.append(cl)
            self._enqueue(cl[0], cl)
        if self.on_learned is not None:
            self.on_learned(tuple(lits), len(self.blocking))
        self._record_stored()

    def _locked(self, cl: _Clause) -> bool:
        var = abs(cl[0])
        return self.values[cl[0]] == 1 and self.reason[var] is cl

    def _reduce_learnts(self) -> None:
        """Drop the least active half of the deletable learned clauses."""
        self.learnts.sort(key=lambda cl: cl.activity)
        keep_from = len(self.learnts) // 2
        kept = [
            cl
            for i, cl in enumerate(self.learnts)
            if i >= keep_from or self._locked(cl)
        ]
        self.learnts = kept
        n = self.n
        self.watches = [[] for _ in range(2 * n + 1)]
        # re-attach every live clause at its current watch positions
        for group in (self._originals, self.learnts, self.blocking):
            for cl in group:
                if len(cl) >= 2:
                    self.watches[cl[0]].append((cl, cl[1]))
                    self.watches[cl[1]].append((cl, cl[0]))

    # -- search -----------------------------------------------------------------

    def _pick_decision(self) -> Optional[int]:
        values = self.values
        activity = self.activity
        order = self._order
        while order:
            negact, var = heapq.heappop(order)
            if values[var] != 0:
                continue
            if -negact != activity[var]:
                continue  # stale entry; a fresher one is in the heap
            return var if self.saved_phase[var] else -var
        for var in range(1, self.n + 1):  # safety net, normally unreachable
            if values[var] == 0:
                return var if self.saved_phase[var] else -var
        return None

    def _search_next_model(self) -> int:
        stats = self.stats
        restart_limit = RESTART_UNIT * _luby(self._restart_idx)
        conflicts_here = 0
        max_conflicts = self.budget.max_conflicts
        while True:
            confl = self.propagate()
            if self._out_of_budget:
                return _BUDGET
            if confl is not None:
                if len(self.trail_lim) == 0:
                    return _UNSAT
                stats.conflicts += 1
                conflicts_here += 1
                learnt, backjump = self.analyze(confl)
                self._backtrack(backjump)
                self._attach_learnt(learnt)
                self._var_inc /= VAR_ACTIVITY_DECAY
                self._cla_inc /= CLA_ACTIVITY_DECAY
                if max_conflicts is not None and stats.conflicts >= max_conflicts:
                    return _BUDGET
                if stats.conflicts >= self._next_reduce:
                    self._reduce_interval *= 2
                    self._next_reduce = stats.conflicts + self._reduce_interval
                    self._reduce_learnts()
                if conflicts_here >= restart_limit:
                    self._backtrack(0)
                    self._restart_idx += 1
                    restart_limit = RESTART_UNIT * _luby(self._restart_idx)
                    conflicts_here = 0
                    if (
                        self._deadline is not None
                        and time.perf_counter() > self._deadline
                    ):
                        return _BUDGET
            else:
                lit = self._pick_decision()
                if lit is None:
                    return _SAT
                stats.decisions += 1
                self.trail_lim.append(len(self.trail))
                self._enqueue(lit, None)

    def _add_blocking(self, lits: Sequence[int]) -> bool:
        """Install a blocking clause at level 0; False when it is empty
        under the root assignment (no models remain)."""
        cl = _Clause(lits, _BLOCKING)
        self.blocking.append(cl)
        self._record_stored()
        values = self.values
        free = [l for l in cl if values[l] != -1]
        if not free:
            return False
        if len(free) == 1:
            if values[free[0]] == 0:
                self._enqueue(free[0], cl)
            return True
        # move two watchable literals to the front
        i0 = cl.index(free[0])
        cl[0], cl[i0] = cl[i0], cl[0]
        i1 = cl.index(free[1])
        cl[1], cl[i1] = cl[i1], cl[1]
        self.watches[cl[0]].append((cl, cl[1]))
        self.watches[cl[1]].append((cl, cl[0]))
        return True

    def enumerate(self, on_model: Optional[Callable] = None) -> EnumerationStats:
        """Enumerate all models, one blocking clause per model projection."""
        stats = self.stats
        start = time.perf_counter()
        if self.budget.max_seconds is not None:
            self._deadline = start + self.budget.max_seconds
        view = ModelView(self.values)

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
            outcome = self._search_next_model()
            if outcome == _UNSAT:
                break
            if outcome == _BUDGET:
                stats.completed = False
                break
            stats.models_found += 1
            if on_model is not None:
                on_model(view)
            if self._deadline is not None and time.perf_counter() > self._deadline:
                stats.completed = False
                break
            block = make_blocking_clause(view, self.projection)
            self._backtrack(0)
            self._restart_idx += 1
            if not self._add_blocking(block):
                break
        stats.elapsed = time.perf_counter() - start
        return stats


def enumerate_blocking(
    formula: CnfFormula,
    projection: Optional[Sequence[int]] = None,
    on_model: Optional[Callable] = None,
    budget: Optional[Budget] = None,
    on_learned: Optional[Callable] = None,
) -> EnumerationStats:
    """One-shot wrapper around CdclEnumerator.enumerate."""
    solver = CdclEnumerator(
        formula, projection=projection, budget=budget, on_learned=on_learned
    )
    return solver.enumerate(on_model=on_model)
