"""Counters and budgets shared by the model enumerators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

# Wall-clock budget checks happen once per this many propagations.
TIME_CHECK_INTERVAL = 4096


@dataclass
class Budget:
    """Resource limits for one enumeration run; None means unlimited."""

    max_seconds: Optional[float] = None
    max_conflicts: Optional[int] = None


@dataclass
class EnumerationStats:
    """Outcome of an enumeration run.

    completed=False means the budget ran out and models_found is only a
    lower bound on the true model count. elapsed is in seconds.
    """

    models_found: int = 0
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    peak_stored_clauses: int = 0
    elapsed: float = 0.0
    completed: bool = True
