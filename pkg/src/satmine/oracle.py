"""Exhaustive reference miner.

Deliberately naive ground truth for everything the CNF pipeline produces:
enumerate all 2^n candidate itemsets, compute supports directly, and test
closedness. No SAT machinery is shared with the encoders or enumerators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mining import MiningSolution, TransactionDb, cover

MAX_ORACLE_ITEMS = 24


@dataclass(frozen=True)
class PatternSet:
    """Result of an oracle run: patterns plus the query that produced them."""

    patterns: frozenset[MiningSolution]
    threshold: int
    kind: str  # "frequent" or "closed"

    def itemsets(self) -> frozenset[frozenset[int]]:
        return frozenset(sol.itemset for sol in self.patterns)


def _check_size(db: TransactionDb) -> None:
    if db.n_items > MAX_ORACLE_ITEMS:
        raise ValueError(
            f"exhaustive miner handles at most {MAX_ORACLE_ITEMS} items, "
            f"got {db.n_items}"
        )


def _mask_of(items: frozenset[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def mine_frequent(db: TransactionDb, n: int) -> PatternSet:
    """All itemsets with support >= n, the empty set included when frequent."""
    _check_size(db)
    if n < 0:
        raise ValueError("threshold must be non-negative")
    row_masks = [(t.tid, _mask_of(t.items)) for t in db.transactions]
    found = []
    for candidate in range(1 << db.n_items):
        tids = [tid for tid, mask in row_masks if mask & candidate == candidate]
        if len(tids) >= n:
            itemset = frozenset(i for i in range(db.n_items) if candidate >> i & 1)
            found.append(MiningSolution(itemset, frozenset(tids), len(tids)))
    return PatternSet(frozenset(found), n, "frequent")


def is_closed(db: TransactionDb, itemset) -> bool:
    """Closedness via the cover intersection: an itemset with non-empty
    cover is closed iff it equals the intersection of the transactions
    covering it. Zero-support itemsets are rejected."""
    wanted = frozenset(int(i) for i in itemset)
    covering = [t.items for t in db.transactions if wanted <= t.items]
    if not covering:
        raise ValueError("closedness is undefined for zero-support itemsets")
    meet = frozenset.intersection(*covering)
    return meet == wanted


def closed_by_extension_scan(db: TransactionDb, itemset) -> bool:
    """Closedness via superset supports: no single-item extension keeps the
    support. Equivalent to requiring every strict superset to have strictly
    smaller support, since support never grows along supersets."""
    wanted = frozenset(int(i) for i in itemset)
    base = cover(db, wanted)
    if not base:
        raise ValueError("closedness is undefined for zero-support itemsets")
    for extra in range(db.n_items):
        if extra in wanted:
            continue
        extended = sum(1 for t in db.transactions if t.tid in base and extra in t.items)
        if extended == len(base):
            return False
    return True


def mine_closed(db: TransactionDb, n: int, include_empty: bool = False) -> PatternSet:
    """Frequent itemsets none of whose strict supersets ties their support.

    Requires n >= 1: closedness presumes at least one covering transaction.
    The empty itemset is reported only when include_empty is set (and it is
    itself closed).
    """
    if n < 1:
        raise ValueError("closed itemset mining requires a threshold of at least 1")
    frequent = mine_frequent(db, n)
    kept = []
    for sol in frequent.patterns:
        if not sol.itemset and not include_empty:
            continue
        if closed_by_extension_scan(db, sol.itemset):
            kept.append(sol)
    return PatternSet(frozenset(kept), n, "closed")
