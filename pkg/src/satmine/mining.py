"""Transaction databases: FIMI flat-file parsing, covers, supports.

The item universe is the set of distinct item labels in first-appearance
order; items are addressed by dense integer ids 0..n-1. Transactions keep
their 1-based file line number as tid. The cover of an itemset is the set
of tids of transactions containing every item of the set; support is the
cover's size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Item:
    id: int
    label: str


@dataclass(frozen=True)
class Transaction:
    tid: int
    items: frozenset[int]  # item ids


@dataclass(frozen=True)
class MiningSolution:
    """One mined pattern: the itemset, its cover, and the support count."""

    itemset: frozenset[int]
    cover: frozenset[int]
    support: int

    def __post_init__(self):
        if self.support != len(self.cover):
            raise ValueError("support must equal the cover size")


class TransactionDb:
    """Immutable transaction database over a fixed item universe."""

    def __init__(self, labels: Iterable[str], transactions: Iterable[tuple[int, Iterable[int]]]):
        self.labels: tuple[str, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("item labels must be distinct")
        self._id_of = {label: i for i, label in enumerate(self.labels)}
        rows = []
        seen_tids = set()
        for tid, item_ids in transactions:
            if tid < 1 or tid in seen_tids:
                raise ValueError(f"tids must be unique positive integers, got {tid}")
            seen_tids.add(tid)
            items = frozenset(int(i) for i in item_ids)
            for i in items:
                if not 0 <= i < len(self.labels):
                    raise ValueError(f"transaction {tid} references unknown item id {i}")
            rows.append(Transaction(tid, items))
        self.transactions: tuple[Transaction, ...] = tuple(rows)

    @property
    def n_items(self) -> int:
        return len(self.labels)

    @property
    def n_transactions(self) -> int:
        return len(self.transactions)

    @property
    def items(self) -> tuple[Item, ...]:
        return tuple(Item(i, label) for i, label in enumerate(self.labels))

    def id_of(self, label: str) -> int:
        try:
            return self._id_of[label]
        except KeyError:
            raise ValueError(f"unknown item label {label!r}") from None

    def ids_of(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.id_of(label) for label in labels)

    def labels_of(self, item_ids: Iterable[int]) -> tuple[str, ...]:
        ids = sorted(set(int(i) for i in item_ids))
        for i in ids:
            if not 0 <= i < len(self.labels):
                raise ValueError(f"unknown item id {i}")
        return tuple(self.labels[i] for i in ids)

    def __repr__(self) -> str:
        return f"TransactionDb(items={self.n_items}, transactions={self.n_transactions})"


def parse_fimi(text: str) -> TransactionDb:
    """Parse FIMI flat-file format: one transaction per line, items as
    whitespace-separated tokens. Line k becomes tid k; empty lines are kept
    as empty transactions; duplicate tokens within a line collapse."""
    labels: list[str] = []
    id_of: dict[str, int] = {}
    rows: list[tuple[int, list[int]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        item_ids = []
        for token in line.split():
            if token not in id_of:
                id_of[token] = len(labels)
                labels.append(token)
            item_ids.append(id_of[token])
        rows.append((lineno, item_ids))
    return TransactionDb(labels, rows)


def read_fimi(path) -> TransactionDb:
    """parse_fimi over a file path."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_fimi(handle.read())


def cover(db: TransactionDb, itemset: Iterable[int]) -> frozenset[int]:
    """Tids of transactions whose itemsets contain every given item id."""
    wanted = frozenset(int(i) for i in itemset)
    for i in wanted:
        if not 0 <= i < db.n_items:
            raise ValueError(f"unknown item id {i}")
    return frozenset(t.tid for t in db.transactions if wanted <= t.items)


def support(db: TransactionDb, itemset: Iterable[int]) -> int:
    """Number of transactions containing the itemset."""
    return len(cover(db, itemset))
