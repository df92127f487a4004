"""CNF builders mapping a transaction database to itemset enumeration.

Variable layout: one item variable per universe item (1..n in universe
order), one transaction variable per transaction (n+1..n+m in tid order),
counter cells after that. A model's item variables spell out an itemset I;
the cover constraints force each transaction variable to be true exactly
when the transaction contains I; the threshold constraint requires at
least n transaction variables true. The closed variant adds, per item, a
clause forcing the item into I unless some covering transaction omits it,
so I equals the intersection of its covering transactions.

Models projected onto the item variables are therefore exactly the
frequent (resp. closed frequent) itemsets, each extending to one full
model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cardinality import encode_at_least_k
from .cnf import Clause, CnfFormula, Status
from .mining import MiningSolution, TransactionDb, cover

VARIANT_FIM = "fim"
VARIANT_CFIM = "cfim"


@dataclass(frozen=True)
class VarMap:
    """Bidirectional map between mining objects and DIMACS variables."""

    item_vars: tuple[int, ...]  # index: item id
    trans_tids: tuple[int, ...]  # ascending tids
    trans_vars: tuple[int, ...]  # parallel to trans_tids
    aux_vars: tuple[int, ...]

    def item_var(self, item_id: int) -> int:
        return self.item_vars[item_id]

    def trans_var(self, tid: int) -> int:
        return self.trans_vars[self.trans_tids.index(tid)]


@dataclass(frozen=True)
class EncodedInstance:
    formula: CnfFormula
    var_map: VarMap
    db: TransactionDb
    threshold: int
    variant: str
    projection: tuple[int, ...]  # the item variables


def build_var_map(db: TransactionDb, aux_vars: Sequence[int] = ()) -> VarMap:
    n = db.n_items
    tids = tuple(sorted(t.tid for t in db.transactions))
    return VarMap(
        item_vars=tuple(range(1, n + 1)),
        trans_tids=tids,
        trans_vars=tuple(range(n + 1, n + len(tids) + 1)),
        aux_vars=tuple(aux_vars),
    )


def _rows_in_tid_order(db: TransactionDb):
    return sorted(db.transactions, key=lambda t: t.tid)


def encode_cover(db: TransactionDb, var_map: VarMap) -> list[Clause]:
    """Per transaction t: q_t is false iff some item outside t is chosen.

    Emitted as the long clause (q_t or p_a | a outside t) plus one binary
    (-p_a or -q_t) per outside item; a transaction holding the whole
    universe degenerates to the unit (q_t).
    """
    clauses: list[Clause] = []
    for t in _rows_in_tid_order(db):
        q = var_map.trans_var(t.tid)
        outside = [a for a in range(db.n_items) if a not in t.items]
        if not outside:
            clauses.append((q,))
            continue
        clauses.append((q,) + tuple(var_map.item_var(a) for a in outside))
        for a in outside:
            clauses.append((-var_map.item_var(a), -q))
    return clauses


def encode_closure(db: TransactionDb, var_map: VarMap) -> list[Clause]:
    """Per item a: choose a unless some covering transaction omits it.

    The clause (q_t | a outside t) or p_a forces the chosen itemset to be
    the intersection of its covering transactions. An item present in every
    transaction degenerates to the unit (p_a).
    """
    clauses: list[Clause] = []
    rows = _rows_in_tid_order(db)
    for a in range(db.n_items):
        witnesses = tuple(var_map.trans_var(t.tid) for t in rows if a not in t.items)
        clauses.append(witnesses + (var_map.item_var(a),))
    return clauses


def _assemble(db: TransactionDb, n: int, variant: str, extra: Sequence[Clause]) -> EncodedInstance:
    if n < 0:
        raise ValueError("threshold must be non-negative")
    base_map = build_var_map(db)
    first_free = db.n_items + db.n_transactions + 1
    card = encode_at_least_k(base_map.trans_vars, n, first_free)
    var_map = build_var_map(db, card.aux_vars)
    formula = CnfFormula(db.n_items + db.n_transactions + len(card.aux_vars))
    for clause in encode_cover(db, var_map):
        formula.add_clause(clause)
    for clause in card.clauses:
        formula.add_clause(clause)
    for clause in extra:
        formula.add_clause(clause)
    return EncodedInstance(
        formula=formula,
        var_map=var_map,
        db=db,
        threshold=n,
        variant=variant,
        projection=var_map.item_vars,
    )


def encode_fim(db: TransactionDb, n: int) -> EncodedInstance:
    """Instance whose item-projected models are the frequent itemsets.

    n > number of transactions yields an instance containing the empty
    clause: zero models, not an error.
    """
    return _assemble(db, n, VARIANT_FIM, ())


def encode_cfim(db: TransactionDb, n: int, exclude_empty: bool = True) -> EncodedInstance:
    """Instance whose item-projected models are the closed frequent
    itemsets. exclude_empty appends the clause (p_1 or ... or p_n) so the
    empty itemset is never reported even when it is closed."""
    base_map = build_var_map(db)
    extra: list[Clause] = list(encode_closure(db, base_map))
    if exclude_empty:
        extra.append(tuple(base_map.item_vars))
    inst = _assemble(db, n, VARIANT_CFIM, extra)
    return inst


def decode_model(instance: EncodedInstance, model) -> MiningSolution:
    """Map a total satisfying assignment back to a mined pattern.

    Validates that the model assigns every variable and satisfies the
    formula, and cross-checks the decoded cover against one recomputed
    from the database. Raises ValueError otherwise.
    """
    formula = instance.formula
    try:
        assignment = {v: bool(model[v]) for v in range(1, formula.num_vars + 1)}
    except (KeyError, IndexError):
        raise ValueError("model must assign every variable") from None
    if formula.evaluate(assignment) is not Status.SATISFIED:
        raise ValueError("assignment does not satisfy the instance")
    var_map = instance.var_map
    itemset = frozenset(
        item_id for item_id, var in enumerate(var_map.item_vars) if assignment[var]
    )
    decoded_cover = frozenset(
        tid for tid, var in zip(var_map.trans_tids, var_map.trans_vars) if assignment[var]
    )
    recomputed = cover(instance.db, itemset)
    if decoded_cover != recomputed:
        raise ValueError("decoded cover disagrees with the database")
    return MiningSolution(itemset, decoded_cover, len(decoded_cover))


def varmap_sidecar(instance: EncodedInstance) -> str:
    """Text sidecar naming the mining variables, one per line:
    'p <item-label> <var>' then 'q <tid> <var>'."""
    lines = []
    for item_id, var in enumerate(instance.var_map.item_vars):
        lines.append(f"p {instance.db.labels[item_id]} {var}")
    for tid, var in zip(instance.var_map.trans_tids, instance.var_map.trans_vars):
        lines.append(f"q {tid} {var}")
    return "\n".join(lines) + "\n"


def parse_varmap_sidecar(text: str) -> tuple[dict[str, int], dict[int, int]]:
    """Inverse of varmap_sidecar: (label -> item var, tid -> transaction var)."""
    item_vars: dict[str, int] = {}
    trans_vars: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        fields = stripped.split()
        if len(fields) != 3 or fields[0] not in ("p", "q"):
            raise ValueError(f"sidecar line {lineno}: malformed entry {stripped!r}")
        if fields[0] == "p":
            item_vars[fields[1]] = int(fields[2])
        else:
            trans_vars[int(fields[1])] = int(fields[2])
    return item_vars, trans_vars
