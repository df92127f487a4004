"""CNF encoding tests: golden clauses, bijections, decoding, sidecars."""

import random

import pytest

from satmine import (
    Status,
    decode_model,
    encode_at_least_k,
    encode_cfim,
    encode_closure,
    encode_cover,
    encode_fim,
    mine_closed,
    mine_frequent,
    parse_fimi,
    parse_varmap_sidecar,
    varmap_sidecar,
)
from satmine.encoder import build_var_map

from helpers import DEMO_TEXT, random_db, unit_propagate

# Golden clauses for the demo database at threshold 4, no empty-set
# exclusion. Variables: p_A..p_G = 1..7, q_1..q_7 = 8..14, counter cells
# from 15. Derived by hand from the seven transactions.
GOLDEN_COVER = [
    (8, 5, 6, 7), (-5, -8), (-6, -8), (-7, -8),
    (9, 3, 4, 7), (-3, -9), (-4, -9), (-7, -9),
    (10, 4, 5, 6, 7), (-4, -10), (-5, -10), (-6, -10), (-7, -10),
    (11, 2, 5, 7), (-2, -11), (-5, -11), (-7, -11),
    (12, 1, 2, 3, 4, 5, 6),
    (-1, -12), (-2, -12), (-3, -12), (-4, -12), (-5, -12), (-6, -12),
    (13, 1, 2, 3, 5, 6, 7),
    (-1, -13), (-2, -13), (-3, -13), (-5, -13), (-6, -13), (-7, -13),
    (14, 1, 2, 3, 5, 6),
    (-1, -14), (-2, -14), (-3, -14), (-5, -14), (-6, -14),
]
GOLDEN_CLOSURE = [
    (12, 13, 14, 1),
    (11, 12, 13, 14, 2),
    (9, 12, 13, 14, 3),
    (9, 10, 12, 4),
    (8, 10, 11, 12, 13, 14, 5),
    (8, 10, 12, 13, 14, 6),
    (8, 9, 10, 11, 13, 7),
]


def demo_db():
    return parse_fimi(DEMO_TEXT)


def up_projection_scan(instance):
    """Item subsets whose forced extension satisfies the formula.

    Unit propagation alone must determine every q and counter variable from
    a full item assignment, so this is an enumerator-free model projection.
    """
    db = instance.db
    formula = instance.formula
    item_vars = instance.var_map.item_vars
    found = set()
    for pattern in range(1 << len(item_vars)):
        fixed = {v: bool(pattern >> i & 1) for i, v in enumerate(item_vars)}
        result = unit_propagate(formula.clauses, fixed)
        if result is None:
            continue
        assert len(result) == formula.num_vars, "propagation left variables open"
        assert formula.evaluate(result) is Status.SATISFIED
        found.add(frozenset(i for i, v in enumerate(item_vars) if fixed[v]))
    return found


def test_var_map_layout():
    db = demo_db()
    inst = encode_cfim(db, 4, exclude_empty=False)
    vm = inst.var_map
    assert vm.item_vars == tuple(range(1, 8))
    assert vm.trans_tids == tuple(range(1, 8))
    assert vm.trans_vars == tuple(range(8, 15))
    assert vm.aux_vars == tuple(range(15, 15 + len(vm.aux_vars)))
    assert inst.projection == vm.item_vars
    assert inst.formula.num_vars == 14 + len(vm.aux_vars)
    assert vm.item_var(3) == 4
    assert vm.trans_var(7) == 14


def test_golden_clause_set_threshold_four():
    db = demo_db()
    inst = encode_cfim(db, 4, exclude_empty=False)
    card = encode_at_least_k(tuple(range(8, 15)), 4, 15)
    expected = GOLDEN_COVER + list(card.clauses) + GOLDEN_CLOSURE
    assert inst.formula.clauses == expected
    # the counter block is semantically "at least 4 of q_1..q_7"
    assert sorted(card.aux_vars) == list(range(15, 15 + len(card.aux_vars)))


def test_golden_cover_block_alone():
    db = demo_db()
    vm = build_var_map(db)
    assert encode_cover(db, vm) == GOLDEN_COVER


def test_golden_closure_block_alone():
    db = demo_db()
    vm = build_var_map(db)
    assert encode_closure(db, vm) == GOLDEN_CLOSURE


def test_cover_unit_when_transaction_holds_universe():
    db = parse_fimi("a b\na\n")
    vm = build_var_map(db)
    clauses = encode_cover(db, vm)
    assert clauses[0] == (3,)  # q_1: nothing lies outside transaction 1
    assert clauses[1:] == [(4, 2), (-2, -4)]


def test_closure_unit_when_item_is_everywhere():
    db = parse_fimi("a b\na\n")
    vm = build_var_map(db)
    clauses = encode_closure(db, vm)
    assert clauses[0] == (1,)  # item a occurs in every transaction
    assert clauses[1] == (4, 2)


def test_cover_clause_count_formula():
    rng = random.Random(505)
    for _ in range(30):
        db = random_db(rng, max_items=8, max_trans=10)
        vm = build_var_map(db)
        clauses = encode_cover(db, vm)
        expected = sum(
            1 if len(t.items) == db.n_items else db.n_items - len(t.items) + 1
            for t in db.transactions
        )
        assert len(clauses) == expected
        assert len(encode_closure(db, vm)) == db.n_items


def test_fim_projections_match_oracle_on_demo():
    db = demo_db()
    inst = encode_fim(db, 2)
    assert inst.variant == "fim"
    assert inst.threshold == 2
    assert up_projection_scan(inst) == mine_frequent(db, 2).itemsets()


def test_cfim_projections_match_oracle_on_demo():
    db = demo_db()
    inst = encode_cfim(db, 2)
    assert inst.variant == "cfim"
    assert up_projection_scan(inst) == mine_closed(db, 2).itemsets()


def test_cfim_empty_set_convention():
    db = demo_db()
    without = up_projection_scan(encode_cfim(db, 2, exclude_empty=True))
    with_empty = up_projection_scan(encode_cfim(db, 2, exclude_empty=False))
    assert len(without) == 8
    assert len(with_empty) == 9
    assert with_empty - without == {frozenset()}


def test_fim_threshold_zero_accepts_everything():
    db = parse_fimi("a b\nb c\n")
    inst = encode_fim(db, 0)
    assert inst.var_map.aux_vars == ()
    assert len(up_projection_scan(inst)) == 8  # all 2^3 subsets


def test_fim_threshold_above_m_is_unsat():
    db = parse_fimi("a b\nb c\n")
    inst = encode_fim(db, 3)
    assert inst.formula.has_empty_clause
    assert up_projection_scan(inst) == set()


def test_negative_threshold_rejected():
    db = demo_db()
    with pytest.raises(ValueError):
        encode_fim(db, -1)


def test_fim_bijection_random_dbs():
    rng = random.Random(606)
    for _ in range(15):
        db = random_db(rng, max_items=6, max_trans=8)
        n = rng.randint(0, db.n_transactions + 1)
        inst = encode_fim(db, n)
        assert up_projection_scan(inst) == mine_frequent(db, n).itemsets(), (db, n)


def test_cfim_bijection_random_dbs():
    rng = random.Random(707)
    for _ in range(15):
        db = random_db(rng, max_items=6, max_trans=8)
        n = rng.randint(1, db.n_transactions + 1)
        inst = encode_cfim(db, n)
        expected = mine_closed(db, n).itemsets()
        assert up_projection_scan(inst) == expected, (db, n)


def test_decode_model_round_trip():
    db = demo_db()
    inst = encode_fim(db, 2)
    item_vars = inst.var_map.item_vars
    chosen = db.ids_of(("A", "B"))
    fixed = {v: (i in chosen) for i, v in enumerate(item_vars)}
    model = unit_propagate(inst.formula.clauses, fixed)
    assert model is not None
    solution = decode_model(inst, model)
    assert solution.itemset == chosen
    assert solution.cover == frozenset((1, 2, 3))
    assert solution.support == 3


def test_decode_model_rejects_partial_assignment():
    db = demo_db()
    inst = encode_fim(db, 2)
    with pytest.raises(ValueError, match="every variable"):
        decode_model(inst, {1: True})


def test_decode_model_rejects_non_model():
    db = demo_db()
    inst = encode_fim(db, 2)
    everything_true = {v: True for v in range(1, inst.formula.num_vars + 1)}
    with pytest.raises(ValueError):
        decode_model(inst, everything_true)


def test_sidecar_round_trip():
    db = demo_db()
    inst = encode_cfim(db, 2)
    text = varmap_sidecar(inst)
    assert text.startswith("p A 1\n")
    assert "q 7 14" in text
    item_vars, trans_vars = parse_varmap_sidecar(text)
    assert item_vars == {label: i + 1 for i, label in enumerate(db.labels)}
    assert trans_vars == {tid: 7 + tid for tid in range(1, 8)}


def test_sidecar_rejects_malformed_lines():
    with pytest.raises(ValueError, match="line 2"):
        parse_varmap_sidecar("p A 1\nzz\n")
