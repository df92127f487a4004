"""SAT-based frequent and closed itemset mining.

Encode a transaction database as CNF so that the models of the formula,
projected onto the item variables, are exactly the frequent (or closed
frequent) itemsets; then enumerate them with either a backtracking
enumerator that never grows the clause database or a conflict-driven
enumerator that blocks each found model with a fresh clause.
"""

from .bench import (
    RunRecord,
    RunSpec,
    agreement_warnings,
    export_instance,
    parse_bench_config,
    records_to_csv,
    resolve_threshold,
    run_matrix,
    run_single,
)
from .cardinality import CardinalityEncoding, count_projected_models, encode_at_least_k
from .cdcl import CdclEnumerator, enumerate_blocking, make_blocking_clause
from .cnf import (
    Assignment,
    Clause,
    CnfFormula,
    DimacsError,
    Literal,
    Status,
    Variable,
    parse_dimacs,
    write_dimacs,
)
from .dpll import DpllEnumerator, EnumerationError, enumerate_models
from .encoder import (
    EncodedInstance,
    VarMap,
    decode_model,
    encode_cfim,
    encode_closure,
    encode_cover,
    encode_fim,
    parse_varmap_sidecar,
    varmap_sidecar,
)
from .mining import (
    Item,
    MiningSolution,
    Transaction,
    TransactionDb,
    cover,
    parse_fimi,
    read_fimi,
    support,
)
from .oracle import PatternSet, is_closed, mine_closed, mine_frequent
from .stats import Budget, EnumerationStats

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Budget",
    "CardinalityEncoding",
    "CdclEnumerator",
    "Clause",
    "CnfFormula",
    "DimacsError",
    "DpllEnumerator",
    "EncodedInstance",
    "EnumerationError",
    "EnumerationStats",
    "Item",
    "Literal",
    "MiningSolution",
    "PatternSet",
    "RunRecord",
    "RunSpec",
    "Status",
    "Transaction",
    "TransactionDb",
    "VarMap",
    "Variable",
    "agreement_warnings",
    "count_projected_models",
    "cover",
    "decode_model",
    "encode_at_least_k",
    "encode_cfim",
    "encode_closure",
    "encode_cover",
    "encode_fim",
    "enumerate_blocking",
    "enumerate_models",
    "export_instance",
    "is_closed",
    "make_blocking_clause",
    "mine_closed",
    "mine_frequent",
    "parse_bench_config",
    "parse_dimacs",
    "parse_fimi",
    "parse_varmap_sidecar",
    "read_fimi",
    "records_to_csv",
    "resolve_threshold",
    "run_matrix",
    "run_single",
    "support",
    "varmap_sidecar",
    "write_dimacs",
]
