"""Command line front end: mine, bench, export, check."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .bench import (
    ALGORITHMS,
    VARIANTS,
    STATUS_COMPLETE,
    STATUS_ERROR,
    agreement_warnings,
    export_instance,
    parse_bench_config,
    records_to_csv,
    resolve_threshold,
    run_matrix,
    run_single,
)
from .mining import cover, read_fimi
from .oracle import MAX_ORACLE_ITEMS, mine_closed, mine_frequent

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2
EXIT_TIMEOUT = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satmine",
        description="Frequent/closed itemset mining via AllSAT enumeration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mine = sub.add_parser("mine", help="enumerate patterns of one dataset")
    mine.add_argument("dataset", help="transaction file, one basket per line")
    mine.add_argument("--variant", choices=VARIANTS, default="cfim")
    mine.add_argument("--min-support", required=True, metavar="N|x%",
                      help="absolute count, percentage, or fraction (rounded up)")
    mine.add_argument("--algo", choices=ALGORITHMS, default="dpll-jw")
    mine.add_argument("--seed", type=int, default=0,
                      help="RNG seed (used by dpll-rand)")
    mine.add_argument("--timeout", type=float, default=None, metavar="SECS",
                      help="wall-clock budget (default: SATMINE_TIMEOUT or 900)")
    mine.add_argument("--include-empty", action="store_true",
                      help="keep the empty itemset in cfim output")
    mine.add_argument("--dump-models", metavar="PATH", default=None,
                      help="also write the sorted pattern lines to PATH")

    bench = sub.add_parser("bench", help="run a sweep described by a config file")
    bench.add_argument("--spec", required=True, metavar="FILE",
                       help="key=value config: dataset/variant/threshold/algorithm...")
    bench.add_argument("--out", default=None, metavar="CSV",
                       help="CSV destination (default: stdout)")
    bench.add_argument("--jobs", type=int, default=1,
                       help="parallel workers for matrix coordinates")

    export = sub.add_parser("export", help="write DIMACS plus variable-map sidecar")
    export.add_argument("dataset")
    export.add_argument("--variant", choices=VARIANTS, default="cfim")
    export.add_argument("--min-support", required=True, metavar="N|x%")
    export.add_argument("--out", required=True, metavar="PATH",
                        help="DIMACS path; the sidecar lands at PATH.map")
    export.add_argument("--include-empty", action="store_true")

    check = sub.add_parser("check", help="cross-validate all solvers against the oracle")
    check.add_argument("dataset", help=f"small dataset (at most {MAX_ORACLE_ITEMS} items)")
    check.add_argument("--min-support", required=True, metavar="N|x%")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--timeout", type=float, default=None, metavar="SECS")
    return parser


def _cmd_mine(args) -> int:
    record = run_single(
        args.dataset, args.variant, args.min_support, args.algo,
        seed=args.seed, timeout=args.timeout,
        exclude_empty=not args.include_empty, keep_models=True,
    )
    if record.status == STATUS_ERROR:
        print(f"satmine: {record.message}", file=sys.stderr)
        return EXIT_ERROR
    assert record.model_lines is not None
    for line in record.model_lines:
        print(line)
    if args.dump_models is not None:
        with open(args.dump_models, "w", encoding="utf-8") as handle:
            for line in record.model_lines:
                handle.write(line + "\n")
    s = record.stats
    print(
        "status=%s models=%d conflicts=%d decisions=%d propagations=%d "
        "peak_clauses=%d elapsed=%.3fs"
        % (record.status, record.models, s.conflicts, s.decisions,
           s.propagations, s.peak_stored_clauses, s.elapsed),
        file=sys.stderr,
    )
    return EXIT_OK if record.status == STATUS_COMPLETE else EXIT_TIMEOUT


def _cmd_bench(args) -> int:
    try:
        with open(args.spec, "r", encoding="utf-8") as handle:
            specs = parse_bench_config(handle.read())
    except (OSError, ValueError) as exc:
        print(f"satmine: {exc}", file=sys.stderr)
        return EXIT_ERROR
    records = []
    for spec in specs:
        records.extend(run_matrix(spec, jobs=args.jobs))
    csv_text = records_to_csv(records)
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
    for warning in agreement_warnings(records):
        print(f"satmine: warning: {warning}", file=sys.stderr)
    incomplete = sum(1 for rec in records if rec.status != STATUS_COMPLETE)
    print(f"{len(records)} rows ({incomplete} not complete)", file=sys.stderr)
    return EXIT_OK


def _cmd_export(args) -> int:
    try:
        cnf_path, map_path = export_instance(
            args.dataset, args.variant, args.min_support, args.out,
            exclude_empty=not args.include_empty,
        )
    except (OSError, ValueError) as exc:
        print(f"satmine: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(cnf_path)
    print(map_path)
    return EXIT_OK


def _oracle_lines(db, patterns) -> tuple:
    lines = []
    for itemset in patterns.itemsets():
        support = len(cover(db, itemset))
        labels = sorted(db.labels[i] for i in itemset)
        lines.append("%s #SUP: %d" % (" ".join(labels), support))
    return tuple(sorted(lines))


def _cmd_check(args) -> int:
    try:
        db = read_fimi(args.dataset)
        n = resolve_threshold(args.min_support, db.n_transactions)
        expected = {
            "fim": _oracle_lines(db, mine_frequent(db, n)),
            "cfim": _oracle_lines(db, mine_closed(db, max(n, 1))),
        }
    except (OSError, ValueError) as exc:
        print(f"satmine: {exc}", file=sys.stderr)
        return EXIT_ERROR
    ok = True
    for variant in VARIANTS:
        # cfim with n=0 is meaningless for the oracle; mine at n>=1
        threshold = n if variant == "fim" else max(n, 1)
        counts = [f"oracle={len(expected[variant])}"]
        variant_ok = True
        for algo in ALGORITHMS:
            record = run_single(
                args.dataset, variant, threshold, algo,
                seed=args.seed, timeout=args.timeout, keep_models=True,
            )
            if record.status != STATUS_COMPLETE:
                counts.append(f"{algo}={record.status}")
                variant_ok = False
                continue
            counts.append(f"{algo}={record.models}")
            if record.model_lines != expected[variant]:
                variant_ok = False
        verdict = "ok" if variant_ok else "MISMATCH"
        print(f"{variant} n={threshold}: {' '.join(counts)} {verdict}")
        ok = ok and variant_ok
    return EXIT_OK if ok else EXIT_MISMATCH


def main(argv: Optional[list] = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "mine": _cmd_mine,
        "bench": _cmd_bench,
        "export": _cmd_export,
        "check": _cmd_check,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
