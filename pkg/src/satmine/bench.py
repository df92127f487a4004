"""Batch runner: sweep (dataset x threshold x algorithm), collect stats, emit CSV."""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .encoder import EncodedInstance, encode_cfim, encode_fim, varmap_sidecar
from .cnf import write_dimacs
from .dpll import enumerate_models
from .cdcl import enumerate_blocking
from .mining import TransactionDb, read_fimi
from .stats import Budget, EnumerationStats

ALGORITHMS = ("cdcl", "dpll-jw", "dpll-vsids", "dpll-rand")
VARIANTS = ("fim", "cfim")

CSV_HEADER = (
    "dataset,variant,threshold,algorithm,seed,models,conflicts,decisions,"
    "propagations,peak_clauses,elapsed_ms,status"
)

STATUS_COMPLETE = "complete"
STATUS_TIMEOUT = "timeout"
STATUS_ERROR = "error"

TIMEOUT_ENV_VAR = "SATMINE_TIMEOUT"
DEFAULT_TIMEOUT = 900.0


def default_timeout() -> float:
    """Default per-run timeout in seconds; SATMINE_TIMEOUT overrides."""
    raw = os.environ.get(TIMEOUT_ENV_VAR)
    if raw is None:
        return DEFAULT_TIMEOUT
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{TIMEOUT_ENV_VAR} must be a number, got {raw!r}") from None
    if value <= 0.0:
        raise ValueError(f"{TIMEOUT_ENV_VAR} must be positive, got {raw!r}")
    return value


def resolve_threshold(token, m: int) -> int:
    """Turn a threshold token into an absolute count for a database of m rows.

    Accepts a plain integer ("3"), a percentage ("5%"), or a fraction
    ("0.25"); relative forms are rounded up.
    """
    text = str(token).strip()
    if not text:
        raise ValueError("empty threshold token")
    try:
        if text.endswith("%"):
            fraction = float(text[:-1]) / 100.0
        elif "." in text or "e" in text.lower():
            fraction = float(text)
        else:
            n = int(text)
            if n < 0:
                raise ValueError
            return n
    except ValueError:
        raise ValueError(f"bad threshold token {text!r}") from None
    if fraction < 0.0:
        raise ValueError(f"bad threshold token {text!r}")
    return math.ceil(fraction * m)


@dataclass(frozen=True)
class RunSpec:
    """One benchmark matrix: a dataset swept over thresholds x algorithms."""

    dataset: str
    thresholds: tuple
    variant: str = "cfim"
    algorithms: tuple = ALGORITHMS
    seed: int = 0
    timeout: float = field(default_factory=default_timeout)
    exclude_empty: bool = True

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not self.thresholds:
            raise ValueError("thresholds must be non-empty")
        if not self.algorithms:
            raise ValueError("algorithms must be non-empty")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
        if self.timeout <= 0.0:
            raise ValueError("timeout must be positive")
        object.__setattr__(self, "thresholds", tuple(str(t) for t in self.thresholds))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))


@dataclass
class RunRecord:
    """Outcome of one (dataset, variant, threshold, algorithm) coordinate."""

    dataset: str
    variant: str
    threshold: int
    threshold_raw: str
    algorithm: str
    seed: int
    models: int
    stats: Optional[EnumerationStats]
    status: str
    digest: str = ""
    message: str = ""
    model_lines: Optional[tuple] = None

    def csv_row(self) -> str:
        s = self.stats if self.stats is not None else EnumerationStats()
        elapsed_ms = int(round(s.elapsed * 1000.0))
        fields = (
            self.dataset,
            self.variant,
            str(self.threshold),
            self.algorithm,
            str(self.seed),
            str(self.models),
            str(s.conflicts),
            str(s.decisions),
            str(s.propagations),
            str(s.peak_stored_clauses),
            str(elapsed_ms),
            self.status,
        )
        return ",".join(fields)


class _ModelCollector:
    # order-independent digest: sorted per-model hashes, then one outer hash
    def __init__(self, instance: EncodedInstance, keep_lines: bool):
        self.instance = instance
        self.hashes = []
        self.lines = [] if keep_lines else None

    def on_model(self, view) -> None:
        var_map = self.instance.var_map
        db = self.instance.db
        items = [i for i, var in enumerate(var_map.item_vars) if view[var]]
        key = ",".join(str(i) for i in items)
        self.hashes.append(hashlib.sha256(key.encode("ascii")).digest())
        if self.lines is not None:
            support = sum(
                1 for var in var_map.trans_vars if view[var]
            )
            labels = sorted(db.labels[i] for i in items)
            self.lines.append("%s #SUP: %d" % (" ".join(labels), support))

    def digest(self) -> str:
        outer = hashlib.sha256()
        for h in sorted(self.hashes):
            outer.update(h)
        return outer.hexdigest()

    def sorted_lines(self) -> tuple:
        assert self.lines is not None
        return tuple(sorted(self.lines))


def _encode(db: TransactionDb, variant: str, n: int, exclude_empty: bool) -> EncodedInstance:
    if variant == "fim":
        return encode_fim(db, n)
    return encode_cfim(db, n, exclude_empty=exclude_empty)


def _enumerate(instance: EncodedInstance, algorithm: str, seed: int,
               budget: Budget, on_model) -> EnumerationStats:
    if algorithm == "cdcl":
        return enumerate_blocking(
            instance.formula, projection=instance.projection,
            budget=budget, on_model=on_model,
        )
    heuristic = algorithm.split("-", 1)[1]
    return enumerate_models(
        instance.formula, decision_vars=instance.projection,
        heuristic=heuristic, seed=seed, budget=budget, on_model=on_model,
    )


def run_single(dataset: str, variant: str, threshold, algorithm: str,
               seed: int = 0, timeout: Optional[float] = None,
               exclude_empty: bool = True, keep_models: bool = False) -> RunRecord:
    """Encode one coordinate and enumerate it under a wall-clock budget."""
    if timeout is None:
        timeout = default_timeout()
    raw = str(threshold)
    try:
        db = read_fimi(dataset)
        n = resolve_threshold(raw, db.n_transactions)
        instance = _encode(db, variant, n, exclude_empty)
    except (OSError, ValueError) as exc:
        return RunRecord(
            dataset=dataset, variant=variant, threshold=-1, threshold_raw=raw,
            algorithm=algorithm, seed=seed, models=0, stats=None,
            status=STATUS_ERROR, message=str(exc),
        )
    collector = _ModelCollector(instance, keep_models)
    stats = _enumerate(instance, algorithm, seed, Budget(max_seconds=timeout),
                       collector.on_model)
    status = STATUS_COMPLETE if stats.completed else STATUS_TIMEOUT
    return RunRecord(
        dataset=dataset, variant=variant, threshold=n, threshold_raw=raw,
        algorithm=algorithm, seed=seed, models=stats.models_found, stats=stats,
        status=status, digest=collector.digest(),
        model_lines=collector.sorted_lines() if keep_models else None,
    )


def _matrix_coord(args) -> RunRecord:
    spec, threshold, algorithm = args
    return run_single(
        spec.dataset, spec.variant, threshold, algorithm,
        seed=spec.seed, timeout=spec.timeout, exclude_empty=spec.exclude_empty,
    )


def run_matrix(spec: RunSpec, jobs: int = 1) -> list:
    """Execute the full threshold x algorithm cross product, in spec order."""
    coords = [
        (spec, threshold, algorithm)
        for threshold in spec.thresholds
        for algorithm in spec.algorithms
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_matrix_coord, coords))
    return [_matrix_coord(coord) for coord in coords]


def agreement_warnings(records: Sequence[RunRecord]) -> list:
    """Completed rows on the same coordinate must agree on the model set."""
    groups = {}
    for rec in records:
        if rec.status != STATUS_COMPLETE:
            continue
        key = (rec.dataset, rec.variant, rec.threshold)
        groups.setdefault(key, []).append(rec)
    warnings = []
    for key, recs in groups.items():
        digests = {rec.digest for rec in recs}
        if len(digests) > 1:
            algos = ", ".join(sorted(rec.algorithm for rec in recs))
            warnings.append(
                "model sets disagree on %s/%s n=%d across {%s}" % (key + (algos,))
            )
    return warnings


def records_to_csv(records: Sequence[RunRecord]) -> str:
    return "\n".join([CSV_HEADER] + [rec.csv_row() for rec in records]) + "\n"


def export_instance(dataset: str, variant: str, threshold, out_path: str,
                    exclude_empty: bool = True) -> tuple:
    """Write the encoded instance as DIMACS plus a '.map' variable sidecar."""
    db = read_fimi(dataset)
    n = resolve_threshold(str(threshold), db.n_transactions)
    instance = _encode(db, variant, n, exclude_empty)
    map_path = out_path + ".map"
    with open(out_path, "w", encoding="ascii") as handle:
        handle.write(write_dimacs(instance.formula))
    with open(map_path, "w", encoding="ascii") as handle:
        handle.write(varmap_sidecar(instance))
    return out_path, map_path


_CONFIG_KEYS = (
    "dataset", "variant", "threshold", "algorithm", "seed", "timeout",
    "exclude_empty",
)


def parse_bench_config(text: str) -> list:
    """Parse a key=value sweep description into RunSpecs.

    Repeatable keys: dataset, variant, threshold, algorithm. One RunSpec is
    produced per dataset x variant. '#' starts a comment.
    """
    datasets, variants, thresholds, algorithms = [], [], [], []
    seed, timeout, exclude_empty = 0, None, True
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected key=value")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        if not value:
            raise ValueError(f"config line {lineno}: empty value for {key!r}")
        if key == "dataset":
            datasets.append(value)
        elif key == "variant":
            if value not in VARIANTS:
                raise ValueError(f"config line {lineno}: unknown variant {value!r}")
            variants.append(value)
        elif key == "threshold":
            thresholds.append(value)
        elif key == "algorithm":
            if value == "all":
                algorithms.extend(ALGORITHMS)
            elif value in ALGORITHMS:
                algorithms.append(value)
            else:
                raise ValueError(f"config line {lineno}: unknown algorithm {value!r}")
        elif key == "seed":
            seed = int(value)
        elif key == "timeout":
            timeout = float(value)
        elif key == "exclude_empty":
            lowered = value.lower()
            if lowered not in ("true", "false"):
                raise ValueError(f"config line {lineno}: exclude_empty must be true/false")
            exclude_empty = lowered == "true"
    if not datasets:
        raise ValueError("config names no dataset")
    if not thresholds:
        raise ValueError("config names no threshold")
    if not variants:
        variants = ["cfim"]
    if not algorithms:
        algorithms = list(ALGORITHMS)
    if timeout is None:
        timeout = default_timeout()
    specs = []
    for dataset in datasets:
        for variant in variants:
            specs.append(RunSpec(
                dataset=dataset, thresholds=tuple(thresholds), variant=variant,
                algorithms=tuple(dict.fromkeys(algorithms)), seed=seed,
                timeout=timeout, exclude_empty=exclude_empty,
            ))
    return specs
