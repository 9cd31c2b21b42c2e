"""Monte-Carlo benchmark harness: coverage, width and zero-proportion.

Runs the three confidence constructions over synthetic datasets drawn under
the three variance regimes and writes one CSV row per (data regime, method,
repetition) plus an aggregate summary JSON. Per-repetition generator
substreams are derived from an entropy tuple (seed, truth, n, repetition),
so repetitions are independent, reproducible, and safe to farm out to
worker processes; rows are ordered deterministically before writing so
parallelism never changes output bytes (the runtime column is measured
wall time and is the one exception).
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .confidence import conf_ev, conf_general, conf_pev
from .exceptions import CausalConfError
from .matrixcore import empirical_covariance, invert_pd
from .scm import (
    FULL_EV,
    GENERAL,
    PARTIAL_EV,
    Regime,
    generate_benchmark_scm,
    sample,
    true_effect,
)

logger = logging.getLogger("causalconf.benchmark")

DATA_REGIMES = (GENERAL, PARTIAL_EV, FULL_EV)
METHODS = ("general_conf", "partial_ev_conf", "ev_conf")
TRUTHS = ("nonzero", "zero")

CSV_COLUMNS = (
    "rep",
    "data_regime",
    "method",
    "true_effect",
    "covered",
    "width",
    "contains_zero",
    "runtime_ms",
)

_CONF_FN = {"general_conf": conf_general, "partial_ev_conf": conf_pev, "ev_conf": conf_ev}

# Tolerance used when checking whether a region covers the true effect.
COVER_ATOL = 1e-9


@dataclass
class BenchmarkConfig:
    """Configuration of one benchmark invocation."""

    d: int = 10
    n_values: tuple[int, ...] = (100, 1000, 10000)
    reps: int = 1000
    alpha: float = 0.05
    data_regimes: tuple[str, ...] = DATA_REGIMES
    methods: tuple[str, ...] = METHODS
    effect_truth: str = "nonzero"
    i: int = 0
    j: int = 1
    seed: int = 0
    out: str = "bench"
    workers: int = 1

    def __post_init__(self):
        self.n_values = tuple(int(n) for n in self.n_values)
        self.data_regimes = tuple(self.data_regimes)
        self.methods = tuple(self.methods)
        if self.d < 3:
            raise ValueError(f"benchmark needs d >= 3, got d={self.d}")
        if self.reps < 1:
            raise ValueError(f"need at least one repetition, got {self.reps}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie strictly in (0, 1), got {self.alpha}")
        if self.i == self.j:
            raise ValueError("query nodes must be distinct")
        if not all(0 <= k < self.d for k in (self.i, self.j)):
            raise ValueError("query nodes out of range")
        if not self.n_values or any(n < self.d for n in self.n_values):
            raise ValueError("every sample size must be at least d")
        for r in self.data_regimes:
            if r not in DATA_REGIMES:
                raise ValueError(f"unknown data regime {r!r}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        if self.effect_truth not in TRUTHS:
            raise ValueError(f"unknown effect truth {self.effect_truth!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["n_values"] = list(self.n_values)
        doc["data_regimes"] = list(self.data_regimes)
        doc["methods"] = list(self.methods)
        return doc


def _regime_for(kind: str, i: int, j: int) -> Regime:
    if kind == GENERAL:
        return Regime.general()
    if kind == PARTIAL_EV:
        return Regime.partial_ev(i, j)
    return Regime.full_ev()


def rep_entropy(seed: int, truth: str, n: int, rep: int) -> tuple:
    """Entropy tuple feeding the per-repetition generator substream.

    Deliberately independent of the data regime: a repetition draws the
    same graph and weights under every regime (the variance laws consume
    the stream only after graph acceptance), so regime comparisons use
    common random numbers.
    """
    return (seed, TRUTHS.index(truth), n, rep)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _run_repetition(task: tuple) -> tuple:
    """One (data regime, repetition) cell: rows for every method.

    Returns (rows, failures); a failure while producing the shared dataset
    voids every method of the repetition, a failure inside one construction
    voids only that method.
    """
    d, n, alpha, regime_kind, methods, truth, i, j, seed, rep = task
    rows = []
    failures = []
    entropy = rep_entropy(seed, truth, n, rep)
    try:
        scm = generate_benchmark_scm(
            d, _regime_for(regime_kind, i, j), truth == "nonzero", i, j, seed=entropy
        )
        effect = true_effect(scm, i, j)
        data = sample(scm, n, seed=entropy + (1,))
        prec = invert_pd(empirical_covariance(data))
    except CausalConfError as exc:
        for method in methods:
            failures.append((regime_kind, method, rep, f"data stage: {exc}"))
        return rows, failures
    for method in methods:
        try:
            start = time.perf_counter()
            region = _CONF_FN[method](prec, n, i, j, alpha)
            runtime_ms = (time.perf_counter() - start) * 1000.0
        except CausalConfError as exc:
            failures.append((regime_kind, method, rep, str(exc)))
            continue
        if truth == "zero":
            covered = region.includes_zero()
        else:
            covered = region.contains(effect, atol=COVER_ATOL)
        rows.append(
            {
                "rep": rep,
                "data_regime": regime_kind,
                "method": method,
                "true_effect": effect,
                "covered": int(covered),
                "width": region.width(),
                "contains_zero": int(region.includes_zero()),
                "runtime_ms": runtime_ms,
            }
        )
    return rows, failures


def run_cells(config: BenchmarkConfig, n: int):
    """All rows and failures for one sample size, deterministically ordered."""
    tasks = [
        (
            config.d,
            n,
            config.alpha,
            regime_kind,
            config.methods,
            config.effect_truth,
            config.i,
            config.j,
            config.seed,
            rep,
        )
        for regime_kind in config.data_regimes
        for rep in range(config.reps)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_run_repetition, tasks, chunksize=8))
    else:
        outcomes = [_run_repetition(t) for t in tasks]
    rows = [row for out, _ in outcomes for row in out]
    failures = [f for _, fails in outcomes for f in fails]
    regime_pos = {r: t for t, r in enumerate(config.data_regimes)}
    method_pos = {m: t for t, m in enumerate(config.methods)}
    rows.sort(
        key=lambda r: (regime_pos[r["data_regime"]], method_pos[r["method"]], r["rep"])
    )
    for regime_kind, method, rep, message in failures:
        logger.warning(
            "excluded repetition %d (%s, %s): %s", rep, regime_kind, method, message
        )
    return rows, failures


def summarize(config: BenchmarkConfig, n: int, rows, failures) -> dict:
    """Aggregate per-cell metrics; plain sums so recomputation is exact."""
    cells = []
    for regime_kind in config.data_regimes:
        for method in config.methods:
            cell_rows = [
                r
                for r in rows
                if r["data_regime"] == regime_kind and r["method"] == method
            ]
            failed = sum(
                1 for rk, m, _, _ in failures if rk == regime_kind and m == method
            )
            used = len(cell_rows)
            cell = {
                "data_regime": regime_kind,
                "method": method,
                "reps_used": used,
                "failed": failed,
                "coverage": sum(r["covered"] for r in cell_rows) / used if used else None,
                "mean_width": sum(r["width"] for r in cell_rows) / used if used else None,
                "zero_proportion": sum(r["contains_zero"] for r in cell_rows) / used
                if used
                else None,
            }
            cells.append(cell)
    return {"config": config.to_json(), "n": n, "cells": cells}


def write_rows_csv(path: Path, rows) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(
            ",".join(
                (
                    str(r["rep"]),
                    r["data_regime"],
                    r["method"],
                    _fmt(r["true_effect"]),
                    str(r["covered"]),
                    _fmt(r["width"]),
                    str(r["contains_zero"]),
                    _fmt(r["runtime_ms"]),
                )
            )
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def run_benchmark(config: BenchmarkConfig) -> list[Path]:
    """Execute the benchmark; one CSV + summary JSON per sample size.

    With a single sample size the files are ``<out>.csv`` and
    ``<out>_summary.json``; with several, each pair gains an ``_n<value>``
    suffix so every CSV keeps the fixed column schema.
    """
    written = []
    multi = len(config.n_values) > 1
    for n in config.n_values:
        rows, failures = run_cells(config, n)
        stem = f"{config.out}_n{n}" if multi else str(config.out)
        csv_path = Path(f"{stem}.csv")
        write_rows_csv(csv_path, rows)
        summary_path = Path(f"{stem}_summary.json")
        summary_path.parent.mkdir(parents=True, exist_ok=True)
        with open(summary_path, "w", newline="") as fh:
            fh.write(json.dumps(summarize(config, n, rows, failures), indent=2) + "\n")
        written.extend([csv_path, summary_path])
    return written


def simulate_datasets(
    d: int,
    n: int,
    reps: int,
    regime_kind: str,
    truth: str,
    i: int,
    j: int,
    seed: int,
    out: str,
) -> list[Path]:
    """Write one SCM JSON + one samples CSV per repetition, plus a manifest.

    Uses the same per-repetition substreams as the benchmark, so a simulated
    dataset reproduces the matching benchmark repetition exactly.
    """
    if regime_kind not in DATA_REGIMES:
        raise ValueError(f"unknown data regime {regime_kind!r}")
    if truth not in TRUTHS:
        raise ValueError(f"unknown effect truth {truth!r}")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for rep in range(reps):
        entropy = rep_entropy(seed, truth, n, rep)
        scm = generate_benchmark_scm(
            d, _regime_for(regime_kind, i, j), truth == "nonzero", i, j, seed=entropy
        )
        data = sample(scm, n, seed=entropy + (1,))
        scm_path = out_dir / f"scm_{rep:04d}.json"
        with open(scm_path, "w", newline="") as fh:
            fh.write(json.dumps(scm.to_json(), indent=2) + "\n")
        data_path = out_dir / f"data_{rep:04d}.csv"
        header = ",".join(f"x{k}" for k in range(d))
        lines = [header]
        for row in data.rows:
            lines.append(",".join(_fmt(v) for v in row))
        with open(data_path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        entries.append(
            {
                "rep": rep,
                "scm": scm_path.name,
                "data": data_path.name,
                "true_effect": true_effect(scm, i, j),
            }
        )
    manifest = {
        "d": d,
        "n": n,
        "reps": reps,
        "data_regime": regime_kind,
        "effect_truth": truth,
        "i": i,
        "j": j,
        "seed": seed,
        "files": entries,
    }
    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w", newline="") as fh:
        fh.write(json.dumps(manifest, indent=2) + "\n")
    return [manifest_path]
