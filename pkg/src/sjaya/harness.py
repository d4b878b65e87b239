"""Batch experiment runner: repeated seeded runs, metrics, CSV/markdown export.

Three metrics are collected over the runs of a batch:

* best-of-run fitness (best / mean / sample std over all runs),
* FirstHitEvals -- the evaluation count at which a run first produces a
  solution meeting the problem's success target (stats over successful
  runs only),
* success count -- how many runs ever meet the target.

Run k of a batch uses seed base_seed + k.  The initialization stream
depends only on the seed, so batches of different variants with the same
base_seed start every run from the identical initial population.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from . import catalog
from .optimizer import OptimizerConfig, RunTrace, run
from .problem import EvaluationError, Problem

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

SUMMARY_COLUMNS = (
    "function", "pop", "gens",
    "fit_best", "fit_mean", "fit_std",
    "success", "fhe_best", "fhe_mean", "fhe_std",
)
RUNS_COLUMNS = ("seed", "best_fitness", "first_hit_evals")


class BatchError(RuntimeError):
    """A run inside a batch failed; the message cites the offending seed."""


@dataclass(frozen=True)
class ExperimentRow:
    """One batch: a problem, optimizer settings, and a seed block."""

    problem: str
    pop_size: int
    generations: int
    n_runs: int = 30
    variant: str = "sjaya"
    base_seed: int = 0
    r_schedule: str = "per_generation"

    def __post_init__(self):
        if self.n_runs < 1:
            raise ValueError("n_runs must be at least 1")


@dataclass(frozen=True)
class RunRecord:
    seed: int
    best_fitness: float
    first_hit: Optional[int]


@dataclass(frozen=True)
class MetricStats:
    """best/mean/sample-std of one metric over n values (std 0 when n < 2)."""

    n: int
    best: float
    mean: float
    std: float

    @property
    def degenerate(self) -> bool:
        return self.n < 2


@dataclass(frozen=True)
class BatchSummary:
    row: ExperimentRow
    fitness: MetricStats
    success_count: int
    first_hit: Optional[MetricStats]
    records: tuple

    @property
    def summary_row(self) -> "SummaryRow":
        fh = self.first_hit
        return SummaryRow(
            function=self.row.problem,
            pop=self.row.pop_size,
            gens=self.row.generations,
            fit_best=self.fitness.best,
            fit_mean=self.fitness.mean,
            fit_std=self.fitness.std,
            success=self.success_count,
            fhe_best=None if fh is None else int(fh.best),
            fhe_mean=None if fh is None else fh.mean,
            fhe_std=None if fh is None else fh.std,
        )


@dataclass(frozen=True)
class SummaryRow:
    """One exported line of a summary table."""

    function: str
    pop: int
    gens: int
    fit_best: float
    fit_mean: float
    fit_std: float
    success: int
    fhe_best: Optional[int]
    fhe_mean: Optional[float]
    fhe_std: Optional[float]


def first_hit_evals(trace: RunTrace, target: float) -> Optional[int]:
    """Smallest evaluation count at which best-so-far reached the target."""
    for evals, fitness in trace.improvements:
        if fitness <= target:
            return evals
    return None


def _metric_stats(values: Sequence[float]) -> MetricStats:
    arr = np.asarray(values, dtype=float)
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return MetricStats(n=arr.size, best=float(arr.min()), mean=float(arr.mean()), std=std)


def summarize_records(row: ExperimentRow, records: Sequence[RunRecord]) -> BatchSummary:
    """Aggregate per-run records into a BatchSummary (pure reduction)."""
    fitness = _metric_stats([r.best_fitness for r in records])
    hits = [r.first_hit for r in records if r.first_hit is not None]
    first_hit = _metric_stats(hits) if hits else None
    return BatchSummary(
        row=row,
        fitness=fitness,
        success_count=len(hits),
        first_hit=first_hit,
        records=tuple(records),
    )


def _run_record(problem: Problem, config: OptimizerConfig, target: Optional[float]) -> RunRecord:
    try:
        trace = run(problem, config)
    except EvaluationError as exc:
        raise BatchError(f"run with seed {config.seed} failed: {exc}") from exc
    hit = None if target is None else first_hit_evals(trace, target)
    return RunRecord(seed=config.seed, best_fitness=trace.best_fitness, first_hit=hit)


def execute_batch(
    row: ExperimentRow,
    problem: Optional[Problem] = None,
    workers: int = 1,
) -> BatchSummary:
    """Run the batch and aggregate.  Runs are independent, so ``workers``
    may fan them out over processes; the reduction order is fixed by seed
    regardless of completion order."""
    if problem is None:
        problem = catalog.get_problem(row.problem)
    configs = [
        OptimizerConfig(
            pop_size=row.pop_size,
            generations=row.generations,
            seed=row.base_seed + k,
            variant=row.variant,
            r_schedule=row.r_schedule,
        )
        for k in range(row.n_runs)
    ]
    target = problem.success_target
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(_run_record, [problem] * len(configs), configs,
                         [target] * len(configs))
            )
    else:
        records = [_run_record(problem, config, target) for config in configs]
    return summarize_records(row, records)


# ---------------------------------------------------------------------------
# rendering and parsing

def _full(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def format_number(value, decimals: int = 4) -> str:
    """Fixed-point with ``decimals`` places; scientific once that would
    round to nothing."""
    if value is None:
        return "---"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value == 0.0:
        return "0.0"
    if abs(value) < 0.5 * 10.0 ** (-decimals):
        return f"{value:.{decimals}e}"
    return f"{value:.{decimals}f}"


def summary_to_csv(rows: Sequence[Union[BatchSummary, SummaryRow]]) -> str:
    """Full-precision CSV, one line per batch; absent first-hit cells empty."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        s = row.summary_row if isinstance(row, BatchSummary) else row
        writer.writerow([
            s.function, s.pop, s.gens,
            _full(s.fit_best), _full(s.fit_mean), _full(s.fit_std),
            s.success, _full(s.fhe_best), _full(s.fhe_mean), _full(s.fhe_std),
        ])
    return out.getvalue()


def parse_summary_csv(text: str) -> List[SummaryRow]:
    reader = csv.DictReader(io.StringIO(text))
    missing = set(SUMMARY_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"summary CSV is missing columns: {sorted(missing)}")
    rows = []
    for rec in reader:
        rows.append(SummaryRow(
            function=rec["function"],
            pop=int(rec["pop"]),
            gens=int(rec["gens"]),
            fit_best=float(rec["fit_best"]),
            fit_mean=float(rec["fit_mean"]),
            fit_std=float(rec["fit_std"]),
            success=int(rec["success"]),
            fhe_best=int(float(rec["fhe_best"])) if rec["fhe_best"] else None,
            fhe_mean=float(rec["fhe_mean"]) if rec["fhe_mean"] else None,
            fhe_std=float(rec["fhe_std"]) if rec["fhe_std"] else None,
        ))
    return rows


def summary_to_markdown(rows: Sequence[Union[BatchSummary, SummaryRow]]) -> str:
    """Markdown table rounded at the fourth decimal place; "---" for absent."""
    lines = [
        "| " + " | ".join(SUMMARY_COLUMNS) + " |",
        "|" + "---|" * len(SUMMARY_COLUMNS),
    ]
    for row in rows:
        s = row.summary_row if isinstance(row, BatchSummary) else row
        cells = [
            s.function, str(s.pop), str(s.gens),
            format_number(s.fit_best), format_number(s.fit_mean), format_number(s.fit_std),
            str(s.success),
            format_number(s.fhe_best), format_number(s.fhe_mean), format_number(s.fhe_std),
        ]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def runs_to_csv(records: Sequence[RunRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RUNS_COLUMNS)
    for r in records:
        writer.writerow([r.seed, _full(r.best_fitness), _full(r.first_hit)])
    return out.getvalue()


def parse_runs_csv(text: str) -> List[RunRecord]:
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for rec in reader:
        records.append(RunRecord(
            seed=int(rec["seed"]),
            best_fitness=float(rec["best_fitness"]),
            first_hit=int(rec["first_hit_evals"]) if rec["first_hit_evals"] else None,
        ))
    return records


# ---------------------------------------------------------------------------
# experiment grids

def load_grid(path: Union[str, Path]) -> List[ExperimentRow]:
    """Expand a TOML grid file into one ExperimentRow per (entry, variant).

    Schema: a list of ``[[experiments]]`` tables with keys problem, pop,
    gens, and optionally runs (default 30), variants (default both),
    base_seed (default 0) and r_schedule.
    """
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    entries = data.get("experiments")
    if not entries:
        raise ValueError(f"grid file {path} has no [[experiments]] entries")
    rows = []
    for entry in entries:
        try:
            problem = entry["problem"]
            pop = int(entry["pop"])
            gens = int(entry["gens"])
        except KeyError as exc:
            raise ValueError(f"grid entry {entry} is missing key {exc}") from None
        variants = entry.get("variants", ["jaya", "sjaya"])
        for variant in variants:
            rows.append(ExperimentRow(
                problem=problem,
                pop_size=pop,
                generations=gens,
                n_runs=int(entry.get("runs", 30)),
                variant=variant,
                base_seed=int(entry.get("base_seed", 0)),
                r_schedule=entry.get("r_schedule", "per_generation"),
            ))
    return rows
