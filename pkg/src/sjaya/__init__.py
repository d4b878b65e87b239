"""Jaya and semi-steady-state Jaya optimizers with benchmarks, a fuel-cell
stack design problem, an experiment harness, and significance tests."""

from .problem import Bounds, EvaluationError, Problem
from .optimizer import (
    Counters,
    Individual,
    OptimizerConfig,
    Population,
    RunTrace,
    RVector,
    accept,
    draw_rvector,
    initialize_population,
    jaya_generation,
    make_candidate,
    rng_streams,
    run,
    sjaya_generation,
)
from .harness import (
    BatchError,
    BatchSummary,
    ExperimentRow,
    RunRecord,
    SummaryRow,
    execute_batch,
    first_hit_evals,
)
from .stats import (
    SampleSummary,
    WelchReport,
    WilcoxonReport,
    normal_cdf,
    t_sf,
    welch_t,
    wilcoxon,
)
from . import benchmarks, catalog, fuelcell, reference

__version__ = "0.1.0"

__all__ = [
    "Bounds", "EvaluationError", "Problem",
    "Counters", "Individual", "OptimizerConfig", "Population", "RunTrace",
    "RVector", "accept", "draw_rvector", "initialize_population",
    "jaya_generation", "make_candidate", "rng_streams", "run",
    "sjaya_generation",
    "BatchError", "BatchSummary", "ExperimentRow", "RunRecord", "SummaryRow",
    "execute_batch", "first_hit_evals",
    "SampleSummary", "WelchReport", "WilcoxonReport", "normal_cdf", "t_sf",
    "welch_t", "wilcoxon",
    "benchmarks", "catalog", "fuelcell", "reference",
]
