"""Jaya and semi-steady-state Jaya (SJaya) for bounded continuous minimization.

Both heuristics move every member of a population toward the current best
member and away from the current worst member:

    x_new[i] = x[i] + r1[i] * (best[i] - |x[i]|) - r2[i] * (worst[i] - |x[i]|)

with r1, r2 drawn uniformly from (0, 1] and the result clamped to the box.
The absolute value applies only to the member being updated.

The two variants differ in bookkeeping, not in the move:

* ``jaya``   -- the classic baseline.  Best and worst are identified once
  per generation; the sweep works against snapshot copies of those two
  vectors, and a candidate replaces the current member only if it is
  strictly better.
* ``sjaya``  -- semi-steady-state.  The best index is refreshed immediately
  after every replacement; the worst index is rescanned (full scan) whenever
  the member it points to is replaced; a candidate is accepted when it is at
  least as good as the current member.

One run costs exactly pop_size * (generations + 1) objective evaluations;
index rescans reuse cached fitnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .problem import Bounds, EvaluationError, Problem

VARIANTS = ("jaya", "sjaya")
R_SCHEDULES = ("per_generation", "per_individual")


@dataclass
class Individual:
    """A parameter vector with its cached objective value."""

    x: np.ndarray
    fitness: float


@dataclass(frozen=True)
class RVector:
    """One draw of the random move coefficients, 2*d values in (0, 1]."""

    r1: np.ndarray
    r2: np.ndarray
    generation: int = 0

    def __post_init__(self):
        for r in (self.r1, self.r2):
            if np.any(r <= 0.0) or np.any(r > 1.0):
                raise ValueError("r coefficients must lie in (0, 1]")
        if self.r1.shape != self.r2.shape:
            raise ValueError("r1 and r2 must have the same dimension")


@dataclass(frozen=True)
class OptimizerConfig:
    pop_size: int
    generations: int
    seed: int = 0
    variant: str = "sjaya"
    r_schedule: str = "per_generation"

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if self.generations < 0:
            raise ValueError("generations must be non-negative")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.r_schedule not in R_SCHEDULES:
            raise ValueError(f"r_schedule must be one of {R_SCHEDULES}")


class Population:
    """Members stored row-wise with cached fitnesses and best/worst indices."""

    __slots__ = ("x", "fitness", "best_index", "worst_index")

    def __init__(self, x: np.ndarray, fitness: np.ndarray):
        self.x = x
        self.fitness = fitness
        self.best_index = scan_best(fitness)
        self.worst_index = scan_worst(fitness)

    @property
    def size(self) -> int:
        return self.x.shape[0]

    @property
    def dimension(self) -> int:
        return self.x.shape[1]

    def member(self, index: int) -> Individual:
        return Individual(self.x[index].copy(), float(self.fitness[index]))

    def best(self) -> Individual:
        return self.member(self.best_index)


def scan_best(fitness: np.ndarray) -> int:
    """Index of the minimum fitness; ties break to the lowest index."""
    return int(np.argmin(fitness))


def scan_worst(fitness: np.ndarray) -> int:
    """Index of the maximum fitness; ties break to the lowest index."""
    return int(np.argmax(fitness))


@dataclass
class Counters:
    """Evaluation accounting plus the best-so-far improvement log of a run."""

    evaluations: int = 0
    best_so_far: float = math.inf
    improvements: List[Tuple[int, float]] = field(default_factory=list)

    def record(self, fitness: float) -> None:
        """Count one evaluation and log it if it improves on everything seen."""
        self.evaluations += 1
        if fitness < self.best_so_far:
            self.best_so_far = fitness
            self.improvements.append((self.evaluations, fitness))


@dataclass
class RunTrace:
    """Result of one run: improvement log, final best member, eval count."""

    improvements: List[Tuple[int, float]]
    best: Individual
    evaluations: int

    @property
    def best_fitness(self) -> float:
        return self.best.fitness


def rng_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent (init, sweep) generators derived from one seed.

    The initialization stream does not depend on the variant or the
    r-schedule, so runs of different variants under the same seed start
    from identical populations (paired comparisons rely on this).
    """
    init_ss, sweep_ss = np.random.SeedSequence(seed).spawn(2)
    return (
        np.random.Generator(np.random.PCG64(init_ss)),
        np.random.Generator(np.random.PCG64(sweep_ss)),
    )


def draw_rvector(rng: np.random.Generator, dimension: int, generation: int = 0) -> RVector:
    """Draw 2*d coefficients uniformly from the half-open interval (0, 1]."""
    r1 = 1.0 - rng.random(dimension)
    r2 = 1.0 - rng.random(dimension)
    return RVector(r1=r1, r2=r2, generation=generation)


def initialize_population(
    problem: Problem,
    pop_size: int,
    rng: np.random.Generator,
    counters: Optional[Counters] = None,
) -> Population:
    """Draw pop_size members uniformly within bounds and evaluate them all."""
    if pop_size < 2:
        raise ValueError("pop_size must be at least 2")
    lower, upper = problem.bounds.lower, problem.bounds.upper
    x = lower + (upper - lower) * rng.random((pop_size, problem.dimension))
    fitness = np.empty(pop_size)
    for j in range(pop_size):
        fitness[j] = problem.evaluate(x[j])
        if counters is not None:
            counters.record(fitness[j])
    return Population(x, fitness)


def _candidate_into(out, scratch, x, best, worst, r1, r2, lower, upper):
    # out = clip(x + r1*(best - |x|) - r2*(worst - |x|)); no allocations.
    np.abs(x, out=scratch)
    np.subtract(best, scratch, out=out)
    out *= r1
    np.subtract(worst, scratch, out=scratch)
    scratch *= r2
    out -= scratch
    out += x
    np.clip(out, lower, upper, out=out)


def make_candidate(
    current: Individual,
    best: Individual,
    worst: Individual,
    r: RVector,
    bounds: Bounds,
) -> np.ndarray:
    """Apply the move equation to one member and clamp to the box."""
    d = current.x.size
    if not (best.x.size == worst.x.size == r.r1.size == bounds.dimension == d):
        raise ValueError("dimension mismatch between member, best/worst, r and bounds")
    out = np.empty(d)
    _candidate_into(
        out, np.empty(d), current.x, best.x, worst.x, r.r1, r.r2,
        bounds.lower, bounds.upper,
    )
    return out


def accept(candidate_fitness: float, current_fitness: float, variant: str) -> bool:
    """Replacement rule: sjaya accepts ties, jaya requires strict improvement."""
    if math.isnan(candidate_fitness) or math.isnan(current_fitness):
        raise EvaluationError("cannot compare NaN fitnesses")
    if variant == "sjaya":
        return candidate_fitness <= current_fitness
    if variant == "jaya":
        return candidate_fitness < current_fitness
    raise ValueError(f"variant must be one of {VARIANTS}")


def sjaya_generation(
    pop: Population,
    problem: Problem,
    r: RVector,
    counters: Counters,
) -> Population:
    """One in-place semi-steady-state sweep over the population.

    Members are visited in index order.  Candidates are built from the
    member at ``best_index`` / ``worst_index`` as they stand at creation
    time, so replacements earlier in the sweep are visible to later
    members.  After an accepted replacement the best index is updated if
    the new member beats it, and the worst index is rescanned if the
    replaced member was the worst.
    """
    return _sweep(pop, problem, lambda: r, counters, sjaya=True)


def jaya_generation(
    pop: Population,
    problem: Problem,
    r: RVector,
    counters: Counters,
) -> Population:
    """One in-place classic-Jaya sweep.

    The best and worst are fixed for the whole generation: the sweep works
    against snapshot copies taken at the start, and the indices are
    recomputed by a full scan only at the end.
    """
    return _sweep(pop, problem, lambda: r, counters, sjaya=False)


def _sweep(
    pop: Population,
    problem: Problem,
    next_r: Callable[[], RVector],
    counters: Counters,
    sjaya: bool,
) -> Population:
    x, fitness = pop.x, pop.fitness
    lower, upper = problem.bounds.lower, problem.bounds.upper
    evaluate = problem.evaluate
    record = counters.record
    pop_size, d = x.shape
    cand = np.empty(d)
    scratch = np.empty(d)

    if sjaya:
        for j in range(pop_size):
            r = next_r()
            _candidate_into(cand, scratch, x[j], x[pop.best_index],
                            x[pop.worst_index], r.r1, r.r2, lower, upper)
            cand_fit = evaluate(cand)
            record(cand_fit)
            if cand_fit <= fitness[j]:
                x[j] = cand
                fitness[j] = cand_fit
                if cand_fit < fitness[pop.best_index]:
                    pop.best_index = j
                if j == pop.worst_index:
                    pop.worst_index = scan_worst(fitness)
    else:
        best_x = x[pop.best_index].copy()
        worst_x = x[pop.worst_index].copy()
        for j in range(pop_size):
            r = next_r()
            _candidate_into(cand, scratch, x[j], best_x, worst_x,
                            r.r1, r.r2, lower, upper)
            cand_fit = evaluate(cand)
            record(cand_fit)
            if cand_fit < fitness[j]:
                x[j] = cand
                fitness[j] = cand_fit
        pop.best_index = scan_best(fitness)
        pop.worst_index = scan_worst(fitness)
    return pop


def run(problem: Problem, config: OptimizerConfig) -> RunTrace:
    """Run the configured variant for a fixed number of generations.

    A fresh RVector is drawn once per generation before the sweep and
    shared by every member (``per_generation``, the default), or once per
    member inside the sweep (``per_individual``).  Draw order is fixed, so
    a (problem, config) pair replays bit-identically.
    """
    init_rng, sweep_rng = rng_streams(config.seed)
    counters = Counters()
    pop = initialize_population(problem, config.pop_size, init_rng, counters)
    d = problem.dimension
    sjaya = config.variant == "sjaya"

    for t in range(1, config.generations + 1):
        if config.r_schedule == "per_generation":
            r = draw_rvector(sweep_rng, d, t)
            next_r = lambda r=r: r
        else:
            next_r = lambda t=t: draw_rvector(sweep_rng, d, t)
        _sweep(pop, problem, next_r, counters, sjaya=sjaya)

    return RunTrace(
        improvements=counters.improvements,
        best=pop.best(),
        evaluations=counters.evaluations,
    )
