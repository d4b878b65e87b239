"""Twelve classic test functions with their boxes and known global minima.

The first seven are 30-dimensional, the last five 2-dimensional.  All are
minimization problems; a run counts as successful once it comes within
1e-6 of the known global minimum value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .problem import Bounds, Problem

SUCCESS_TOLERANCE = 1.0e-6

_sumsq_weights: Dict[int, np.ndarray] = {}


def ackley(x: np.ndarray) -> float:
    n = x.size
    return float(
        -20.0 * math.exp(-0.2 * math.sqrt(float(x @ x) / n))
        - math.exp(float(np.sum(np.cos(2.0 * math.pi * x))) / n)
        + 20.0
        + math.e
    )


def rosenbrock(x: np.ndarray) -> float:
    a = x[1:] - x[:-1] ** 2
    b = 1.0 - x[:-1]
    return float(100.0 * (a @ a) + b @ b)


def chung_reynolds(x: np.ndarray) -> float:
    # squared sphere sum
    s = float(x @ x)
    return s * s


def step(x: np.ndarray) -> float:
    return float(np.sum(np.floor(np.abs(x))))


def alpine1(x: np.ndarray) -> float:
    return float(np.sum(np.abs(x * np.sin(x) + 0.1 * x)))


def sumsquares(x: np.ndarray) -> float:
    w = _sumsq_weights.get(x.size)
    if w is None:
        w = _sumsq_weights[x.size] = np.arange(1, x.size + 1, dtype=float)
    return float(w @ (x * x))


def sphere(x: np.ndarray) -> float:
    return float(x @ x)


def bohachevsky3(x: np.ndarray) -> float:
    x1, x2 = float(x[0]), float(x[1])
    return x1 * x1 + 2.0 * x2 * x2 - 0.3 * math.cos(3.0 * math.pi * x1 + 4.0 * math.pi * x2) + 0.3


def bohachevsky2(x: np.ndarray) -> float:
    x1, x2 = float(x[0]), float(x[1])
    return x1 * x1 + 2.0 * x2 * x2 - 0.3 * math.cos(3.0 * math.pi * x1) * math.cos(4.0 * math.pi * x2) + 0.3


def bartels_conn(x: np.ndarray) -> float:
    x1, x2 = float(x[0]), float(x[1])
    return abs(x1 * x1 + x2 * x2 + x1 * x2) + abs(math.sin(x1)) + abs(math.cos(x2))


def goldstein_price(x: np.ndarray) -> float:
    x1, x2 = float(x[0]), float(x[1])
    t1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2
    )
    t2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2
    )
    return t1 * t2


def matyas(x: np.ndarray) -> float:
    x1, x2 = float(x[0]), float(x[1])
    return 0.26 * (x1 * x1 + x2 * x2) - 0.48 * x1 * x2


@dataclass(frozen=True)
class BenchmarkSpec:
    """One test function with its box, dimension and known minimum."""

    id: str
    function: Callable[[np.ndarray], float]
    dimension: int
    lower: float
    upper: float
    global_min_value: float
    optimum: Optional[tuple]  # a known minimizer, None when any |x_i| < 1 works
    success_tolerance: float = SUCCESS_TOLERANCE

    @property
    def bounds(self) -> Bounds:
        return Bounds.uniform(self.lower, self.upper, self.dimension)

    @property
    def success_target(self) -> float:
        return self.global_min_value + self.success_tolerance


SPECS: List[BenchmarkSpec] = [
    BenchmarkSpec("ackley", ackley, 30, -10.0, 10.0, 0.0, (0.0,) * 30),
    BenchmarkSpec("rosenbrock", rosenbrock, 30, -10.0, 10.0, 0.0, (1.0,) * 30),
    BenchmarkSpec("chung-reynolds", chung_reynolds, 30, -10.0, 10.0, 0.0, (0.0,) * 30),
    BenchmarkSpec("step", step, 30, -100.0, 100.0, 0.0, (0.0,) * 30),
    BenchmarkSpec("alpine1", alpine1, 30, -10.0, 10.0, 0.0, (0.0,) * 30),
    BenchmarkSpec("sumsquares", sumsquares, 30, -10.0, 10.0, 0.0, (0.0,) * 30),
    BenchmarkSpec("sphere", sphere, 30, -100.0, 100.0, 0.0, (0.0,) * 30),
    BenchmarkSpec("bohachevsky3", bohachevsky3, 2, -100.0, 100.0, 0.0, (0.0, 0.0)),
    BenchmarkSpec("bohachevsky2", bohachevsky2, 2, -100.0, 100.0, 0.0, (0.0, 0.0)),
    BenchmarkSpec("bartels-conn", bartels_conn, 2, -500.0, 500.0, 1.0, (0.0, 0.0)),
    BenchmarkSpec("goldstein-price", goldstein_price, 2, -2.0, 2.0, 3.0, (0.0, -1.0)),
    BenchmarkSpec("matyas", matyas, 2, -10.0, 10.0, 0.0, (0.0, 0.0)),
]

_BY_ID: Dict[str, BenchmarkSpec] = {spec.id: spec for spec in SPECS}

# some published result listings label sumsquares this way
ALIASES = {"f2-rao": "sumsquares", "f2rao": "sumsquares"}


def get_spec(name: str) -> BenchmarkSpec:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    try:
        return _BY_ID[key]
    except KeyError:
        raise ValueError(f"unknown benchmark function {name!r}") from None


def evaluate(spec: BenchmarkSpec, x: np.ndarray) -> float:
    """Evaluate one spec at x, enforcing the declared dimension."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != spec.dimension:
        raise ValueError(
            f"{spec.id} expects a vector of dimension {spec.dimension}, got shape {x.shape}"
        )
    return spec.function(x)


def make_problem(spec: BenchmarkSpec) -> Problem:
    return Problem(
        name=spec.id,
        objective=spec.function,
        bounds=spec.bounds,
        optimum_value=spec.global_min_value,
        success_target=spec.success_target,
    )


def suite() -> List[Problem]:
    """All twelve functions as Problem instances, in canonical order."""
    return [make_problem(spec) for spec in SPECS]


def get(name: str) -> Problem:
    return make_problem(get_spec(name))
