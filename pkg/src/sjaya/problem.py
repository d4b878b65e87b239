"""Bounded minimization problems: box bounds plus an objective callable."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class EvaluationError(RuntimeError):
    """Raised when an objective returns a non-finite value.

    Every problem shipped with this package is finite on its box, so a
    NaN/Inf indicates a bug rather than a legitimate fitness; the run is
    aborted instead of treating the value as +inf.
    """


@dataclass(frozen=True)
class Bounds:
    """Per-dimension box constraints, lower[i] < upper[i]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.ndim != 1 or upper.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("bounds must be 1-d arrays of equal length")
        if lower.size < 1:
            raise ValueError("bounds must have at least one dimension")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")

    @classmethod
    def uniform(cls, lower: float, upper: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, float(lower)), np.full(dimension, float(upper)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass(frozen=True)
class Problem:
    """A bounded minimization problem.

    ``success_target`` is the fitness threshold used by the experiment
    harness: a run is successful once it produces a solution with
    fitness <= success_target.  For problems with a known optimum this is
    optimum_value + tolerance; problems without one may use an absolute
    level or leave it unset.
    """

    name: str
    objective: Callable[[np.ndarray], float]
    bounds: Bounds
    optimum_value: Optional[float] = None
    success_target: Optional[float] = None
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    def evaluate(self, x: np.ndarray) -> float:
        """Evaluate the objective, rejecting non-finite results."""
        value = float(self.objective(x))
        if not np.isfinite(value):
            raise EvaluationError(
                f"objective {self.name!r} returned non-finite value {value!r}"
            )
        return value
