"""Lookup of every problem this package ships, by stable lowercase id."""

from __future__ import annotations

from typing import List, Optional

from . import benchmarks, fuelcell
from .problem import Problem

FUELCELL_ID = "fuelcell"

PROBLEM_IDS: List[str] = [spec.id for spec in benchmarks.SPECS] + [FUELCELL_ID]


def get_problem(
    name: str,
    fuelcell_params: Optional[fuelcell.CellParams] = None,
    integer_rounding: bool = True,
) -> Problem:
    """Resolve a problem id (benchmark name, its alias, or ``fuelcell``)."""
    key = name.strip().lower()
    if key == FUELCELL_ID:
        return fuelcell.make_problem(
            params=fuelcell_params or fuelcell.CellParams(),
            integer_rounding=integer_rounding,
        )
    return benchmarks.get(key)
