"""Bundled 30-run reference summaries for both algorithms.

These tables let the significance-testing pipeline be exercised (and its
outputs checked) without re-running the full 30-run experiment grids.
The goldstein-price fitness means carry digits beyond the usual 4-decimal
presentation because the two algorithms differ there only past the fourth
decimal place; everything else is stored as published, at 4 decimals.
"""

from __future__ import annotations

from importlib import resources
from typing import List

from .harness import SummaryRow, parse_summary_csv

_FILES = {
    ("benchmark", "jaya"): "benchmark_jaya.csv",
    ("benchmark", "sjaya"): "benchmark_sjaya.csv",
    ("fuelcell", "jaya"): "fuelcell_jaya.csv",
    ("fuelcell", "sjaya"): "fuelcell_sjaya.csv",
}


def reference_path(suite: str, variant: str):
    """Filesystem path of one bundled reference CSV."""
    try:
        name = _FILES[(suite, variant)]
    except KeyError:
        raise ValueError(
            f"no reference table for suite={suite!r}, variant={variant!r}"
        ) from None
    return resources.files("sjaya.data").joinpath(name)


def load_reference(suite: str, variant: str) -> List[SummaryRow]:
    """Load a bundled reference table (suite: benchmark|fuelcell)."""
    return parse_summary_csv(reference_path(suite, variant).read_text())
