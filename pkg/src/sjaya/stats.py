"""Significance tests for paired algorithm comparisons.

Two tests are provided:

* an unequal-variance (Welch / Smith-Satterthwaite) two-sample t-test on
  summary statistics, with the one-tailed p-value computed from the
  regularized incomplete beta function, and
* a paired-sample Wilcoxon signed-rank test with the usual normal
  approximation for the W statistic.

Throughout, sample ``a`` is the baseline (jaya) and sample ``b`` the
contender (sjaya), so a positive t favors the contender.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .harness import RunRecord, SummaryRow

_BETA_EPS = 1.0e-15
_BETA_MAX_ITER = 200
_MIN_WILCOXON_NORMAL = 6  # below this the normal approximation is not reported


@dataclass(frozen=True)
class SampleSummary:
    """Mean, sample (n-1) standard deviation, and size of one sample."""

    mean: float
    std: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sample size must be at least 1")
        if self.std < 0:
            raise ValueError("standard deviation cannot be negative")


def welch_t(a: SampleSummary, b: SampleSummary) -> Optional[Tuple[float, float]]:
    """Welch t statistic and Satterthwaite degrees of freedom.

    Returns None when the test is not applicable: either sample smaller
    than two, or both standard deviations zero (division by zero).
    """
    if a.n < 2 or b.n < 2:
        return None
    if a.std == 0.0 and b.std == 0.0:
        return None
    va = a.std * a.std / a.n
    vb = b.std * b.std / b.n
    t = (a.mean - b.mean) / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va * va / (a.n - 1) + vb * vb / (b.n - 1))
    return t, df


def _beta_cont_fraction(a: float, b: float, x: float) -> float:
    # modified Lentz evaluation of the incomplete-beta continued fraction
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < 1e-300:
        d = 1e-300
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < 1e-300:
            d = 1e-300
        c = 1.0 + aa / c
        if abs(c) < 1e-300:
            c = 1e-300
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < 1e-300:
            d = 1e-300
        c = 1.0 + aa / c
        if abs(c) < 1e-300:
            c = 1e-300
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x < 0.0 or x > 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_fraction(a, b, x) / a
    return 1.0 - front * _beta_cont_fraction(b, a, 1.0 - x) / b


def t_sf(t: float, df: float) -> float:
    """Upper-tail probability P(T > t) of Student's t with df degrees."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    tail = 0.5 * betainc(0.5 * df, 0.5, df / (df + t * t))
    return tail if t >= 0 else 1.0 - tail


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@dataclass(frozen=True)
class WelchReport:
    """t, df and the one-tailed p in the direction of the observed difference.

    All fields are None when the test is not applicable (the table cell
    renders as "---")."""

    t: Optional[float]
    df: Optional[float]
    p: Optional[float]

    @property
    def applicable(self) -> bool:
        return self.t is not None


NOT_APPLICABLE = WelchReport(None, None, None)


def welch_report(a: Optional[SampleSummary], b: Optional[SampleSummary]) -> WelchReport:
    if a is None or b is None:
        return NOT_APPLICABLE
    result = welch_t(a, b)
    if result is None:
        return NOT_APPLICABLE
    t, df = result
    return WelchReport(t=t, df=df, p=t_sf(abs(t), df))


# one-tailed alpha = 0.05 critical values; reject when W <= critical
CRITICAL_W_05 = {
    5: 0, 6: 2, 7: 3, 8: 5, 9: 8, 10: 10, 11: 13, 12: 17, 13: 21, 14: 25,
    15: 30, 16: 35, 17: 41, 18: 47, 19: 53, 20: 60, 21: 67, 22: 75, 23: 83,
    24: 91, 25: 100, 26: 110, 27: 119, 28: 130, 29: 140, 30: 151,
}


def average_ranks(values: Sequence[float]) -> List[float]:
    """1-based ranks of ``values`` with ties sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


@dataclass(frozen=True)
class WilcoxonReport:
    n_zero_diffs: int
    n_effective: int
    w_plus: float
    w_minus: float
    w: float
    critical_w: Optional[int]
    mean_w: Optional[float]
    std_w: Optional[float]
    z: Optional[float]
    p_one_tailed: Optional[float]

    @property
    def degenerate(self) -> bool:
        return self.n_effective == 0


def wilcoxon(pairs: Iterable[Tuple[float, float]]) -> WilcoxonReport:
    """Paired-sample signed-rank test on differences a - b.

    Zero differences are dropped; ranks of |d| use average ranks on ties;
    W is the smaller of the positive- and negative-rank sums.  The normal
    approximation (mean, std, z, lower-tail p) is reported for at least
    six effective pairs.
    """
    diffs = [float(a) - float(b) for a, b in pairs]
    nonzero = [d for d in diffs if d != 0.0]
    n_zero = len(diffs) - len(nonzero)
    n = len(nonzero)
    if n == 0:
        return WilcoxonReport(n_zero, 0, 0.0, 0.0, 0.0, None, None, None, None, None)

    ranks = average_ranks([abs(d) for d in nonzero])
    w_plus = sum(r for r, d in zip(ranks, nonzero) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, nonzero) if d < 0)
    w = min(w_plus, w_minus)

    mean_w = n * (n + 1) / 4.0
    std_w = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0)
    if n >= _MIN_WILCOXON_NORMAL:
        z = (w - mean_w) / std_w
        p = normal_cdf(z)
    else:
        z = p = None
    return WilcoxonReport(
        n_zero_diffs=n_zero,
        n_effective=n,
        w_plus=w_plus,
        w_minus=w_minus,
        w=w,
        critical_w=CRITICAL_W_05.get(n),
        mean_w=mean_w,
        std_w=std_w,
        z=z,
        p_one_tailed=p,
    )


# ---------------------------------------------------------------------------
# building reports from exported summary tables

@dataclass(frozen=True)
class ComparisonRow:
    """Welch reports for one (function, pop, gens) batch pair."""

    function: str
    pop: int
    gens: int
    fitness: WelchReport
    first_hit: WelchReport


def _key(row: SummaryRow):
    return (row.function, row.pop, row.gens)


def pair_summaries(
    rows_a: Sequence[SummaryRow], rows_b: Sequence[SummaryRow]
) -> List[Tuple[SummaryRow, SummaryRow]]:
    """Match two summary tables by (function, pop, gens), preserving order."""
    index_b = {_key(r): r for r in rows_b}
    if len(index_b) != len(rows_b):
        raise ValueError("duplicate (function, pop, gens) keys in summary table")
    missing = [r for r in rows_a if _key(r) not in index_b]
    if missing or len(rows_a) != len(rows_b):
        raise ValueError("summary tables do not describe the same batches")
    return [(r, index_b[_key(r)]) for r in rows_a]


def welch_table(
    rows_a: Sequence[SummaryRow],
    rows_b: Sequence[SummaryRow],
    n_runs: int = 30,
) -> List[ComparisonRow]:
    """Per-batch Welch tests on both metrics, sample a vs sample b.

    Fitness summaries use all n_runs runs; first-hit summaries use the
    success counts as their sample sizes.
    """
    table = []
    for ra, rb in pair_summaries(rows_a, rows_b):
        fitness = welch_report(
            SampleSummary(ra.fit_mean, ra.fit_std, n_runs),
            SampleSummary(rb.fit_mean, rb.fit_std, n_runs),
        )
        fa = (
            SampleSummary(ra.fhe_mean, ra.fhe_std, ra.success)
            if ra.fhe_mean is not None and ra.success >= 1
            else None
        )
        fb = (
            SampleSummary(rb.fhe_mean, rb.fhe_std, rb.success)
            if rb.fhe_mean is not None and rb.success >= 1
            else None
        )
        table.append(ComparisonRow(
            function=ra.function, pop=ra.pop, gens=ra.gens,
            fitness=fitness, first_hit=welch_report(fa, fb),
        ))
    return table


def wilcoxon_pairs(
    rows_a: Sequence[SummaryRow],
    rows_b: Sequence[SummaryRow],
    metric: str,
) -> List[Tuple[float, float]]:
    """Suite-level (a, b) mean pairs for one metric.

    ``metric`` is ``fit_mean`` or ``fhe_mean``.  Batches where either side
    lacks the metric (no successful runs) are excluded from the pairing.
    """
    if metric not in ("fit_mean", "fhe_mean"):
        raise ValueError("metric must be 'fit_mean' or 'fhe_mean'")
    pairs = []
    for ra, rb in pair_summaries(rows_a, rows_b):
        va, vb = getattr(ra, metric), getattr(rb, metric)
        if va is None or vb is None:
            continue
        pairs.append((va, vb))
    return pairs


def paired_run_metrics(
    records_a: Sequence[RunRecord], records_b: Sequence[RunRecord]
) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]]]:
    """Seed-matched (fitness, first-hit) pairs from two per-run tables.

    Batches run with a shared base seed start run k of either variant from
    the same initial population, so run-level pairing is meaningful.
    First-hit pairs only include seeds where both runs succeeded.
    """
    by_seed_b = {r.seed: r for r in records_b}
    if len(by_seed_b) != len(records_b):
        raise ValueError("duplicate seeds in per-run table")
    if sorted(by_seed_b) != sorted(r.seed for r in records_a):
        raise ValueError("per-run tables do not cover the same seeds")
    fitness_pairs, first_hit_pairs = [], []
    for ra in records_a:
        rb = by_seed_b[ra.seed]
        fitness_pairs.append((ra.best_fitness, rb.best_fitness))
        if ra.first_hit is not None and rb.first_hit is not None:
            first_hit_pairs.append((float(ra.first_hit), float(rb.first_hit)))
    return fitness_pairs, first_hit_pairs
