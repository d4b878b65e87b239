"""Command-line front end: run experiments, inspect problems, run the tests.

Subcommands
-----------
run       run one batch or a TOML grid of batches, write summary + per-run CSVs
stats     Welch and Wilcoxon reports from two summary CSVs (or bundled tables)
bench     list the benchmark functions or evaluate one at a point
fuelcell  evaluate one stack design: max power point and cost breakdown
tables    re-render summary CSVs from a results directory as markdown
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import benchmarks, catalog, fuelcell, harness, reference, stats

ENV_RESULTS_DIR = "SJAYA_RESULTS_DIR"

WELCH_COLUMNS = ("function", "pop", "gens",
                 "fit_t", "fit_df", "fit_p", "fhe_t", "fhe_df", "fhe_p")
WILCOXON_COLUMNS = ("metric", "n_zero_diffs", "n", "w_plus", "w_minus", "w",
                    "alpha", "critical_w", "mean_w", "std_w", "z", "p")


def _results_dir(arg: Optional[str]) -> Path:
    path = Path(arg or os.environ.get(ENV_RESULTS_DIR, "results"))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError:
        raise SystemExit(f"error: could not parse vector {text!r}") from None


def cmd_run(args) -> int:
    out = _results_dir(args.out)
    if args.grid:
        rows = harness.load_grid(args.grid)
    else:
        if not args.problem:
            print("error: provide --problem or --grid", file=sys.stderr)
            return 2
        rows = [harness.ExperimentRow(
            problem=args.problem,
            pop_size=args.pop,
            generations=args.gens,
            n_runs=args.runs,
            variant=args.variant,
            base_seed=args.seed,
            r_schedule=args.r_schedule,
        )]

    summaries = {}
    failures = []
    for row in rows:
        problem = catalog.get_problem(row.problem, integer_rounding=args.integer_rounding)
        try:
            summary = harness.execute_batch(row, problem=problem, workers=args.workers)
        except (harness.BatchError, ValueError) as exc:
            failures.append((row, str(exc)))
            continue
        summaries.setdefault(row.variant, []).append(summary)
        runs_name = f"runs_{row.problem}_p{row.pop_size}_g{row.generations}_{row.variant}.csv"
        (out / runs_name).write_text(harness.runs_to_csv(summary.records))

    for variant, batch in summaries.items():
        (out / f"summary_{variant}.csv").write_text(harness.summary_to_csv(batch))
        print(f"# {variant}")
        print(harness.summary_to_markdown(batch))

    if failures:
        for row, message in failures:
            print(f"failed: {row.problem} pop={row.pop_size} gens={row.generations} "
                  f"{row.variant}: {message}", file=sys.stderr)
        return 1
    return 0


def _welch_csv(table) -> str:
    lines = [",".join(WELCH_COLUMNS)]
    for row in table:
        cells = [row.function, str(row.pop), str(row.gens)]
        for rep in (row.fitness, row.first_hit):
            if rep.applicable:
                cells += [repr(rep.t), repr(rep.df), repr(rep.p)]
            else:
                cells += ["", "", ""]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _welch_markdown(table) -> str:
    lines = ["| " + " | ".join(WELCH_COLUMNS) + " |",
             "|" + "---|" * len(WELCH_COLUMNS)]
    for row in table:
        cells = [row.function, str(row.pop), str(row.gens)]
        for rep in (row.fitness, row.first_hit):
            cells += [harness.format_number(rep.t), harness.format_number(rep.df),
                      harness.format_number(rep.p)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _wilcoxon_rows(rows_jaya, rows_sjaya):
    out = []
    for metric in ("fit_mean", "fhe_mean"):
        pairs = stats.wilcoxon_pairs(rows_jaya, rows_sjaya, metric)
        out.append((metric, stats.wilcoxon(pairs)))
    return out


def _wilcoxon_csv(reports) -> str:
    lines = [",".join(WILCOXON_COLUMNS)]
    for metric, rep in reports:
        cells = [metric, str(rep.n_zero_diffs), str(rep.n_effective),
                 repr(rep.w_plus), repr(rep.w_minus), repr(rep.w), "0.05",
                 "" if rep.critical_w is None else str(rep.critical_w)]
        for value in (rep.mean_w, rep.std_w, rep.z, rep.p_one_tailed):
            cells.append("" if value is None else repr(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _rank_sum(value) -> str:
    # rank sums are integers unless ties produced half-ranks
    if value is None:
        return "---"
    if float(value).is_integer():
        return str(int(value))
    return harness.format_number(value)


def _wilcoxon_markdown(reports) -> str:
    lines = ["| " + " | ".join(WILCOXON_COLUMNS) + " |",
             "|" + "---|" * len(WILCOXON_COLUMNS)]
    for metric, rep in reports:
        cells = [metric, str(rep.n_zero_diffs), str(rep.n_effective),
                 _rank_sum(rep.w_plus), _rank_sum(rep.w_minus),
                 _rank_sum(rep.w), "0.05",
                 "---" if rep.critical_w is None else str(rep.critical_w),
                 _rank_sum(rep.mean_w), harness.format_number(rep.std_w),
                 harness.format_number(rep.z), harness.format_number(rep.p_one_tailed)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def cmd_stats(args) -> int:
    if args.reference:
        rows_jaya = reference.load_reference(args.reference, "jaya")
        rows_sjaya = reference.load_reference(args.reference, "sjaya")
    else:
        if not (args.jaya and args.sjaya):
            print("error: provide --jaya and --sjaya summary CSVs, or --reference",
                  file=sys.stderr)
            return 2
        try:
            rows_jaya = harness.parse_summary_csv(Path(args.jaya).read_text())
            rows_sjaya = harness.parse_summary_csv(Path(args.sjaya).read_text())
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    try:
        table = stats.welch_table(rows_jaya, rows_sjaya, n_runs=args.runs)
        wilcoxon_reports = _wilcoxon_rows(rows_jaya, rows_sjaya)
        if args.per_run_jaya and args.per_run_sjaya:
            rec_j = harness.parse_runs_csv(Path(args.per_run_jaya).read_text())
            rec_s = harness.parse_runs_csv(Path(args.per_run_sjaya).read_text())
            fit_pairs, fhe_pairs = stats.paired_run_metrics(rec_j, rec_s)
            wilcoxon_reports.append(("run_fitness", stats.wilcoxon(fit_pairs)))
            wilcoxon_reports.append(("run_first_hit", stats.wilcoxon(fhe_pairs)))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print("# Welch (positive t favors sjaya)")
    print(_welch_markdown(table))
    print("# Wilcoxon signed-rank (jaya - sjaya)")
    print(_wilcoxon_markdown(wilcoxon_reports))
    if args.out:
        out = _results_dir(args.out)
        (out / "welch.csv").write_text(_welch_csv(table))
        (out / "wilcoxon.csv").write_text(_wilcoxon_csv(wilcoxon_reports))
    return 0


def cmd_bench(args) -> int:
    if args.function:
        spec = benchmarks.get_spec(args.function)
        if args.at is None:
            print("error: provide --at x1,x2,... to evaluate", file=sys.stderr)
            return 2
        x = _parse_vector(args.at)
        print(repr(benchmarks.evaluate(spec, x)))
        return 0
    header = f"{'id':<16} {'dim':>3} {'bounds':>16} {'min':>6}  target"
    print(header)
    for spec in benchmarks.SPECS:
        bounds = f"[{spec.lower:g}, {spec.upper:g}]"
        target = f"<= {spec.global_min_value:g} + {spec.success_tolerance:g}"
        print(f"{spec.id:<16} {spec.dimension:>3} {bounds:>16} "
              f"{spec.global_min_value:>6g}  {target}")
    return 0


def cmd_fuelcell(args) -> int:
    params = fuelcell.load_params(args.params) if args.params else fuelcell.CellParams()
    x = _parse_vector(args.design)
    if x.size != 3:
        print("error: --design expects NS,NP,AREA", file=sys.stderr)
        return 2
    design = fuelcell.StackDesign(float(x[0]), float(x[1]), float(x[2]))
    try:
        cost = fuelcell.stack_cost(design, params, args.integer_rounding)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    evaluated = design
    if args.integer_rounding:
        evaluated = fuelcell.StackDesign(
            float(round(design.n_s)), float(round(design.n_p)), design.a_cell)
    pp = fuelcell.max_power_point(evaluated, params)
    print(f"design: n_s={design.n_s:g} n_p={design.n_p:g} a_cell={design.a_cell:g} cm^2"
          + (f" (evaluated as n_s={evaluated.n_s:g} n_p={evaluated.n_p:g})"
             if args.integer_rounding else ""))
    print(f"max power point: P={pp.p_load_max:.4f} W at V={pp.v_load_mpp:.4f} V "
          f"(i_load_d={pp.i_at_mpp:.4f} mA/cm^2)")
    print(f"cost: {cost:.4f}")
    return 0


def cmd_tables(args) -> int:
    directory = Path(args.results_dir)
    files = sorted(directory.glob("summary_*.csv"))
    if not files:
        print(f"error: no summary_*.csv files in {directory}", file=sys.stderr)
        return 1
    for path in files:
        rows = harness.parse_summary_csv(path.read_text())
        print(f"# {path.stem.removeprefix('summary_')}")
        print(harness.summary_to_markdown(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sjaya", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one batch or a TOML grid")
    p_run.add_argument("--grid", help="TOML grid file of [[experiments]] entries")
    p_run.add_argument("--problem", choices=catalog.PROBLEM_IDS + list(benchmarks.ALIASES),
                       help="single problem id")
    p_run.add_argument("--variant", choices=["jaya", "sjaya"], default="sjaya")
    p_run.add_argument("--pop", type=int, default=30)
    p_run.add_argument("--gens", type=int, default=100)
    p_run.add_argument("--runs", type=int, default=30)
    p_run.add_argument("--seed", type=int, default=0, help="base seed; run k uses seed+k")
    p_run.add_argument("--r-schedule", choices=["per_generation", "per_individual"],
                       default="per_generation")
    p_run.add_argument("--no-integer-rounding", dest="integer_rounding",
                       action="store_false",
                       help="evaluate fuel-cell designs without rounding cell counts")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--out", help=f"results directory (default $%s or ./results)"
                       % ENV_RESULTS_DIR)
    p_run.set_defaults(func=cmd_run)

    p_stats = sub.add_parser("stats", help="significance tests from summary CSVs")
    p_stats.add_argument("--jaya", help="summary CSV of the baseline")
    p_stats.add_argument("--sjaya", help="summary CSV of the contender")
    p_stats.add_argument("--reference", choices=["benchmark", "fuelcell"],
                         help="use the bundled reference tables instead of files")
    p_stats.add_argument("--runs", type=int, default=30,
                         help="runs behind each fitness summary (default 30)")
    p_stats.add_argument("--per-run-jaya", help="per-run CSV for seed-paired Wilcoxon")
    p_stats.add_argument("--per-run-sjaya", help="per-run CSV for seed-paired Wilcoxon")
    p_stats.add_argument("--out", help="also write welch.csv and wilcoxon.csv here")
    p_stats.set_defaults(func=cmd_stats)

    p_bench = sub.add_parser("bench", help="list or evaluate benchmark functions")
    p_bench.add_argument("--function", help="function id (or alias)")
    p_bench.add_argument("--at", help="comma-separated point to evaluate")
    p_bench.set_defaults(func=cmd_bench)

    p_fc = sub.add_parser("fuelcell", help="evaluate one stack design")
    p_fc.add_argument("--design", required=True, help="NS,NP,AREA")
    p_fc.add_argument("--params", help="TOML or JSON parameter file")
    p_fc.add_argument("--no-integer-rounding", dest="integer_rounding",
                      action="store_false")
    p_fc.set_defaults(func=cmd_fuelcell)

    p_tables = sub.add_parser("tables", help="render summary CSVs as markdown")
    p_tables.add_argument("results_dir")
    p_tables.set_defaults(func=cmd_tables)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
