"""Budget sweeps across deletion strategies and diffusion variants.

A sweep loads one dataset, scores each requested strategy once at the
largest budget, then walks the budget grid taking plan prefixes, writing
one per-cascade report CSV per (strategy, variant, fraction) plus a single
summary CSV.  Expensive plans are cached to disk in the plan file format
and reused on re-runs against the same output directory.

All outputs are plain CSV figure data; re-running an identical
configuration reproduces every file byte for byte.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

from .deletion import RANDOM, STRATEGIES, DeletionPlan, load_plan, plan_strategy, save_plan
from .diffusion import VARIANTS, build_non_tree, build_variant
from .errors import ConvergenceError, InputError
from .estimator import EstimateReport, estimate_rows, deleted_diffusion_edges, write_report_csv
from .graph import DirectedGraph, build_graph
from .ingest import CascadeLog, filter_cascades, load_cascades, load_follow_edges

logger = logging.getLogger(__name__)

DEFAULT_MIN_CASCADE_SIZE = 100
DEFAULT_MAX_SEED_ANALYSIS_SIZE = 1000
DEFAULT_FRACTIONS = tuple(round(0.05 * i, 2) for i in range(1, 11))

SUMMARY_HEADER = ("strategy", "variant", "k", "fraction", "total_estimated", "total_original")
SEEDS_HEADER = ("cascade_id", "original_size", "seed_count")
SCATTER_HEADER = ("cascade_id", "original_size", "estimated_size")


@dataclass
class ExperimentConfig:
    """Everything a sweep needs; validated and normalised on construction."""

    edges_path: Path
    cascades_path: Path
    out_dir: Path
    min_cascade_size: int = DEFAULT_MIN_CASCADE_SIZE
    strategies: tuple[str, ...] = STRATEGIES
    variants: tuple[str, ...] = VARIANTS
    budget_fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    rng_seed: int = 0
    strict_parse: bool = False
    threads: int = 1

    def __post_init__(self):
        self.edges_path = Path(self.edges_path)
        self.cascades_path = Path(self.cascades_path)
        self.out_dir = Path(self.out_dir)
        if self.min_cascade_size < 0:
            raise InputError("min_cascade_size must be >= 0")
        if self.threads < 1:
            raise InputError("threads must be >= 1")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise InputError(f"unknown strategy {s!r}; expected one of {STRATEGIES}")
        for v in self.variants:
            if v not in VARIANTS:
                raise InputError(f"unknown variant {v!r}; expected one of {VARIANTS}")
        if not self.strategies:
            raise InputError("at least one strategy is required")
        if not self.variants:
            raise InputError("at least one variant is required")
        fractions = sorted(set(float(f) for f in self.budget_fractions))
        if not fractions:
            raise InputError("at least one budget fraction is required")
        for f in fractions:
            if not 0.0 <= f <= 1.0:
                raise InputError(f"budget fraction {f} outside [0, 1]")
        self.budget_fractions = tuple(fractions)


def budget_for(fraction: float, edge_count: int) -> int:
    """Edge budget for a fraction of the network's edges."""
    return min(edge_count, int(round(fraction * edge_count)))


def run_sweep(config: ExperimentConfig) -> list[Path]:
    """Run the full sweep; returns the paths of every file written."""
    network, logs = load_dataset(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)

    graphs_by_variant = {
        variant: [build_variant(network, log, variant) for log in logs]
        for variant in config.variants
    }
    edge_count = network.edge_count
    budgets = [budget_for(f, edge_count) for f in config.budget_fractions]
    max_budget = max(budgets)

    written: list[Path] = []
    summary_rows: list[tuple] = []
    for strategy in config.strategies:
        plan, plan_path = _materialise_plan(config, network, strategy, max_budget)
        written.append(plan_path)
        for variant in config.variants:
            graphs = graphs_by_variant[variant]
            for fraction, k in zip(config.budget_fractions, budgets):
                sub = plan.prefix(k)
                rows = estimate_rows(graphs, deleted_diffusion_edges(sub), threads=config.threads)
                report = EstimateReport.from_rows(strategy, variant, k, rows)
                path = config.out_dir / f"report_{strategy}_{variant}_{fraction:g}.csv"
                write_report_csv(report, path)
                written.append(path)
                summary_rows.append(
                    (strategy, variant, k, f"{fraction:g}", report.total_estimated, report.total_original)
                )
    summary_path = config.out_dir / "summary.csv"
    _write_csv(summary_path, SUMMARY_HEADER, summary_rows)
    written.append(summary_path)
    return written


def load_dataset(config: ExperimentConfig) -> tuple[DirectedGraph, list[CascadeLog]]:
    """Parse, filter, and index the configured dataset."""
    try:
        with open(config.edges_path, "r", encoding="utf-8") as fh:
            edges = load_follow_edges(fh, strict=config.strict_parse)
    except OSError as exc:
        raise InputError(f"ingest: cannot read edges file: {exc}") from exc
    try:
        with open(config.cascades_path, "r", encoding="utf-8") as fh:
            logs = load_cascades(fh, strict=config.strict_parse)
    except OSError as exc:
        raise InputError(f"ingest: cannot read cascades file: {exc}") from exc
    network = build_graph(edges)
    kept = filter_cascades(logs, config.min_cascade_size)
    logger.info(
        "loaded %d nodes, %d edges, %d/%d cascades at min size %d",
        network.node_count, network.edge_count, len(kept), len(logs), config.min_cascade_size,
    )
    return network, kept


def seed_analysis(
    network: DirectedGraph,
    logs: list[CascadeLog],
    max_size: int = DEFAULT_MAX_SEED_ANALYSIS_SIZE,
) -> list[tuple[str, int, int]]:
    """(cascade_id, original_size, seed_count) rows for cascades up to max_size.

    Seed sets are identical across diffusion variants, so the rows are
    variant-independent.
    """
    rows = []
    for log in logs:
        if log.size <= max_size:
            dg = build_non_tree(network, log)
            rows.append((log.cascade_id, log.size, len(dg.seeds)))
    return sorted(rows)


def scatter_report(report: EstimateReport) -> list[tuple[str, int, int]]:
    """(cascade_id, original_size, estimated_size) projection, sorted by id."""
    return sorted((r.cascade_id, r.original_size, r.estimated_size) for r in report.per_cascade)


def write_gnuplot_script(out_dir: Path, strategies: tuple[str, ...], variants: tuple[str, ...]) -> Path:
    """Emit a gnuplot script plotting summary.csv totals against fraction."""
    lines = [
        "set datafile separator ','",
        "set key outside",
        "set xlabel 'fraction of follow edges deleted'",
        "set ylabel 'estimated total cascade size'",
        "set xrange [0:*]",
    ]
    plots = []
    for strategy in strategies:
        for variant in variants:
            cond = f"strcol(1) eq '{strategy}' && strcol(2) eq '{variant}'"
            plots.append(
                f"  'summary.csv' using ({cond} ? column(4) : NaN):5 "
                f"with linespoints title '{strategy} {variant}'"
            )
    lines.append("plot \\")
    lines.append(", \\\n".join(plots))
    path = out_dir / "plots.gp"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_rows_csv(path: Path, header: tuple[str, ...], rows: list[tuple]) -> None:
    _write_csv(path, header, rows)


def _write_csv(path: Path, header: tuple[str, ...], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _materialise_plan(
    config: ExperimentConfig,
    network: DirectedGraph,
    strategy: str,
    max_budget: int,
) -> tuple[DeletionPlan, Path]:
    """Load a cached plan when it covers the budget, else compute and cache."""
    path = config.out_dir / f"plan_{strategy}.tsv"
    needed = min(max_budget, network.edge_count)
    if path.exists():
        cached = load_plan(path)
        seed_ok = strategy != RANDOM or cached.rng_seed == config.rng_seed
        if cached.strategy == strategy and len(cached.ranked_edges) >= needed and seed_ok:
            logger.info("reusing cached %s plan from %s", strategy, path)
            return cached, path
        logger.info("cached plan at %s does not cover the request; recomputing", path)
    try:
        plan = plan_strategy(network, strategy, max_budget, rng_seed=config.rng_seed, threads=config.threads)
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"plan({strategy}): {exc}", exc.best_residual, exc.iterations
        ) from exc
    save_plan(plan, path)
    return plan, path
