"""Apply deletion plans to diffusion graphs and count who still gets reached.

A plan selects follow edges (u follows v); information moved the other way,
so deleting follow edge (u, v) blocks the diffusion edge (v, u).  The
estimate for a cascade after deletion is the number of nodes reachable from
the cascade's original seed set.  Seeds stay fixed even when a deletion
leaves other nodes with no incoming edge: such nodes are exactly the users
the deletion cut off.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple

from .deletion import DeletionPlan
from .diffusion import DiffusionGraph, build_variant
from .errors import InputError, InvariantError
from .graph import DirectedGraph, build_graph, reachable_from

REPORT_HEADER = ("strategy", "variant", "k", "cascade_id", "original_size", "estimated_size", "seed_count")


class CascadeResult(NamedTuple):
    cascade_id: str
    original_size: int
    estimated_size: int
    seed_count: int


@dataclass(frozen=True)
class EstimateReport:
    """Per-cascade and total post-deletion sizes for one (strategy, variant, k)."""

    strategy: str
    variant: str
    k: int
    per_cascade: tuple[CascadeResult, ...]
    total_original: int
    total_estimated: int

    def __post_init__(self):
        for row in self.per_cascade:
            if not (row.seed_count <= row.estimated_size <= row.original_size):
                raise InvariantError(
                    f"cascade {row.cascade_id}: expected seed_count <= estimated <= original, "
                    f"got {row.seed_count}/{row.estimated_size}/{row.original_size}"
                )
        if self.total_original != sum(r.original_size for r in self.per_cascade):
            raise InvariantError("total_original does not match per-cascade sum")
        if self.total_estimated != sum(r.estimated_size for r in self.per_cascade):
            raise InvariantError("total_estimated does not match per-cascade sum")

    @classmethod
    def from_rows(cls, strategy: str, variant: str, k: int, rows: Iterable[CascadeResult]) -> "EstimateReport":
        ordered = tuple(sorted(rows, key=lambda r: r.cascade_id))
        return cls(
            strategy=strategy,
            variant=variant,
            k=k,
            per_cascade=ordered,
            total_original=sum(r.original_size for r in ordered),
            total_estimated=sum(r.estimated_size for r in ordered),
        )


def deleted_diffusion_edges(plan: DeletionPlan) -> frozenset[tuple[str, str]]:
    """Translate a plan's follow edges into the diffusion edges they block."""
    return frozenset((dst, src) for src, dst in plan.ranked_edges)


def apply_deletion(dg: DiffusionGraph, plan: DeletionPlan) -> DiffusionGraph:
    """Remove the plan's blocked diffusion edges; nodes and seeds unchanged."""
    return _apply_deleted(dg, deleted_diffusion_edges(plan))


def estimate_size(dg_after: DiffusionGraph, original_seeds: Iterable[str]) -> int:
    """Number of nodes reachable from the original seeds after deletion."""
    seeds = set(original_seeds)
    unknown = seeds - dg_after.nodes
    if unknown:
        raise InputError(f"seed users not in the diffusion graph: {sorted(unknown)[:5]}")
    graph = build_graph(dg_after.edges, nodes=dg_after.nodes)
    return len(reachable_from(graph, seeds))


def run_estimation(
    network: DirectedGraph,
    logs: list,
    plan: DeletionPlan,
    variant: str,
    threads: int = 1,
) -> EstimateReport:
    """Build, cut, and measure every cascade; totals are order-independent.

    Cascades are processed independently (in parallel when ``threads`` > 1)
    and merged by cascade id, so the report does not depend on input or
    execution order.
    """
    graphs = [build_variant(network, log, variant) for log in logs]
    rows = estimate_rows(graphs, deleted_diffusion_edges(plan), threads=threads)
    return EstimateReport.from_rows(plan.strategy, variant, plan.k, rows)


def estimate_rows(
    graphs: list[DiffusionGraph],
    deleted: frozenset[tuple[str, str]],
    threads: int = 1,
) -> list[CascadeResult]:
    """Post-deletion sizes for pre-built diffusion graphs."""
    if threads < 1:
        raise InputError("threads must be >= 1")
    if threads == 1 or len(graphs) < 2:
        return [_estimate_one(dg, deleted) for dg in graphs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda dg: _estimate_one(dg, deleted), graphs))


def _apply_deleted(dg: DiffusionGraph, deleted: frozenset[tuple[str, str]]) -> DiffusionGraph:
    return replace(dg, edges=frozenset(dg.edges - deleted))


def _estimate_one(dg: DiffusionGraph, deleted: frozenset[tuple[str, str]]) -> CascadeResult:
    after = _apply_deleted(dg, deleted)
    return CascadeResult(
        cascade_id=dg.cascade_id,
        original_size=len(dg.nodes),
        estimated_size=estimate_size(after, dg.seeds),
        seed_count=len(dg.seeds),
    )


def write_report_csv(report: EstimateReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in report.per_cascade:
            writer.writerow(
                (report.strategy, report.variant, report.k, row.cascade_id,
                 row.original_size, row.estimated_size, row.seed_count)
            )


def read_report_csv(path: str | Path) -> EstimateReport:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(REPORT_HEADER):
            raise InputError(f"{path}: unexpected report header {header!r}")
        strategy, variant, k = "", "", 0
        rows: list[CascadeResult] = []
        for fields in reader:
            if not fields:
                continue
            strategy, variant, k = fields[0], fields[1], int(fields[2])
            rows.append(CascadeResult(fields[3], int(fields[4]), int(fields[5]), int(fields[6])))
    return EstimateReport.from_rows(strategy, variant, k, rows)
