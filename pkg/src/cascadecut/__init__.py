"""Toolkit for estimating how link deletion limits real diffusion cascades.

Pipeline: parse a follower network and cascade logs (:mod:`.ingest`),
reconstruct per-cascade diffusion graphs (:mod:`.diffusion`), pick follow
edges to delete (:mod:`.deletion`), and count how many users the original
seeds still reach afterwards (:mod:`.estimator`).  :mod:`.experiment` and
the ``cascadecut`` CLI orchestrate budget sweeps over all of it.
"""

from .deletion import (
    BETWEENNESS,
    EDGE_DEGREE,
    NETMELT,
    RANDOM,
    STRATEGIES,
    DeletionPlan,
    load_plan,
    plan_betweenness,
    plan_edge_degree,
    plan_netmelt,
    plan_random,
    plan_strategy,
    save_plan,
)
from .diffusion import (
    NON_TREE,
    TREE_FIRST,
    TREE_LAST,
    VARIANTS,
    DiffusionGraph,
    build_non_tree,
    build_tree_first,
    build_tree_last,
    build_variant,
    seeds_of,
    to_dot,
)
from .errors import (
    CascadecutError,
    ConvergenceError,
    InputError,
    InvariantError,
    ParseError,
)
from .estimator import (
    CascadeResult,
    EstimateReport,
    apply_deletion,
    estimate_size,
    read_report_csv,
    run_estimation,
    write_report_csv,
)
from .experiment import (
    DEFAULT_FRACTIONS,
    ExperimentConfig,
    run_sweep,
    scatter_report,
    seed_analysis,
)
from .graph import (
    DirectedGraph,
    EigenPair,
    build_graph,
    edge_betweenness,
    betweenness_scores,
    leading_eigenpair,
    reachable_from,
)
from .ingest import (
    CascadeLog,
    DatasetStats,
    compute_stats,
    dump_cascades,
    dump_follow_edges,
    filter_cascades,
    load_cascades,
    load_follow_edges,
    load_higgs_activity,
)

__version__ = "0.1.0"

__all__ = [
    "BETWEENNESS",
    "CascadeLog",
    "CascadeResult",
    "CascadecutError",
    "ConvergenceError",
    "DatasetStats",
    "DEFAULT_FRACTIONS",
    "DeletionPlan",
    "DiffusionGraph",
    "DirectedGraph",
    "EDGE_DEGREE",
    "EigenPair",
    "EstimateReport",
    "ExperimentConfig",
    "InputError",
    "InvariantError",
    "NETMELT",
    "NON_TREE",
    "ParseError",
    "RANDOM",
    "STRATEGIES",
    "TREE_FIRST",
    "TREE_LAST",
    "VARIANTS",
    "apply_deletion",
    "betweenness_scores",
    "build_graph",
    "build_non_tree",
    "build_tree_first",
    "build_tree_last",
    "build_variant",
    "compute_stats",
    "dump_cascades",
    "dump_follow_edges",
    "edge_betweenness",
    "estimate_size",
    "filter_cascades",
    "leading_eigenpair",
    "load_cascades",
    "load_follow_edges",
    "load_higgs_activity",
    "load_plan",
    "plan_betweenness",
    "plan_edge_degree",
    "plan_netmelt",
    "plan_random",
    "plan_strategy",
    "read_report_csv",
    "reachable_from",
    "run_estimation",
    "run_sweep",
    "save_plan",
    "scatter_report",
    "seed_analysis",
    "seeds_of",
    "to_dot",
    "write_report_csv",
]
