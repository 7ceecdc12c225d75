"""Per-cascade diffusion graphs inferred from follow edges and timestamps.

A cascade spread from user u to user v when v follows u and u's event came
strictly earlier.  Three reconstructions are supported:

* ``non-tree``: every qualifying (earlier followee -> user) pair is an edge,
  so a user may have many parents;
* ``tree-first``: each user keeps only the earliest-posting followee as its
  single parent;
* ``tree-last``: each user keeps only the latest followee that still posted
  strictly before them.

Users with no qualifying parent are the cascade's seeds.  Simultaneous
events never produce an edge (the rule is strictly "earlier"), and equal
candidate-parent timestamps in the tree variants are broken by the
lexicographically smallest user id so rebuilds are deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import DirectedGraph
from .ingest import CascadeLog

logger = logging.getLogger(__name__)

NON_TREE = "non-tree"
TREE_FIRST = "tree-first"
TREE_LAST = "tree-last"
VARIANTS = (NON_TREE, TREE_FIRST, TREE_LAST)


@dataclass(frozen=True)
class DiffusionGraph:
    """One cascade's spread graph: edge (u, v) means it spread from u to v."""

    cascade_id: str
    variant: str
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    seeds: frozenset[str]


def build_non_tree(network: DirectedGraph, log: CascadeLog) -> DiffusionGraph:
    """Diffusion graph keeping every qualifying parent of every user."""
    return _build(network, log, NON_TREE)


def build_tree_first(network: DirectedGraph, log: CascadeLog) -> DiffusionGraph:
    """Diffusion tree keeping each user's earliest-posting followee."""
    return _build(network, log, TREE_FIRST)


def build_tree_last(network: DirectedGraph, log: CascadeLog) -> DiffusionGraph:
    """Diffusion tree keeping each user's latest strictly-earlier followee."""
    return _build(network, log, TREE_LAST)


def build_variant(network: DirectedGraph, log: CascadeLog, variant: str) -> DiffusionGraph:
    builders = {NON_TREE: build_non_tree, TREE_FIRST: build_tree_first, TREE_LAST: build_tree_last}
    try:
        builder = builders[variant]
    except KeyError:
        raise InputError(f"unknown diffusion variant {variant!r}; expected one of {VARIANTS}") from None
    return builder(network, log)


def seeds_of(dg: DiffusionGraph) -> frozenset[str]:
    """Nodes with no incoming diffusion edge."""
    children = {child for _, child in dg.edges}
    return frozenset(dg.nodes - children)


def to_dot(dg: DiffusionGraph) -> str:
    """Render as deterministic DOT text, seed nodes filled light green."""
    lines = [f'digraph "{dg.cascade_id}" {{']
    for node in sorted(dg.nodes):
        if node in dg.seeds:
            lines.append(f'  "{node}" [style=filled, fillcolor=lightgreen];')
        else:
            lines.append(f'  "{node}";')
    for src, dst in sorted(dg.edges):
        lines.append(f'  "{src}" -> "{dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _build(network: DirectedGraph, log: CascadeLog, variant: str) -> DiffusionGraph:
    present: list[str] = []
    missing: list[str] = []
    for user, _ in log.events:
        (present if network.has_node(user) else missing).append(user)
    if missing:
        logger.warning(
            "cascade %s: %d user(s) absent from the follow network; kept as isolated seeds",
            log.cascade_id,
            len(missing),
        )
    nodes = frozenset(u for u, _ in log.events)
    if not present:
        return DiffusionGraph(log.cascade_id, variant, nodes, frozenset(), nodes)

    tau_by_user = log.timestamps()
    n = network.node_count
    member = np.zeros(n, dtype=bool)
    tau = np.zeros(n, dtype=np.int64)
    idx = np.fromiter((network.index_of(u) for u in present), dtype=np.int64, count=len(present))
    member[idx] = True
    tau[idx] = np.fromiter((tau_by_user[u] for u in present), dtype=np.int64, count=len(present))

    followers, followees, _ = network.out_edges_bulk(np.sort(idx))
    qualifies = member[followees] & (tau[followees] < tau[followers])
    parents = followees[qualifies]
    children = followers[qualifies]

    if variant != NON_TREE and parents.size:
        parents, children = _single_parent(parents, children, tau, keep_last=variant == TREE_LAST)

    ids = network.external_ids
    edges = frozenset(
        (ids[p], ids[c]) for p, c in zip(parents.tolist(), children.tolist())
    )
    seeds = frozenset(nodes - {ids[c] for c in children.tolist()})
    return DiffusionGraph(log.cascade_id, variant, nodes, edges, seeds)


def _single_parent(
    parents: np.ndarray, children: np.ndarray, tau: np.ndarray, keep_last: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Reduce candidate parents to one per child.

    Candidates are ordered by timestamp (reversed for the "last" rule) with
    the dense node id as tie-break; dense ids follow sorted external ids, so
    the tie-break is the lexicographically smallest user id.
    """
    parent_tau = -tau[parents] if keep_last else tau[parents]
    order = np.lexsort((parents, parent_tau, children))
    sorted_children = children[order]
    first = np.ones(order.size, dtype=bool)
    first[1:] = sorted_children[1:] != sorted_children[:-1]
    chosen = order[first]
    return parents[chosen], children[chosen]
