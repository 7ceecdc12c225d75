"""Brute-force reference implementations used to check the real algorithms.

Everything here is deliberately naive (dictionary DFS, per-pair path
counting, dense eigensolvers, double loops over user pairs) and shares no
code with the package, so agreement is meaningful.
"""

from __future__ import annotations

import random
from collections import defaultdict

import numpy as np


def adjacency(edges):
    adj = defaultdict(list)
    for src, dst in edges:
        adj[src].append(dst)
    return adj


def closure_from(edges, sources):
    """Reachable set via repeated single-source DFS."""
    adj = adjacency(edges)
    reached = set()
    for source in sources:
        stack = [source]
        while stack:
            node = stack.pop()
            if node in reached:
                continue
            reached.add(node)
            stack.extend(w for w in adj[node] if w not in reached)
    return reached


def bfs_levels(adj, source):
    """(distance map, shortest-path count map) from one source."""
    dist = {source: 0}
    count = {source: 1.0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
                if dist[w] == dist[v] + 1:
                    count[w] = count.get(w, 0.0) + count[v]
        frontier = nxt
    return dist, count


def path_count_betweenness(nodes, edges):
    """Edge betweenness by explicit per-pair path counting.

    For each ordered pair (s, t), counts shortest s->t paths through every
    edge with a forward count DP from s and a backward count DP to t.
    """
    adj = adjacency(edges)
    scores = {edge: 0.0 for edge in edges}
    for s in nodes:
        dist, fwd = bfs_levels(adj, s)
        for t in dist:
            if t == s:
                continue
            dt = dist[t]
            back = {t: 1.0}
            for v in sorted((v for v in dist if dist[v] < dt), key=lambda v: -dist[v]):
                total = 0.0
                for w in adj[v]:
                    if w in dist and dist[w] == dist[v] + 1:
                        total += back.get(w, 0.0)
                back[v] = total
            assert abs(back[s] - fwd[t]) < 1e-6, "path-count DP out of balance"
            for u, v in edges:
                if u in dist and v in dist and dist[v] == dist[u] + 1:
                    through = fwd[u] * back.get(v, 0.0)
                    if through:
                        scores[(u, v)] += through / fwd[t]
    return scores


def all_pairs_distance_sum(nodes, edges):
    """Sum of shortest-path lengths over ordered reachable pairs (s != t)."""
    adj = adjacency(edges)
    total = 0
    for s in nodes:
        dist, _ = bfs_levels(adj, s)
        total += sum(d for t, d in dist.items() if t != s)
    return total


def dense_spectral_radius(nodes, edges):
    """Largest-magnitude adjacency eigenvalue from a dense QR eigensolver."""
    order = sorted(nodes)
    index = {node: i for i, node in enumerate(order)}
    matrix = np.zeros((len(order), len(order)))
    for src, dst in edges:
        matrix[index[src], index[dst]] = 1.0
    if not len(order):
        return 0.0
    return float(np.abs(np.linalg.eigvals(matrix)).max())


def spread_rule_edges(follow_edges, tau):
    """Diffusion edges by the direct double loop over participant pairs.

    (u, v) is an edge when v follows u and u's timestamp is strictly
    smaller than v's.
    """
    follows = set(follow_edges)
    users = list(tau)
    result = set()
    for u in users:
        for v in users:
            if u != v and (v, u) in follows and tau[u] < tau[v]:
                result.add((u, v))
    return result


def single_parent_edges(follow_edges, tau, latest):
    """Per-user argmin/argmax scan over qualifying parents."""
    result = set()
    candidates = spread_rule_edges(follow_edges, tau)
    by_child = defaultdict(list)
    for parent, child in candidates:
        by_child[child].append(parent)
    for child, parents in by_child.items():
        if latest:
            best = min(parents, key=lambda p: (-tau[p], p))
        else:
            best = min(parents, key=lambda p: (tau[p], p))
        result.add((best, child))
    return result


def indegree_zero(nodes, edges):
    with_incoming = {dst for _, dst in edges}
    return set(nodes) - with_incoming


def random_digraph(rng: random.Random, n, p, prefix="u"):
    """(node ids, edge list) of a G(n, p) digraph without self-loops."""
    nodes = [f"{prefix}{i:03d}" for i in range(n)]
    edges = [(a, b) for a in nodes for b in nodes if a != b and rng.random() < p]
    return nodes, edges
