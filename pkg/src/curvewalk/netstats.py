"""Per-node network statistics on the full graph.

Four statistics are provided: betweenness centrality (shortest-path counting
over unordered pairs, endpoints excluded, no normalization), closeness
centrality (reciprocal sum of shortest-path distances), strength (weighted
degree) and the Barrat weighted clustering coefficient.

Shortest paths default to hop counts (``path_mode="hop"``) even on weighted
graphs; ``path_mode="weighted"`` treats edge weights as lengths. On
disconnected graphs closeness sums distances over the node's component only
and betweenness skips unreachable pairs; an isolated node has closeness 0
(logged as a warning).
"""

from __future__ import annotations

import heapq
import logging
from collections import deque
from dataclasses import dataclass
from itertools import count

import numpy as np

from .graph import WeightedGraph

logger = logging.getLogger(__name__)

STAT_KINDS = ("betweenness", "closeness", "strength", "weighted_clustering")
PATH_MODES = ("hop", "weighted")


@dataclass(frozen=True)
class StatVector:
    """One per-node statistic evaluated on the full graph."""

    kind: str
    values: np.ndarray
    path_mode: str | None = None


def _check_path_mode(path_mode):
    if path_mode not in PATH_MODES:
        raise ValueError(f"unknown path mode {path_mode!r}")


def _sssp_hop(g: WeightedGraph, s: int):
    """BFS shortest-path data from ``s``: visit order, predecessors, path
    counts and hop distances (-1 for unreachable)."""
    V = g.node_count
    dist = [-1] * V
    sigma = [0] * V
    preds: list[list[int]] = [[] for _ in range(V)]
    dist[s] = 0
    sigma[s] = 1
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v]
        lo, hi = g.adj_indptr[v], g.adj_indptr[v + 1]
        for w in g.adj_neighbors[lo:hi].tolist():
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
            if dist[w] == dv + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma, dist


def _sssp_weighted(g: WeightedGraph, s: int):
    """Dijkstra shortest-path data from ``s`` (weights as lengths).

    Path multiplicity relies on exact float equality of path lengths, the
    standard convention for weighted betweenness.
    """
    V = g.node_count
    dist = [np.inf] * V
    sigma = [0] * V
    preds: list[list[int]] = [[] for _ in range(V)]
    sigma[s] = 1
    order = []
    done = [False] * V
    seen = [np.inf] * V
    seen[s] = 0.0
    tie = count()
    heap = [(0.0, next(tie), s, s)]
    while heap:
        d, _, pred, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        sigma[v] += sigma[pred]
        order.append(v)
        dist[v] = d
        lo, hi = g.adj_indptr[v], g.adj_indptr[v + 1]
        for pos in range(lo, hi):
            w = int(g.adj_neighbors[pos])
            vw_dist = d + float(g.adj_weights[pos])
            if not done[w] and vw_dist < seen[w]:
                seen[w] = vw_dist
                heapq.heappush(heap, (vw_dist, next(tie), v, w))
                sigma[w] = 0
                preds[w] = [v]
            elif vw_dist == seen[w] and not done[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    final = [d if d != np.inf else -1 for d in dist]
    return order, preds, sigma, final


_SSSP = {"hop": _sssp_hop, "weighted": _sssp_weighted}


def betweenness(g: WeightedGraph, path_mode: str = "hop") -> StatVector:
    """Betweenness centrality by per-source shortest-path accumulation.

    Counts unordered pairs ``{i, j}`` with both endpoints distinct from the
    middle node; pairs without a connecting path contribute nothing.
    """
    _check_path_mode(path_mode)
    sssp = _SSSP[path_mode]
    bc = np.zeros(g.node_count, dtype=np.float64)
    for s in range(g.node_count):
        order, preds, sigma, _ = sssp(g, s)
        delta = [0.0] * g.node_count
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    bc /= 2.0  # per-source accumulation counts each unordered pair twice
    bc.setflags(write=False)
    return StatVector(kind="betweenness", values=bc, path_mode=path_mode)


def closeness(g: WeightedGraph, path_mode: str = "hop") -> StatVector:
    """Closeness centrality: 1 / (sum of distances to reachable nodes).

    Nodes with no reachable peer (isolated nodes) get value 0.
    """
    _check_path_mode(path_mode)
    sssp = _SSSP[path_mode]
    cc = np.zeros(g.node_count, dtype=np.float64)
    n_isolated = 0
    for i in range(g.node_count):
        _, _, _, dist = sssp(g, i)
        total = 0.0
        for j, d in enumerate(dist):
            if j != i and d >= 0:
                total += d
        if total > 0:
            cc[i] = 1.0 / total
        else:
            n_isolated += 1
    if n_isolated:
        logger.warning(
            "closeness undefined for %d isolated node(s); reported as 0",
            n_isolated)
    cc.setflags(write=False)
    return StatVector(kind="closeness", values=cc, path_mode=path_mode)


def strength_vector(g: WeightedGraph) -> StatVector:
    """Row sums of the weighted adjacency matrix (degree for unit weights)."""
    values = g.strengths.copy()
    values.setflags(write=False)
    return StatVector(kind="strength", values=values)


def weighted_clustering(g: WeightedGraph) -> StatVector:
    """Barrat weighted clustering coefficient.

    For node ``i``, sums ``W_ij + W_ih`` over ordered neighbor pairs
    ``(j, h)`` that close a triangle with ``i``, divided by
    ``2 s(i) (d(i) - 1)``. Nodes with degree <= 1 get 0 by convention.
    """
    V = g.node_count
    values = np.zeros(V, dtype=np.float64)
    nbr_sets = [set(g.adj_neighbors[g.adj_indptr[i]:g.adj_indptr[i + 1]].tolist())
                for i in range(V)]
    for i in range(V):
        d = int(g.degrees[i])
        if d <= 1:
            continue
        lo, hi = g.adj_indptr[i], g.adj_indptr[i + 1]
        nbrs = g.adj_neighbors[lo:hi].tolist()
        w_inc = g.adj_weights[lo:hi].tolist()
        num = 0.0
        for a in range(d):
            j = nbrs[a]
            set_j = nbr_sets[j]
            for b in range(d):
                if a == b:
                    continue
                if nbrs[b] in set_j:
                    num += w_inc[a] + w_inc[b]
        if num:
            values[i] = num / (2.0 * g.strengths[i] * (d - 1))
    values.setflags(write=False)
    return StatVector(kind="weighted_clustering", values=values)


def mean_statistic(stat: StatVector, nodes="all") -> float:
    """Arithmetic mean of a statistic over a node set (``"all"`` = every node)."""
    if isinstance(nodes, str):
        if nodes != "all":
            raise ValueError(f"nodes must be a node set or 'all', got {nodes!r}")
        if len(stat.values) == 0:
            raise ValueError("mean of an empty node set")
        return float(np.mean(stat.values))
    idx = sorted({int(n) for n in nodes})
    if not idx:
        raise ValueError("mean of an empty node set")
    if idx[0] < 0 or idx[-1] >= len(stat.values):
        raise ValueError("node id out of range")
    return float(np.mean(stat.values[np.array(idx, dtype=np.int64)]))


def compute_statistics(g: WeightedGraph, kinds=STAT_KINDS,
                       path_mode: str = "hop") -> dict[str, StatVector]:
    """Evaluate the requested statistics once on the full graph."""
    out = {}
    for kind in kinds:
        if kind == "betweenness":
            out[kind] = betweenness(g, path_mode)
        elif kind == "closeness":
            out[kind] = closeness(g, path_mode)
        elif kind == "strength":
            out[kind] = strength_vector(g)
        elif kind == "weighted_clustering":
            out[kind] = weighted_clustering(g)
        else:
            raise ValueError(f"unknown statistic {kind!r}")
    return out
