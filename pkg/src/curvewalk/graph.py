"""Immutable weighted-graph model with edge-list ingestion and structural queries.

Nodes are dense integer ids ``0 .. node_count - 1``. Graphs are simple and
undirected: each edge is stored once as a canonical ``(u, v)`` pair with
``u < v``, self-loops and parallel edges are rejected, and every edge and
node weight is strictly positive. All backing arrays are frozen after
construction, so a graph can be shared read-only across worker threads.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

_COMMENT_PREFIXES = ("%", "#")


class GraphFormatError(ValueError):
    """Violation of the edge-list file format or the simple-graph contract."""


class WeightedGraph:
    """Undirected graph with positive edge and node weights.

    Adjacency is kept in CSR-style arrays with neighbors sorted ascending per
    node, so neighbor iteration order (and every floating-point accumulation
    that follows it) is deterministic for a given graph.

    Attributes:
        node_count: Number of nodes.
        edge_count: Number of undirected edges.
        edges: ``(edge_count, 2)`` array of canonical ``u < v`` pairs, in
            construction order; the row index is the edge id.
        edge_weights: Per-edge weight, aligned with ``edges``.
        node_weights: Per-node weight.
        adj_indptr / adj_neighbors / adj_weights / adj_edge_ids: CSR adjacency;
            the slice ``adj_indptr[i]:adj_indptr[i + 1]`` lists node ``i``'s
            incident half-edges sorted by neighbor id.
        degrees: Per-node degree (``len(adj(i))``).
        strengths: Per-node sum of incident edge weights.
    """

    __slots__ = (
        "node_count", "edge_count", "edges", "edge_weights", "node_weights",
        "adj_indptr", "adj_neighbors", "adj_weights", "adj_edge_ids",
        "degrees", "strengths",
    )

    def __init__(self, node_count, edges, edge_weights=None, node_weights=None):
        node_count = int(node_count)
        if node_count < 0:
            raise GraphFormatError("node_count must be non-negative")
        pair_list = [(int(u), int(v)) for u, v in edges]
        m = len(pair_list)
        pairs = np.array(pair_list, dtype=np.int64).reshape(m, 2)

        if edge_weights is None:
            ew = np.ones(m, dtype=np.float64)
        else:
            ew = np.array(edge_weights, dtype=np.float64).reshape(m)
        if node_weights is None:
            nw = np.ones(node_count, dtype=np.float64)
        else:
            nw = np.array(node_weights, dtype=np.float64).reshape(node_count)

        if m:
            if pairs.min() < 0 or pairs.max() >= node_count:
                raise GraphFormatError("edge endpoint out of range")
            if (pairs[:, 0] == pairs[:, 1]).any():
                raise GraphFormatError("self-loops are not allowed")
        if not (np.isfinite(ew).all() and (ew > 0).all()):
            raise GraphFormatError("edge weights must be finite and strictly positive")
        if not (np.isfinite(nw).all() and (nw > 0).all()):
            raise GraphFormatError("node weights must be finite and strictly positive")

        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        if m and np.unique(lo * node_count + hi).size != m:
            raise GraphFormatError("duplicate undirected edge")

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        w2 = np.concatenate([ew, ew])
        eid2 = np.tile(np.arange(m, dtype=np.int64), 2)
        order = np.lexsort((dst, src))

        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=node_count), out=indptr[1:])

        self.node_count = node_count
        self.edge_count = m
        self.edges = np.column_stack([lo, hi]) if m else pairs
        self.edge_weights = ew
        self.node_weights = nw
        self.adj_indptr = indptr
        self.adj_neighbors = dst[order]
        self.adj_weights = w2[order]
        self.adj_edge_ids = eid2[order]
        self.degrees = np.diff(indptr)
        self.strengths = np.bincount(src, weights=w2, minlength=node_count)
        for arr in (self.edges, self.edge_weights, self.node_weights,
                    self.adj_indptr, self.adj_neighbors, self.adj_weights,
                    self.adj_edge_ids, self.degrees, self.strengths):
            arr.setflags(write=False)

    def __repr__(self):
        return f"WeightedGraph(node_count={self.node_count}, edge_count={self.edge_count})"

    def _check_node(self, i) -> int:
        i = int(i)
        if not 0 <= i < self.node_count:
            raise ValueError(
                f"node id {i} out of range for graph with {self.node_count} nodes")
        return i

    def neighbors(self, i) -> list[tuple[int, float]]:
        """Neighbors of ``i`` with edge weights, ascending by neighbor id."""
        i = self._check_node(i)
        s, e = self.adj_indptr[i], self.adj_indptr[i + 1]
        return list(zip(self.adj_neighbors[s:e].tolist(),
                        self.adj_weights[s:e].tolist()))

    def degree(self, i) -> int:
        return int(self.degrees[self._check_node(i)])

    def strength_of(self, i) -> float:
        """Sum of the weights of edges incident to ``i``."""
        return float(self.strengths[self._check_node(i)])

    def edge_id(self, i, j) -> int:
        """Index of edge ``{i, j}`` into ``edges``; raises ValueError if absent."""
        i = self._check_node(i)
        j = self._check_node(j)
        s, e = self.adj_indptr[i], self.adj_indptr[i + 1]
        pos = s + np.searchsorted(self.adj_neighbors[s:e], j)
        if pos >= e or self.adj_neighbors[pos] != j:
            raise ValueError(f"no edge between nodes {i} and {j}")
        return int(self.adj_edge_ids[pos])

    def has_edge(self, i, j) -> bool:
        try:
            self.edge_id(i, j)
        except ValueError:
            return False
        return True

    def edge_weight(self, i, j) -> float:
        return float(self.edge_weights[self.edge_id(i, j)])


@dataclass(frozen=True)
class GraphMeta:
    """Provenance and label bookkeeping for a loaded graph.

    ``labels[k]`` is the original label of dense node id ``k``.
    """

    name: str
    source_path: str
    node_count: int
    edge_count: int
    max_degree: int
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "_label_index", {lab: k for k, lab in enumerate(self.labels)})

    def node_id(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def label_of(self, node: int) -> str:
        return self.labels[node]


def load_edge_list(path, *, delimiter=None, weighted=True,
                   default_node_weight=1.0, name=None):
    """Parse ``u v [w]`` lines into a graph with dense node ids.

    Blank lines and lines starting with ``%`` or ``#`` (KONECT headers
    included) are skipped. Node labels are arbitrary tokens and get dense ids
    in order of first appearance; the label map is kept on the returned
    GraphMeta. A missing weight column means weight 1; ``weighted=False``
    forces weight 1 even when a third column is present. Every node receives
    ``default_node_weight`` as its node weight.

    Args:
        path: Edge-list file.
        delimiter: Column separator; None splits on any whitespace.
        weighted: Whether to honor a third column as the edge weight.
        default_node_weight: Positive node weight assigned to all nodes.
        name: Dataset label for the GraphMeta; defaults to the file stem.

    Returns:
        ``(WeightedGraph, GraphMeta)``.

    Raises:
        GraphFormatError: Malformed line, non-positive weight, self-loop or
            duplicate edge, with the offending line number in the message.
    """
    path = Path(path)
    default_node_weight = float(default_node_weight)
    if not (math.isfinite(default_node_weight) and default_node_weight > 0):
        raise ValueError("default_node_weight must be positive")

    labels: list[str] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    seen: set[tuple[int, int]] = set()

    def node_of(token: str) -> int:
        nid = index.get(token)
        if nid is None:
            nid = len(labels)
            index[token] = nid
            labels.append(token)
        return nid

    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(_COMMENT_PREFIXES):
                continue
            parts = line.split(delimiter) if delimiter else line.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(
                    f"{path}:{lineno}: expected 'u v [w]', got {line!r}")
            if parts[0] == parts[1]:
                raise GraphFormatError(f"{path}:{lineno}: self-loop on {parts[0]!r}")
            if weighted and len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise GraphFormatError(
                        f"{path}:{lineno}: bad weight {parts[2]!r}") from None
                if not (math.isfinite(w) and w > 0):
                    raise GraphFormatError(
                        f"{path}:{lineno}: weight must be positive, got {parts[2]}")
            else:
                w = 1.0
            u = node_of(parts[0])
            v = node_of(parts[1])
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(
                    f"{path}:{lineno}: duplicate edge {parts[0]} -- {parts[1]}")
            seen.add(key)
            edges.append((u, v))
            weights.append(w)

    g = WeightedGraph(len(labels), edges, weights,
                      np.full(len(labels), default_node_weight))
    meta = GraphMeta(
        name=name or path.stem,
        source_path=str(path),
        node_count=g.node_count,
        edge_count=g.edge_count,
        max_degree=int(g.degrees.max()) if g.node_count else 0,
        labels=tuple(labels),
    )
    return g, meta


def write_edge_list(g: WeightedGraph, path, labels=None, comments=()):
    """Write the graph as ``u v w`` lines readable by :func:`load_edge_list`.

    Node ids are written when no labels are given. Weights use repr so a
    reload round-trips exactly. Isolated nodes cannot be represented in this
    format and are dropped on a round-trip.
    """
    if labels is None:
        labels = [str(k) for k in range(g.node_count)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in comments:
            fh.write(f"% {line}\n")
        for eidx in range(g.edge_count):
            u, v = g.edges[eidx]
            fh.write(f"{labels[u]} {labels[v]} {float(g.edge_weights[eidx])!r}\n")


def induced_subgraph(g: WeightedGraph, nodes) -> WeightedGraph:
    """Subgraph on ``nodes`` with dense ids reassigned in ascending old-id order.

    Keeps exactly the edges with both endpoints in ``nodes`` (original
    relative edge order and weights preserved).
    """
    keep = sorted({int(n) for n in nodes})
    if keep and not (0 <= keep[0] and keep[-1] < g.node_count):
        raise ValueError("node id out of range")
    new_id = np.full(g.node_count, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep), dtype=np.int64)
    if g.edge_count:
        mapped = new_id[g.edges]
        mask = (mapped >= 0).all(axis=1)
        sub_edges = mapped[mask]
        sub_weights = g.edge_weights[mask]
    else:
        sub_edges = []
        sub_weights = None
    return WeightedGraph(len(keep), sub_edges, sub_weights, g.node_weights[keep])


def connected_components(g: WeightedGraph) -> list[np.ndarray]:
    """Connected components as sorted id arrays, ordered by smallest member."""
    seen = np.zeros(g.node_count, dtype=bool)
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        seen[s] = True
        members = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            lo, hi = g.adj_indptr[v], g.adj_indptr[v + 1]
            for w in g.adj_neighbors[lo:hi]:
                if not seen[w]:
                    seen[w] = True
                    members.append(int(w))
                    queue.append(int(w))
        comps.append(np.array(sorted(members), dtype=np.int64))
    return comps


def largest_component(g: WeightedGraph) -> np.ndarray:
    """Node ids of the largest connected component (ties: earliest component)."""
    return max(connected_components(g), key=len)
