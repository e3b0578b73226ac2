"""Markov chain samplers on the node set of a weighted graph.

Four kernels are provided, selected by ``SamplerConfig.kind``:

* ``edge_curved``: moves to neighbor ``j`` with probability proportional to
  ``|F(<i,j>)| / d(j)`` where ``F`` is the edge Forman curvature; never stays
  in place.
* ``edge_uniform``: moves to a uniformly random neighbor.
* ``node_mh_curved``: Metropolis-Hastings with uniform neighbor proposal
  ``q(i, .) = 1/d(i)`` and target density ``g(i) = max(|F(i)|, eps) / d(i)``.
* ``node_mh_uniform``: same proposal, uniform target density.

Zero curvature handling: ``epsilon_floor`` floors ``|F|`` in both the edge
kernel weights and the node target density so connected graphs stay
irreducible; if every edge at the current node has ``|F| <= epsilon_floor``
the edge kernel falls back to a uniform move. Setting the floor to 0 gives
the bare formulas for graphs without zero curvature.

Reproducibility contract: chains are driven by numpy's PCG64 generator
(recorded as ``"pcg64"`` in run manifests). A chain consumes its uniform
stream in a fixed order: one draw to pick a random start node when
requested, then one uniform per step for edge kinds or two per step
(proposal, then accept) for MH kinds. Chain ``c`` of a multi-chain
experiment is seeded with ``master_seed XOR splitmix64(c)``. Kernels are
precomputed per node once per run (the chains are time-homogeneous), so a
step costs O(log d) for edge kinds and O(1) for MH kinds.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .curvature import CURVATURE_MODES, CurvatureMap, compute_curvature_map
from .graph import WeightedGraph

SAMPLER_KINDS = ("edge_curved", "edge_uniform", "node_mh_curved", "node_mh_uniform")
TARGET_KINDS = ("curved", "uniform")
GENERATOR_NAME = "pcg64"
DEFAULT_EPSILON_FLOOR = 1e-9

_MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One splitmix64 output step; the stream-splitting hash for chain seeds."""
    z = (int(value) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def chain_seed(master_seed: int, chain_index: int) -> int:
    """Seed for chain ``chain_index``: ``master_seed XOR splitmix64(index)``."""
    return (int(master_seed) & _MASK64) ^ splitmix64(chain_index)


def make_rng(seed: int) -> np.random.Generator:
    """Fresh PCG64 generator for ``seed`` (all sampling randomness uses this)."""
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


@dataclass(frozen=True)
class SamplerConfig:
    """Parameters of one chain.

    Args:
        kind: One of :data:`SAMPLER_KINDS`.
        seed: 64-bit RNG seed of this chain.
        max_steps: Number of recorded samples, the start node included.
        start_node: Node id or ``"random"`` (uniform over non-isolated nodes,
            drawn from this chain's generator before any step uniforms).
        curvature_mode: Curvature flavor for the curved kinds.
        epsilon_floor: Floor applied to ``|F|`` (see module docstring).
        burn_in: Transitions advanced before the first recorded sample.
    """

    kind: str
    seed: int
    max_steps: int
    start_node: int | str = "random"
    curvature_mode: str = "combinatorial"
    epsilon_floor: float = DEFAULT_EPSILON_FLOOR
    burn_in: int = 0

    def __post_init__(self):
        if self.kind not in SAMPLER_KINDS:
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.curvature_mode not in CURVATURE_MODES:
            raise ValueError(f"unknown curvature mode {self.curvature_mode!r}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "max_steps", int(self.max_steps))
        object.__setattr__(self, "burn_in", int(self.burn_in))
        object.__setattr__(self, "epsilon_floor", float(self.epsilon_floor))
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if not self.epsilon_floor >= 0:
            raise ValueError("epsilon_floor must be >= 0")
        if isinstance(self.start_node, str):
            if self.start_node != "random":
                raise ValueError("start_node must be a node id or 'random'")
        else:
            object.__setattr__(self, "start_node", int(self.start_node))
            if self.start_node < 0:
                raise ValueError("start_node must be >= 0")


@dataclass(frozen=True)
class ChainTrace:
    """One chain realization.

    ``visits[0]`` is the (post burn-in) start node and ``len(visits)`` equals
    ``config.max_steps``. ``distinct_count_at_step[k]`` counts the unique
    nodes among ``visits[:k + 1]``.
    """

    config: SamplerConfig
    start: int
    visits: np.ndarray
    distinct_count_at_step: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.visits)


@dataclass(frozen=True)
class TransitionMatrix:
    """Dense row-stochastic kernel of a configured sampler (diagnostic)."""

    kind: str
    matrix: np.ndarray


def make_target(g: WeightedGraph, curvmap: CurvatureMap | None = None,
                kind: str = "curved",
                epsilon_floor: float = DEFAULT_EPSILON_FLOOR) -> np.ndarray:
    """Unnormalized MH target density over nodes.

    ``curved`` gives ``max(|F(i)|, epsilon_floor) / d(i)``; ``uniform`` gives
    1 everywhere. Isolated nodes are excluded from the support (density 0) in
    both kinds: no crawl can reach them.

    Raises:
        ValueError: curved kind without a curvature map, or a density that is
            zero everywhere (all-zero ``|F|`` with ``epsilon_floor = 0``).
    """
    if kind not in TARGET_KINDS:
        raise ValueError(f"unknown target kind {kind!r}")
    live = g.degrees > 0
    if kind == "uniform":
        target = np.where(live, 1.0, 0.0)
    else:
        if curvmap is None:
            raise ValueError("curved target requires a curvature map")
        if not epsilon_floor >= 0:
            raise ValueError("epsilon_floor must be >= 0")
        dens = np.maximum(np.abs(curvmap.node_values), epsilon_floor)
        target = np.where(live, dens / np.maximum(g.degrees, 1), 0.0)
        if g.node_count and float(target.max()) == 0.0:
            raise ValueError(
                "curved target density is zero everywhere; "
                "set a positive epsilon_floor")
    target.setflags(write=False)
    return target


def _edge_row_weights(g: WeightedGraph, abs_edge_curv: np.ndarray | None,
                      i: int, epsilon_floor: float) -> np.ndarray:
    """Unnormalized move weights for node ``i``'s CSR row.

    ``abs_edge_curv = None`` means the uniform kernel. For the curved kernel
    the weight toward neighbor ``j`` is ``max(|F(<i,j>)|, floor) / d(j)``,
    except that a row whose curvatures are all ``<= floor`` falls back to a
    uniform row.
    """
    lo, hi = g.adj_indptr[i], g.adj_indptr[i + 1]
    if abs_edge_curv is None:
        return np.ones(hi - lo, dtype=np.float64)
    f = abs_edge_curv[g.adj_edge_ids[lo:hi]]
    if hi == lo or float(f.max()) <= epsilon_floor:
        return np.ones(hi - lo, dtype=np.float64)
    return np.maximum(f, epsilon_floor) / g.degrees[g.adj_neighbors[lo:hi]]


def _cumulative_row(weights: np.ndarray) -> np.ndarray:
    cum = np.cumsum(weights)
    cum /= cum[-1]
    cum[-1] = 1.0  # guard against cumulative rounding below any u < 1
    return cum


def edge_curved_step(g: WeightedGraph, curvmap: CurvatureMap, current,
                     rng: np.random.Generator,
                     epsilon_floor: float = DEFAULT_EPSILON_FLOOR) -> int:
    """One move of the curvature-weighted edge kernel (consumes one uniform)."""
    current = g._check_node(current)
    lo, hi = g.adj_indptr[current], g.adj_indptr[current + 1]
    if hi == lo:
        raise ValueError(f"node {current} is isolated; the chain cannot proceed")
    weights = _edge_row_weights(g, np.abs(curvmap.edge_values), current,
                                epsilon_floor)
    cum = _cumulative_row(weights)
    idx = int(np.searchsorted(cum, rng.random(), side="right"))
    return int(g.adj_neighbors[lo + idx])


def mh_step(g: WeightedGraph, target_g: np.ndarray, current,
            rng: np.random.Generator) -> tuple[int, bool]:
    """One Metropolis-Hastings move (consumes two uniforms: proposal, accept).

    Proposes a uniform neighbor ``Y`` and accepts with probability
    ``min(1, (g(Y)/d(Y)) / (g(X)/d(X)))``; on rejection the chain stays put.
    """
    current = g._check_node(current)
    deg_c = int(g.degrees[current])
    if deg_c == 0:
        raise ValueError(f"node {current} is isolated; the chain cannot proceed")
    g_c = float(target_g[current])
    if not g_c > 0:
        raise ValueError(f"target density is zero at node {current}")
    lo = g.adj_indptr[current]
    u = rng.random()
    y_idx = int(u * deg_c)
    if y_idx == deg_c:  # u * d can round up to d when u is within an ulp of 1
        y_idx = deg_c - 1
    y = int(g.adj_neighbors[lo + y_idx])
    v = rng.random()
    h_c = g_c / g.degrees[current]
    h_y = target_g[y] / g.degrees[y]
    if v * h_c <= h_y:
        return y, True
    return current, False


def _resolve_curvmap(g, config, curvmap):
    needs = config.kind == "edge_curved" or config.kind == "node_mh_curved"
    if needs and curvmap is None:
        curvmap = compute_curvature_map(g, config.curvature_mode)
    return curvmap


def _resolve_target(g, config, curvmap, target):
    if target is not None:
        return target
    if config.kind == "node_mh_curved":
        return make_target(g, curvmap, "curved", config.epsilon_floor)
    return make_target(g, None, "uniform")


def _resolve_start(g, config, rng, target):
    eligible = np.flatnonzero(g.degrees > 0)
    if config.start_node == "random":
        if eligible.size == 0:
            raise ValueError("graph has no non-isolated node to start from")
        start = int(eligible[int(rng.integers(0, eligible.size))])
    else:
        start = g._check_node(config.start_node)
        if g.degrees[start] == 0:
            raise ValueError(f"start node {start} is isolated")
    if target is not None and not target[start] > 0:
        raise ValueError(f"target density is zero at start node {start}")
    return start


def run_chain(g: WeightedGraph, config: SamplerConfig,
              curvmap: CurvatureMap | None = None,
              target: np.ndarray | None = None) -> ChainTrace:
    """Run one chain; the trace is a pure function of (graph, config).

    ``curvmap`` and ``target`` are optional precomputed inputs (they are
    derived from the config when omitted; experiments pass shared instances
    so nothing is recomputed per chain).
    """
    if g.node_count == 0:
        raise ValueError("cannot sample an empty graph")
    curvmap = _resolve_curvmap(g, config, curvmap)
    is_mh = config.kind.startswith("node_mh")
    if is_mh:
        target = _resolve_target(g, config, curvmap, target)
    rng = make_rng(config.seed)
    start = _resolve_start(g, config, rng, target if is_mh else None)

    n = config.max_steps
    visits = np.empty(n, dtype=np.int64)
    indptr = g.adj_indptr
    nbr_rows = [g.adj_neighbors[indptr[i]:indptr[i + 1]].tolist()
                for i in range(g.node_count)]

    # block-drawn uniforms; a chain consumes a prefix of the seed's stream
    def uniforms(block=1 << 16):
        while True:
            yield from rng.random(block).tolist()

    nxt = uniforms().__next__
    cur = start
    # the start is validated non-isolated and moves follow edges, so every
    # visited node has degree >= 1
    if is_mh:
        h = (target / np.maximum(g.degrees, 1)).tolist()
        for _ in range(config.burn_in):
            row = nbr_rows[cur]
            d = len(row)
            y_idx = int(nxt() * d)
            if y_idx == d:
                y_idx = d - 1
            y = row[y_idx]
            if nxt() * h[cur] <= h[y]:
                cur = y
        visits[0] = cur
        for k in range(1, n):
            row = nbr_rows[cur]
            d = len(row)
            y_idx = int(nxt() * d)
            if y_idx == d:  # u * d can round up to d when u is within an ulp of 1
                y_idx = d - 1
            y = row[y_idx]
            if nxt() * h[cur] <= h[y]:
                cur = y
            visits[k] = cur
    else:
        abs_curv = np.abs(curvmap.edge_values) if config.kind == "edge_curved" else None
        cum_rows = [
            _cumulative_row(_edge_row_weights(g, abs_curv, i, config.epsilon_floor)).tolist()
            if g.degrees[i] else []
            for i in range(g.node_count)
        ]
        for _ in range(config.burn_in):
            cur = nbr_rows[cur][bisect_right(cum_rows[cur], nxt())]
        visits[0] = cur
        for k in range(1, n):
            cur = nbr_rows[cur][bisect_right(cum_rows[cur], nxt())]
            visits[k] = cur

    distinct = distinct_prefix_counts(visits)
    visits.setflags(write=False)
    distinct.setflags(write=False)
    return ChainTrace(config=config, start=int(visits[0]), visits=visits,
                      distinct_count_at_step=distinct)


def distinct_prefix_counts(visits: np.ndarray) -> np.ndarray:
    """Number of unique nodes in each prefix of a visit sequence."""
    mask = np.zeros(len(visits), dtype=bool)
    mask[np.unique(visits, return_index=True)[1]] = True
    return np.cumsum(mask, dtype=np.int64)


def build_transition_matrix(g: WeightedGraph, config: SamplerConfig,
                            curvmap: CurvatureMap | None = None,
                            target: np.ndarray | None = None,
                            size_guard: int = 2000) -> TransitionMatrix:
    """Exact dense kernel of the configured sampler.

    Edge kinds have a zero diagonal; MH kinds carry the total rejection mass
    on the diagonal. Rows of isolated nodes (and of nodes outside the target
    support) are absorbing so the matrix stays stochastic.
    """
    if g.node_count > size_guard:
        raise ValueError(
            f"transition matrix limited to {size_guard} nodes, "
            f"graph has {g.node_count}")
    curvmap = _resolve_curvmap(g, config, curvmap)
    is_mh = config.kind.startswith("node_mh")
    if is_mh:
        target = _resolve_target(g, config, curvmap, target)
    abs_curv = np.abs(curvmap.edge_values) if config.kind == "edge_curved" else None

    V = g.node_count
    P = np.zeros((V, V), dtype=np.float64)
    deg = g.degrees
    for i in range(V):
        lo, hi = g.adj_indptr[i], g.adj_indptr[i + 1]
        if hi == lo:
            P[i, i] = 1.0
            continue
        nbrs = g.adj_neighbors[lo:hi]
        if not is_mh:
            w = _edge_row_weights(g, abs_curv, i, config.epsilon_floor)
            P[i, nbrs] = w / w.sum()
        else:
            g_i = float(target[i])
            if not g_i > 0:
                P[i, i] = 1.0
                continue
            h_i = g_i / deg[i]
            h_nbrs = target[nbrs] / deg[nbrs]
            accept = np.minimum(1.0, h_nbrs / h_i)
            P[i, nbrs] = accept / deg[i]
            P[i, i] = 1.0 - accept.sum() / deg[i]
    P.setflags(write=False)
    return TransitionMatrix(kind=config.kind, matrix=P)


def stationary_distribution(tm: TransitionMatrix | np.ndarray) -> np.ndarray:
    """Stationary law pi with pi P = pi, sum(pi) = 1, by GTH elimination.

    The Grassmann-Taksar-Heyman reduction uses no subtractions, so the
    result keeps full relative accuracy even for nearly reducible kernels
    (for example chains whose irreducibility hangs on an epsilon floor).

    Raises:
        numpy.linalg.LinAlgError: the kernel is reducible (no unique
            stationary distribution).
    """
    P = tm.matrix if isinstance(tm, TransitionMatrix) else np.asarray(tm)
    P = P.astype(np.float64, copy=True)
    n = P.shape[0]
    if n == 0 or P.shape != (n, n):
        raise ValueError("transition matrix must be square and non-empty")
    for k in range(n - 1, 0, -1):
        s = float(P[k, :k].sum())
        if not s > 0:
            raise np.linalg.LinAlgError(
                "kernel is reducible; no unique stationary distribution")
        P[:k, k] /= s
        P[:k, :k] += np.outer(P[:k, k], P[k, :k])
    pi = np.empty(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = float(pi[:k] @ P[:k, k])
    return pi / pi.sum()
