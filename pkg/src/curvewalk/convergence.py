"""Multi-chain convergence harness and backbone extraction.

Runs ``n_chains`` chains per sampler, forms the running mean of each
full-graph statistic over the distinct nodes sampled so far, and reports the
mean squared error of that estimator against the full-network mean at every
step, together with the mean distinct-node count. Visit counts aggregated
over a sampler's chains rank nodes for backbone extraction.

Chains of one experiment share start nodes and per-chain seeds across
samplers (seed of chain ``c`` is ``master_seed XOR splitmix64(c)``), so a
curved-versus-uniform comparison is paired. Chains may execute in parallel;
aggregation always runs in fixed chain order, so results are identical for
any thread count.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .graph import WeightedGraph, connected_components, induced_subgraph
from .curvature import compute_curvature_map
from .netstats import STAT_KINDS, PATH_MODES, StatVector, compute_statistics, mean_statistic
from .sampler import (ChainTrace, SamplerConfig, chain_seed, make_rng,
                      make_target, run_chain)

logger = logging.getLogger(__name__)

START_POLICIES = ("distinct_random", "fixed_list")
DEFAULT_STEPS_PER_NODE = 20
DEFAULT_N_CHAINS = 50


@dataclass(frozen=True)
class ExperimentPlan:
    """Specification of one convergence experiment.

    Args:
        samplers: Sampler templates; per-chain ``seed``, ``start_node`` and
            ``max_steps`` are filled in by the harness.
        statistics: Statistic kinds to track (subset of
            :data:`curvewalk.netstats.STAT_KINDS`).
        n_chains: Chains per sampler (>= 2).
        max_steps: Chain length; None means ``20 * node_count``.
        start_policy: ``distinct_random`` draws ``n_chains`` distinct start
            nodes (uniform, without replacement, from the master seed);
            ``fixed_list`` uses ``start_nodes`` as given.
        start_nodes: Start node ids for ``fixed_list`` (one per chain, or a
            single id shared by every chain).
        master_seed: Seed from which start nodes and chain seeds derive.
        path_mode: Shortest-path flavor for betweenness/closeness.
        use_largest_component: Restrict a disconnected graph to its largest
            component (with a warning) instead of rejecting it.
    """

    samplers: tuple[SamplerConfig, ...]
    statistics: tuple[str, ...] = STAT_KINDS
    n_chains: int = DEFAULT_N_CHAINS
    max_steps: int | None = None
    start_policy: str = "distinct_random"
    start_nodes: tuple[int, ...] | None = None
    master_seed: int = 0
    path_mode: str = "hop"
    use_largest_component: bool = False

    def __post_init__(self):
        object.__setattr__(self, "samplers", tuple(self.samplers))
        object.__setattr__(self, "statistics", tuple(self.statistics))
        if not self.samplers:
            raise ValueError("plan needs at least one sampler")
        if not self.statistics:
            raise ValueError("plan needs at least one statistic")
        for kind in self.statistics:
            if kind not in STAT_KINDS:
                raise ValueError(f"unknown statistic {kind!r}")
        if int(self.n_chains) < 2:
            raise ValueError("n_chains must be >= 2")
        object.__setattr__(self, "n_chains", int(self.n_chains))
        if self.max_steps is not None and int(self.max_steps) < 1:
            raise ValueError("max_steps must be >= 1")
        if self.start_policy not in START_POLICIES:
            raise ValueError(f"unknown start policy {self.start_policy!r}")
        if self.start_policy == "fixed_list":
            if not self.start_nodes:
                raise ValueError("fixed_list policy requires start_nodes")
            starts = tuple(int(s) for s in self.start_nodes)
            if len(starts) == 1:
                starts = starts * self.n_chains
            if len(starts) != self.n_chains:
                raise ValueError("start_nodes must list one node per chain")
            object.__setattr__(self, "start_nodes", starts)
        if self.path_mode not in PATH_MODES:
            raise ValueError(f"unknown path mode {self.path_mode!r}")


@dataclass(frozen=True)
class ConvergenceCurve:
    """Per-step MSE of one (sampler, statistic) pair, averaged over chains."""

    sampler: str
    statistic: str
    mse: np.ndarray
    mean_distinct: np.ndarray


@dataclass(frozen=True)
class BackboneRanking:
    """Aggregate visit counts of one sampler's chains, ranked for extraction.

    ``ranked_nodes`` orders every node by descending visit count, ties broken
    by ascending node id; counts sum to ``n_chains * max_steps``.
    """

    visit_counts: np.ndarray
    ranked_nodes: np.ndarray
    n_chains: int
    max_steps: int


@dataclass(frozen=True)
class ExperimentResult:
    """Everything an experiment produced."""

    plan: ExperimentPlan
    sampler_labels: tuple[str, ...]
    curves: tuple[ConvergenceCurve, ...]
    backbones: dict[str, BackboneRanking]
    full_means: dict[str, float]
    start_nodes: tuple[int, ...]
    chain_seeds: tuple[int, ...]
    node_count: int
    component_nodes: np.ndarray | None = None


def estimator_mean(stat: StatVector, trace: ChainTrace, n: int) -> float:
    """Mean of a full-graph statistic over the distinct nodes in the first
    ``n`` samples of a chain (revisits contribute once)."""
    n = int(n)
    if not 1 <= n <= len(trace.visits):
        raise ValueError(f"n must be in 1..{len(trace.visits)}, got {n}")
    return float(np.mean(stat.values[np.unique(trace.visits[:n])]))


def extract_backbone(ranking: BackboneRanking, fraction: float) -> np.ndarray:
    """Ids of the ``ceil(fraction * node_count)`` most-visited nodes."""
    fraction = float(fraction)
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    k = math.ceil(fraction * len(ranking.visit_counts))
    return ranking.ranked_nodes[:k].copy()


def sampler_labels(samplers) -> tuple[str, ...]:
    """Kind names, suffixed with an index when a kind repeats."""
    kinds = [cfg.kind for cfg in samplers]
    labels = []
    for i, kind in enumerate(kinds):
        if kinds.count(kind) > 1:
            labels.append(f"{kind}_{kinds[:i + 1].count(kind)}")
        else:
            labels.append(kind)
    return tuple(labels)


def _chain_job(g, config, curvmap, target, stat_values, full_means):
    """Run one chain and reduce it to per-step estimator curves.

    Returns ``(zbar_by_stat, distinct_counts, visit_counts)``. At full node
    coverage the estimator equals the full mean by definition, so the exact
    precomputed mean is substituted to keep the identity exact in floating
    point as well.
    """
    trace = run_chain(g, config, curvmap=curvmap, target=target)
    visits = trace.visits
    distinct = trace.distinct_count_at_step
    mask = np.empty(len(visits), dtype=bool)
    mask[0] = True
    mask[1:] = distinct[1:] > distinct[:-1]
    zbars = {}
    for kind, values in stat_values.items():
        increments = np.where(mask, values[visits], 0.0)
        zbar = np.cumsum(increments) / distinct
        zbar[distinct == g.node_count] = full_means[kind]
        zbars[kind] = zbar
    counts = np.bincount(visits, minlength=g.node_count)
    return zbars, distinct, counts


def run_experiment(g: WeightedGraph, plan: ExperimentPlan,
                   threads: int | None = None) -> ExperimentResult:
    """Run the full multi-chain convergence experiment described by ``plan``.

    Deterministic given (graph, plan): start nodes and chain seeds derive
    from ``plan.master_seed`` only, and aggregation order is fixed.

    Raises:
        ValueError: disconnected graph without ``use_largest_component``, or
            invalid start configuration.
    """
    component_nodes = None
    comps = connected_components(g)
    if len(comps) > 1:
        if not plan.use_largest_component:
            raise ValueError(
                f"graph has {len(comps)} connected components; enable "
                "use_largest_component to restrict to the largest one")
        component_nodes = max(comps, key=len)
        logger.warning("restricting experiment to the largest component "
                       "(%d of %d nodes)", len(component_nodes), g.node_count)
        g = induced_subgraph(g, component_nodes)

    V = g.node_count
    if V == 0:
        raise ValueError("cannot run an experiment on an empty graph")
    n_steps = plan.max_steps if plan.max_steps is not None else DEFAULT_STEPS_PER_NODE * V
    n_chains = plan.n_chains

    stats = compute_statistics(g, plan.statistics, plan.path_mode)
    stat_values = {kind: sv.values for kind, sv in stats.items()}
    full_means = {kind: mean_statistic(sv) for kind, sv in stats.items()}

    eligible = np.flatnonzero(g.degrees > 0)
    if plan.start_policy == "distinct_random":
        if n_chains > eligible.size:
            raise ValueError(
                f"cannot draw {n_chains} distinct start nodes from "
                f"{eligible.size} non-isolated nodes")
        rng = make_rng(plan.master_seed)
        starts = tuple(int(s) for s in rng.permutation(eligible)[:n_chains])
    else:
        starts = plan.start_nodes
        for s in starts:
            if not 0 <= s < V:
                raise ValueError(f"start node {s} out of range")
            if g.degrees[s] == 0:
                raise ValueError(f"start node {s} is isolated")
    seeds = tuple(chain_seed(plan.master_seed, c) for c in range(n_chains))

    # shared read-only inputs, computed once per experiment
    modes_needed = {cfg.curvature_mode for cfg in plan.samplers
                    if cfg.kind in ("edge_curved", "node_mh_curved")}
    curvmaps = {mode: compute_curvature_map(g, mode) for mode in modes_needed}
    shared = []
    for cfg in plan.samplers:
        curvmap = curvmaps.get(cfg.curvature_mode) \
            if cfg.kind in ("edge_curved", "node_mh_curved") else None
        if cfg.kind == "node_mh_curved":
            target = make_target(g, curvmap, "curved", cfg.epsilon_floor)
        elif cfg.kind == "node_mh_uniform":
            target = make_target(g, None, "uniform")
        else:
            target = None
        shared.append((curvmap, target))

    jobs = []
    for s_idx, template in enumerate(plan.samplers):
        curvmap, target = shared[s_idx]
        for c in range(n_chains):
            config = replace(template, seed=seeds[c], start_node=starts[c],
                             max_steps=n_steps)
            jobs.append((g, config, curvmap, target, stat_values, full_means))

    if threads is None or int(threads) <= 0:
        threads = os.cpu_count() or 1
    threads = int(threads)
    if threads == 1:
        results = [_chain_job(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: _chain_job(*job), jobs))

    labels = sampler_labels(plan.samplers)
    curves = []
    backbones = {}
    for s_idx, label in enumerate(labels):
        chunk = results[s_idx * n_chains:(s_idx + 1) * n_chains]
        distinct_stack = np.stack([distinct for _, distinct, _ in chunk])
        mean_distinct = np.mean(distinct_stack.astype(np.float64), axis=0)
        mean_distinct.setflags(write=False)
        for kind in plan.statistics:
            sq = np.stack([(zbars[kind] - full_means[kind]) ** 2
                           for zbars, _, _ in chunk])
            mse = np.mean(sq, axis=0)
            mse.setflags(write=False)
            curves.append(ConvergenceCurve(sampler=label, statistic=kind,
                                           mse=mse, mean_distinct=mean_distinct))
        counts = np.zeros(V, dtype=np.int64)
        for _, _, c in chunk:
            counts += c
        ranked = np.lexsort((np.arange(V), -counts))
        counts.setflags(write=False)
        ranked.setflags(write=False)
        backbones[label] = BackboneRanking(visit_counts=counts,
                                           ranked_nodes=ranked,
                                           n_chains=n_chains,
                                           max_steps=n_steps)

    return ExperimentResult(
        plan=plan,
        sampler_labels=labels,
        curves=tuple(curves),
        backbones=backbones,
        full_means=full_means,
        start_nodes=starts,
        chain_seeds=seeds,
        node_count=V,
        component_nodes=component_nodes,
    )
