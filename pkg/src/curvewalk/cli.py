"""Command-line driver: curvature, sampling, statistics and convergence runs.

Subcommands: ``curvature``, ``sample``, ``stats``, ``converge``. Every run
writes CSV result files plus a ``manifest.json`` that records the tool
version, a graph checksum, the fully resolved configuration, the master seed
and the RNG generator name, which is enough to reproduce the run
bit-identically. Exit codes: 0 success, 1 I/O or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .convergence import (DEFAULT_N_CHAINS, ExperimentPlan, run_experiment)
from .curvature import CURVATURE_MODES, compute_curvature_map
from .graph import GraphFormatError, load_edge_list
from .netstats import PATH_MODES, STAT_KINDS, compute_statistics, mean_statistic
from .sampler import (DEFAULT_EPSILON_FLOOR, GENERATOR_NAME, SAMPLER_KINDS,
                      SamplerConfig, run_chain)


class UsageError(ValueError):
    """Invalid flag or flag value; mapped to exit code 2."""


@dataclass
class RunManifest:
    """Reproducibility record written next to every command's outputs."""

    tool_version: str
    command: str
    graph_path: str
    graph_sha256: str
    node_count: int
    edge_count: int
    max_degree: int
    rng_generator: str | None
    master_seed: int | None
    config: dict
    created_utc: str


def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _fmt(x) -> str:
    return repr(float(x))


def _load_graph(args):
    return load_edge_list(args.graph, delimiter=args.delimiter,
                          weighted=not args.unweighted,
                          default_node_weight=args.node_weight)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(out_dir: Path, command: str, args, meta, config: dict,
                    master_seed=None, rng_generator=None):
    manifest = RunManifest(
        tool_version=__version__,
        command=command,
        graph_path=str(args.graph),
        graph_sha256=_sha256_file(args.graph),
        node_count=meta.node_count,
        edge_count=meta.edge_count,
        max_degree=meta.max_degree,
        rng_generator=rng_generator,
        master_seed=master_seed,
        config=config,
        created_utc=datetime.now(timezone.utc).isoformat(),
    )
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _prepare_out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_curvature(args) -> int:
    g, meta = _load_graph(args)
    curvmap = compute_curvature_map(g, args.curvature_mode)
    out = _prepare_out(args)
    _write_csv(out / "edge_curvature.csv", ["edge_u", "edge_v", "forman"],
               ((meta.labels[u], meta.labels[v], _fmt(curvmap.edge_values[e]))
                for e, (u, v) in enumerate(g.edges)))
    _write_csv(out / "node_curvature.csv", ["node", "forman"],
               ((meta.labels[i], _fmt(curvmap.node_values[i]))
                for i in range(g.node_count)))
    _write_manifest(out, "curvature", args, meta,
                    {"curvature_mode": args.curvature_mode})
    return 0


def _resolve_start(args, g):
    if args.start == "random":
        return "random"
    try:
        start = int(args.start)
    except ValueError:
        raise UsageError(f"--start must be a node id or 'random', "
                         f"got {args.start!r}") from None
    if not 0 <= start < g.node_count:
        raise UsageError(f"--start {start} out of range for a graph "
                         f"with {g.node_count} nodes")
    if g.degrees[start] == 0:
        raise UsageError(f"--start {start} is an isolated node")
    return start


def cmd_sample(args) -> int:
    g, meta = _load_graph(args)
    start = _resolve_start(args, g)
    try:
        config = SamplerConfig(kind=args.kind, seed=args.seed,
                               max_steps=args.steps, start_node=start,
                               curvature_mode=args.curvature_mode,
                               epsilon_floor=args.epsilon_floor,
                               burn_in=args.burn_in)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    trace = run_chain(g, config)
    out = _prepare_out(args)
    _write_csv(out / "trace.csv", ["step", "node", "distinct_count"],
               ((k + 1, meta.labels[trace.visits[k]],
                 int(trace.distinct_count_at_step[k]))
                for k in range(trace.steps)))
    _write_manifest(out, "sample", args, meta,
                    {"sampler": asdict(config), "start_node_resolved": int(trace.start)},
                    master_seed=config.seed, rng_generator=GENERATOR_NAME)
    return 0


def cmd_stats(args) -> int:
    g, meta = _load_graph(args)
    stats = compute_statistics(g, STAT_KINDS, args.path_mode)
    out = _prepare_out(args)
    _write_csv(out / "stats.csv", ["node", "bc", "cc", "strength", "wcc"],
               ((meta.labels[i],
                 _fmt(stats["betweenness"].values[i]),
                 _fmt(stats["closeness"].values[i]),
                 _fmt(stats["strength"].values[i]),
                 _fmt(stats["weighted_clustering"].values[i]))
                for i in range(g.node_count)))
    summary = {
        "path_mode": args.path_mode,
        "node_count": g.node_count,
        "edge_count": g.edge_count,
        "full_graph_means": {kind: mean_statistic(sv)
                             for kind, sv in stats.items()},
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, "stats", args, meta, {"path_mode": args.path_mode})
    return 0


def _plan_from_json(path, args) -> ExperimentPlan:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    samplers = tuple(
        SamplerConfig(kind=s["kind"], seed=0, max_steps=1,
                      curvature_mode=s.get("curvature_mode", "combinatorial"),
                      epsilon_floor=s.get("epsilon_floor", DEFAULT_EPSILON_FLOOR),
                      burn_in=s.get("burn_in", 0))
        for s in raw["samplers"])
    return ExperimentPlan(
        samplers=samplers,
        statistics=tuple(raw.get("statistics", STAT_KINDS)),
        n_chains=raw.get("n_chains", DEFAULT_N_CHAINS),
        max_steps=raw.get("max_steps"),
        start_policy=raw.get("start_policy", "distinct_random"),
        start_nodes=tuple(raw["start_nodes"]) if raw.get("start_nodes") else None,
        master_seed=raw.get("master_seed", args.seed),
        path_mode=raw.get("path_mode", args.path_mode),
        use_largest_component=raw.get("use_largest_component",
                                      args.largest_component),
    )


def _plan_from_flags(args) -> ExperimentPlan:
    samplers = tuple(
        SamplerConfig(kind=kind, seed=0, max_steps=1,
                      curvature_mode=args.curvature_mode,
                      epsilon_floor=args.epsilon_floor)
        for kind in args.samplers)
    return ExperimentPlan(
        samplers=samplers,
        statistics=tuple(args.stats),
        n_chains=args.chains,
        max_steps=args.steps,
        master_seed=args.seed,
        path_mode=args.path_mode,
        use_largest_component=args.largest_component,
    )


def cmd_converge(args) -> int:
    g, meta = _load_graph(args)
    if args.plan:
        try:
            plan = _plan_from_json(args.plan, args)
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphFormatError(f"invalid plan file {args.plan}: {exc}") from exc
    else:
        try:
            plan = _plan_from_flags(args)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    result = run_experiment(g, plan, threads=args.threads)

    if result.component_nodes is not None:
        labels = tuple(meta.labels[int(o)] for o in result.component_nodes)
    else:
        labels = meta.labels

    out = _prepare_out(args)
    files = []
    for curve in result.curves:
        name = f"mse_{curve.sampler}_{curve.statistic}.csv"
        _write_csv(out / name, ["n", "mse", "mean_distinct"],
                   ((n + 1, _fmt(curve.mse[n]), _fmt(curve.mean_distinct[n]))
                    for n in range(len(curve.mse))))
        files.append(name)

    # backbone ranking of the first (primary) sampler in the plan
    first = result.sampler_labels[0]
    ranking = result.backbones[first]
    _write_csv(out / "backbone.csv", ["node", "visits", "rank"],
               ((labels[int(node)], int(ranking.visit_counts[node]), rank + 1)
                for rank, node in enumerate(ranking.ranked_nodes)))

    plan_dict = {
        "samplers": [asdict(cfg) for cfg in plan.samplers],
        "sampler_labels": list(result.sampler_labels),
        "statistics": list(plan.statistics),
        "n_chains": plan.n_chains,
        "max_steps": result.backbones[first].max_steps,
        "start_policy": plan.start_policy,
        "start_nodes_resolved": [labels[s] for s in result.start_nodes],
        "chain_seeds": list(result.chain_seeds),
        "path_mode": plan.path_mode,
        "use_largest_component": plan.use_largest_component,
        "restricted_to_component": result.component_nodes is not None,
        "backbone_sampler": first,
        "curve_files": files,
        "full_graph_means": result.full_means,
    }
    _write_manifest(out, "converge", args, meta, plan_dict,
                    master_seed=plan.master_seed, rng_generator=GENERATOR_NAME)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvewalk",
        description="Curvature-guided Markov chain sampling and statistics "
                    "on weighted networks.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True, help="edge-list file (u v [w])")
    common.add_argument("--out", required=True, help="output directory")
    common.add_argument("--delimiter", default=None,
                        help="column separator (default: any whitespace)")
    common.add_argument("--unweighted", action="store_true",
                        help="ignore weight columns, use weight 1")
    common.add_argument("--node-weight", type=float, default=1.0,
                        help="node weight assigned to every node")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", parents=[common],
                       help="per-edge and per-node Forman curvature CSVs")
    p.add_argument("--curvature-mode", choices=CURVATURE_MODES,
                   default="combinatorial")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("sample", parents=[common],
                       help="run one chain and write its trace")
    p.add_argument("--kind", choices=SAMPLER_KINDS, default="node_mh_curved")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--start", default="random",
                   help="start node id or 'random'")
    p.add_argument("--curvature-mode", choices=CURVATURE_MODES,
                   default="combinatorial")
    p.add_argument("--epsilon-floor", type=float, default=DEFAULT_EPSILON_FLOOR)
    p.add_argument("--burn-in", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("stats", parents=[common],
                       help="full-graph per-node statistics")
    p.add_argument("--path-mode", choices=PATH_MODES, default="hop")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("converge", parents=[common],
                       help="multi-chain MSE convergence experiment")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--chains", type=int, default=DEFAULT_N_CHAINS)
    p.add_argument("--steps", type=int, default=None,
                   help="chain length (default: 20x node count)")
    p.add_argument("--samplers", nargs="+", choices=SAMPLER_KINDS,
                   default=["node_mh_curved", "node_mh_uniform"])
    p.add_argument("--stats", nargs="+", choices=STAT_KINDS,
                   default=list(STAT_KINDS))
    p.add_argument("--curvature-mode", choices=CURVATURE_MODES,
                   default="combinatorial")
    p.add_argument("--epsilon-floor", type=float, default=DEFAULT_EPSILON_FLOOR)
    p.add_argument("--path-mode", choices=PATH_MODES, default="hop")
    p.add_argument("--threads", type=int, default=0,
                   help="worker thread cap (0 = all cores); results are "
                        "identical for any value")
    p.add_argument("--plan", default=None,
                   help="JSON plan file (overrides the sampler/statistic flags)")
    p.add_argument("--largest-component", action="store_true",
                   help="restrict a disconnected graph to its largest component")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    """Console-script entry point."""
    raise SystemExit(main())
