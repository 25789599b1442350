"""Command-line front end.

Subcommands: ``run`` (execute a config file), ``scenarios`` (the three
benchmark scenarios), ``validate-combiner``, ``cost`` and ``graph-gen``.
Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import combiners, metrics
from .algorithms import as_algorithm
from .experiment import (ConfigError, ExperimentResult, load_config,
                         benchmark_scenarios, reduction_percent, run_experiment,
                         scenario_name, write_result)
from .graph import (ConnectivityRetriesExhausted, format_edge_list,
                    load_edge_list, random_geometric_graph)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_graph(path: str):
    """Graph from an edge-list file; bad paths and bad content are usage errors."""
    try:
        return load_edge_list(path)
    except OSError as exc:
        raise ConfigError("graph", f"cannot read {path!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError("graph", f"bad edge list {path!r}: {exc}") from exc


def write_comparison_plot(out_dir, filename: str = "mse_comparison.png") -> Path:
    """Render the MSE comparison plot from the curve CSVs already on disk."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    curve_paths = sorted(out.glob("curve_*.csv"))
    if not curve_paths:
        raise FileNotFoundError(f"no curve CSVs under {out}")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in curve_paths:
        curve = metrics.parse_curve_csv(path.read_text(encoding="utf-8"))
        label = path.stem.removeprefix("curve_")
        ax.plot(curve.mse_db, label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("network MSE (dB)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    target = out / filename
    fig.savefig(target, dpi=120)
    plt.close(fig)
    return target


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, master_seed=args.seed)
    except OSError as exc:
        return _fail(f"cannot read config {args.config!r}: {exc}", EXIT_USAGE)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        result = run_experiment(cfg)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 1
        return _fail(str(exc), EXIT_RUNTIME)
    try:
        write_result(result, args.out)
        write_comparison_plot(args.out)
    except Exception as exc:  # noqa: BLE001
        return _fail(f"cannot write results to {args.out!r}: {exc}", EXIT_RUNTIME)
    print(f"wrote results to {args.out}")
    return EXIT_OK


def _scenario_summary(named_results: list[tuple[str, ExperimentResult]]) -> str:
    lines = []
    for name, result in named_results:
        it = result.iterations_to_threshold
        parts = [f"scenario={name}"]
        for alg in result.config.algorithms:
            reached = it.get(alg)
            parts.append(f"{alg}_iterations="
                         + (str(reached) if reached is not None else "not_reached"))
        pct = reduction_percent(result)
        parts.append("silms_vs_atc_reduction_pct="
                     + (repr(pct) if pct is not None else "not_reached"))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def cmd_scenarios(args) -> int:
    out = Path(args.out)
    try:
        out.mkdir(exist_ok=True)
    except OSError as exc:
        return _fail(f"cannot create {args.out!r}: {exc}", EXIT_RUNTIME)
    named_results = []
    for cfg in benchmark_scenarios():
        if args.runs is not None:
            if args.runs < 1:
                return _fail("n_runs: must be >= 1", EXIT_USAGE)
            cfg = replace(cfg, n_runs=args.runs)
        if args.iterations is not None:
            if args.iterations < 1:
                return _fail("n_iterations: must be >= 1", EXIT_USAGE)
            cfg = replace(cfg, n_iterations=args.iterations)
        name = scenario_name(cfg)
        try:
            result = run_experiment(cfg)
            write_result(result, out / name)
            write_comparison_plot(out / name)
        except ConfigError as exc:
            return _fail(str(exc), EXIT_USAGE)
        except Exception as exc:  # noqa: BLE001
            return _fail(f"scenario {name}: {exc}", EXIT_RUNTIME)
        named_results.append((name, result))
        print(f"scenario {name}: done")
    (out / "summary.txt").write_text(_scenario_summary(named_results), encoding="utf-8")
    print(f"wrote scenario summary to {out / 'summary.txt'}")
    return EXIT_OK


def cmd_validate_combiner(args) -> int:
    try:
        g = _load_graph(args.graph)
        matrix = combiners.build_rule(args.rule, g, kappa=args.kappa)
    except (ConfigError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    violation = combiners.validate(matrix, g)
    if violation is None:
        print(f"ok: {args.rule} on {g.n_nodes} nodes is a valid combination matrix")
        return EXIT_OK
    print(f"invalid: {violation}")
    return EXIT_RUNTIME


def cmd_cost(args) -> int:
    if args.filter_length < 1:
        return _fail(f"filter-length: must be >= 1, got {args.filter_length}", EXIT_USAGE)
    try:
        g = _load_graph(args.graph)
        algorithm = as_algorithm(args.algorithm)
    except (ConfigError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    report = metrics.cost_report(algorithm, g, args.filter_length)
    sys.stdout.write(metrics.cost_report_text(report))
    return EXIT_OK


def cmd_graph_gen(args) -> int:
    if args.nodes < 1:
        return _fail(f"nodes: must be >= 1, got {args.nodes}", EXIT_USAGE)
    if not args.radius > 0:
        return _fail(f"radius: must be > 0, got {args.radius}", EXIT_USAGE)
    try:
        g = random_geometric_graph(args.nodes, args.radius, args.seed)
    except ConnectivityRetriesExhausted as exc:
        return _fail(str(exc), EXIT_RUNTIME)
    try:
        Path(args.out).write_text(format_edge_list(g), encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot write {args.out!r}: {exc}", EXIT_RUNTIME)
    print(f"wrote {g.n_nodes} nodes, {len(g.edges)} edges to {args.out}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="difflms",
        description="Diffusion LMS network simulator (ATC, CTA, no-cooperation "
                    "and serial-scheduled strategies).")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a config file")
    p_run.add_argument("--config", required=True, help="key=value config file")
    p_run.add_argument("--out", required=True, help="output directory (parent must exist)")
    p_run.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_run.set_defaults(func=cmd_run)

    p_sc = sub.add_parser("scenarios", help="run the three benchmark scenarios")
    p_sc.add_argument("--out", required=True, help="output directory (parent must exist)")
    p_sc.add_argument("--runs", type=int, default=None, help="override n_runs (smoke tests)")
    p_sc.add_argument("--iterations", type=int, default=None,
                      help="override n_iterations (smoke tests)")
    p_sc.set_defaults(func=cmd_scenarios)

    p_val = sub.add_parser("validate-combiner", help="check a combination rule on a graph")
    p_val.add_argument("--graph", required=True, help="edge-list file")
    p_val.add_argument("--rule", required=True,
                       help=f"one of: {', '.join(combiners.RULE_NAMES)}")
    p_val.add_argument("--kappa", type=float, default=1.0, help="laplacian rule parameter")
    p_val.set_defaults(func=cmd_validate_combiner)

    p_cost = sub.add_parser("cost", help="per-iteration cost of an algorithm vs ATC")
    p_cost.add_argument("--graph", required=True, help="edge-list file")
    p_cost.add_argument("--algorithm", required=True, help="nocoop|atc|cta|silms")
    p_cost.add_argument("--filter-length", type=int, required=True, dest="filter_length")
    p_cost.set_defaults(func=cmd_cost)

    p_gen = sub.add_parser("graph-gen", help="generate a connected random geometric graph")
    p_gen.add_argument("--nodes", type=int, required=True)
    p_gen.add_argument("--radius", type=float, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="edge-list file to write")
    p_gen.set_defaults(func=cmd_graph_gen)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
