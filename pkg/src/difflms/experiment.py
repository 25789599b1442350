"""Declarative experiment configs and the Monte Carlo harness.

An experiment fixes one topology, one true parameter vector and one pair of
variance profiles, then runs each requested algorithm over ``n_runs``
independently seeded data realizations. All algorithms consume identical
sample streams per run (verified by checksums), so convergence comparisons
are paired. Everything derives deterministically from ``master_seed``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import combiners, metrics
from .algorithms import (ERROR_METRICS, Algorithm, Schedule, as_algorithm,
                         run_trajectories)
from .graph import Graph, format_edge_list, load_edge_list, random_geometric_graph
from .metrics import CostReport, LearningCurve
from .signal_model import (VARIANCE_MODES, InputProfile, NoiseProfile,
                           profiles_to_csv, random_parameter, variance_profiles)

GRAPH_SOURCES = ("generated", "file")
SCHEDULE_ASCENDING = "ascending"

# spawn-key domains under master_seed
_GRAPH_DOMAIN, _OMEGA_DOMAIN, _PROFILE_DOMAIN, _RUN_DOMAIN = 0, 1, 2, 3

DEFAULT_MASTER_SEED = 12345


class ConfigError(ValueError):
    """Invalid experiment configuration; carries the offending field name."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class ExperimentConfig:
    n_nodes: int = 20
    filter_length: int = 5
    step_size: float = 0.01
    n_iterations: int = 2000
    n_runs: int = 100
    variance_mode: str = "equal"
    combiner_rule: str = "metropolis"
    second_combiner_rule: str = ""  # empty: same rule as combiner_rule
    algorithms: tuple[str, ...] = ("atc", "silms")
    master_seed: int = DEFAULT_MASTER_SEED
    graph_source: str = "generated"
    graph_radius: float = 0.45
    graph_path: str = ""
    schedule: str = SCHEDULE_ASCENDING
    error_metric: str = "a_priori"
    threshold_db: float = -20.0
    laplacian_kappa: float = 1.0
    real_valued: bool = False


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_algorithms(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


_PARSERS = {
    int: int,
    float: float,
    str: lambda raw: raw.strip(),
    bool: _parse_bool,
    tuple: _parse_algorithms,
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat ``key=value`` config format ('#' starts a comment)."""
    known = {f.name: f for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in known:
            raise ConfigError(key, "unknown config key")
        default = known[key].default
        parser = _PARSERS[tuple if isinstance(default, tuple) else type(default)]
        try:
            values[key] = parser(value.strip())
        except ValueError as exc:
            raise ConfigError(key, str(exc)) from None
    cfg = ExperimentConfig(**values)
    validate_config(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(cfg: ExperimentConfig) -> str:
    """Config echo in the same key=value format accepted by :func:`parse_config`."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            rendered = ",".join(value)
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        lines.append(f"{f.name}={rendered}")
    return "\n".join(lines) + "\n"


def _parse_schedule(text: str, n: int) -> Schedule:
    if text == SCHEDULE_ASCENDING:
        return Schedule.ascending(n)
    try:
        order = tuple(int(p) for p in text.split(","))
        sched = Schedule(order=order)
    except ValueError as exc:
        raise ConfigError("schedule", str(exc)) from None
    if len(sched.order) != n:
        raise ConfigError("schedule", f"covers {len(sched.order)} nodes, expected {n}")
    return sched


def validate_config(cfg: ExperimentConfig) -> None:
    """Raise :class:`ConfigError` naming the first offending field."""
    for name in ("n_nodes", "filter_length", "n_iterations", "n_runs"):
        if getattr(cfg, name) < 1:
            raise ConfigError(name, f"must be >= 1, got {getattr(cfg, name)}")
    if not cfg.step_size > 0:
        raise ConfigError("step_size", f"must be > 0, got {cfg.step_size}")
    if cfg.variance_mode not in VARIANCE_MODES:
        raise ConfigError("variance_mode", f"must be one of {VARIANCE_MODES}")
    if cfg.combiner_rule not in combiners.RULE_NAMES:
        raise ConfigError("combiner_rule", f"must be one of {combiners.RULE_NAMES}")
    if cfg.second_combiner_rule and cfg.second_combiner_rule not in combiners.RULE_NAMES:
        raise ConfigError("second_combiner_rule", f"must be one of {combiners.RULE_NAMES}")
    if not cfg.algorithms:
        raise ConfigError("algorithms", "must list at least one algorithm")
    for alg in cfg.algorithms:
        try:
            as_algorithm(alg)
        except ValueError as exc:
            raise ConfigError("algorithms", str(exc)) from None
    if cfg.graph_source not in GRAPH_SOURCES:
        raise ConfigError("graph_source", f"must be one of {GRAPH_SOURCES}")
    if cfg.graph_source == "file" and not cfg.graph_path:
        raise ConfigError("graph_path", "required when graph_source=file")
    if cfg.graph_source == "generated" and not cfg.graph_radius > 0:
        raise ConfigError("graph_radius", f"must be > 0, got {cfg.graph_radius}")
    if cfg.error_metric not in ERROR_METRICS:
        raise ConfigError("error_metric", f"must be one of {ERROR_METRICS}")
    if not 0 < cfg.laplacian_kappa <= 1:
        raise ConfigError("laplacian_kappa", f"must be in (0, 1], got {cfg.laplacian_kappa}")
    if cfg.schedule != SCHEDULE_ASCENDING:
        _parse_schedule(cfg.schedule, cfg.n_nodes)


def subseed(master_seed: int, *path: int) -> int:
    """Deterministic integer sub-seed derived by counter-based splitting."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class ExperimentResult:
    """Everything produced by one experiment; reproducible from ``config``."""

    config: ExperimentConfig  # resolved echo (n_nodes matches the graph)
    graph: Graph
    omega0: np.ndarray
    input_profile: InputProfile
    noise_profile: NoiseProfile
    curves: dict[str, LearningCurve] = field(default_factory=dict)
    costs: dict[str, CostReport] = field(default_factory=dict)
    iterations_to_threshold: dict[str, int | None] = field(default_factory=dict)
    initial_msd_db: float = 0.0
    threshold_db_absolute: float = 0.0
    sample_checksums: dict[str, tuple[str, ...]] = field(default_factory=dict)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run every configured algorithm on paired Monte Carlo data.

    The topology, the true parameter and the variance profiles are drawn once
    per experiment from sub-seeds of ``master_seed``; each run r then gets its
    own sample sub-seed, shared across algorithms so their curves are paired.
    """
    validate_config(cfg)
    if cfg.graph_source == "file":
        try:
            graph = load_edge_list(cfg.graph_path)
        except OSError as exc:
            raise ConfigError("graph_path", f"cannot read {cfg.graph_path!r}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError("graph_path", f"bad edge list {cfg.graph_path!r}: {exc}") from exc
    else:
        graph = random_geometric_graph(cfg.n_nodes, cfg.graph_radius,
                                       subseed(cfg.master_seed, _GRAPH_DOMAIN))
    n = graph.n_nodes

    omega0 = random_parameter(cfg.filter_length, subseed(cfg.master_seed, _OMEGA_DOMAIN),
                              real_valued=cfg.real_valued)
    input_profile, noise_profile = variance_profiles(
        n, cfg.variance_mode, subseed(cfg.master_seed, _PROFILE_DOMAIN))

    c = combiners.build_rule(cfg.combiner_rule, graph, cfg.laplacian_kappa)
    second_rule = cfg.second_combiner_rule or cfg.combiner_rule
    a = combiners.build_rule(second_rule, graph, cfg.laplacian_kappa)
    mu = np.full(n, cfg.step_size)
    schedule = _parse_schedule(cfg.schedule, n)
    run_seeds = [subseed(cfg.master_seed, _RUN_DOMAIN, r) for r in range(cfg.n_runs)]

    initial_msd = float(np.sum(np.abs(omega0) ** 2))
    initial_msd_db = float(metrics.to_db(initial_msd))
    threshold_abs = cfg.threshold_db + initial_msd_db

    resolved = replace(cfg, n_nodes=n, second_combiner_rule=second_rule)
    result = ExperimentResult(config=resolved, graph=graph, omega0=omega0,
                              input_profile=input_profile, noise_profile=noise_profile,
                              initial_msd_db=initial_msd_db,
                              threshold_db_absolute=threshold_abs)

    for alg_name in cfg.algorithms:
        batch = run_trajectories(alg_name, graph, c, a, mu, omega0, input_profile,
                                 noise_profile, cfg.n_iterations, run_seeds,
                                 schedule=schedule, error_metric=cfg.error_metric,
                                 collect_checksums=True, real_valued=cfg.real_valued)
        curve = metrics.average_curves(batch.mse, batch.msd)
        result.curves[alg_name] = curve
        result.costs[alg_name] = metrics.cost_report(alg_name, graph, cfg.filter_length)
        result.iterations_to_threshold[alg_name] = metrics.iterations_to_threshold(
            curve, threshold_abs)
        assert batch.sample_checksums is not None
        result.sample_checksums[alg_name] = batch.sample_checksums

    digests = set(result.sample_checksums.values())
    if len(digests) > 1:
        raise RuntimeError("sample streams diverged between algorithms; pairing broken")
    return result


def reduction_percent(result: ExperimentResult, fast: str = "silms",
                      baseline: str = "atc") -> float | None:
    """Percentage fewer iterations the fast algorithm needs to cross the
    threshold, or None when either never reaches it."""
    it_fast = result.iterations_to_threshold.get(fast)
    it_base = result.iterations_to_threshold.get(baseline)
    if it_fast is None or it_base is None or it_base == 0:
        return None
    return 100.0 * (1.0 - it_fast / it_base)


def summary_text(result: ExperimentResult) -> str:
    cfg = result.config
    lines = [
        f"n_nodes={cfg.n_nodes}",
        f"n_runs={cfg.n_runs}",
        f"n_iterations={cfg.n_iterations}",
        f"threshold_db={cfg.threshold_db!r}",
        f"threshold_db_absolute={result.threshold_db_absolute!r}",
        f"initial_msd_db={result.initial_msd_db!r}",
    ]
    for alg in cfg.algorithms:
        reached = result.iterations_to_threshold[alg]
        lines.append("")
        lines.append(f"algorithm={alg}")
        lines.append("iterations_to_threshold="
                     + (str(reached) if reached is not None else "not_reached"))
        lines.append(f"steady_state_mse_db={metrics.steady_state_mse_db(result.curves[alg])!r}")
    pct = reduction_percent(result)
    if "silms" in cfg.algorithms and "atc" in cfg.algorithms:
        lines.append("")
        lines.append("silms_vs_atc_reduction_pct="
                     + (repr(pct) if pct is not None else "not_reached"))
    return "\n".join(lines) + "\n"


def write_result(result: ExperimentResult, out_dir) -> None:
    """Write the output layout: config echo, graph, profiles, curves, costs, summary.

    ``out_dir`` is created if absent, but its parent must exist.
    """
    out = Path(out_dir)
    out.mkdir(exist_ok=True)
    (out / "config_echo.txt").write_text(format_config(result.config), encoding="utf-8")
    (out / "graph.edges").write_text(format_edge_list(result.graph), encoding="utf-8")
    (out / "profiles.csv").write_text(
        profiles_to_csv(result.input_profile, result.noise_profile), encoding="utf-8")
    for alg, curve in result.curves.items():
        (out / f"curve_{alg}.csv").write_text(metrics.curve_to_csv(curve), encoding="utf-8")
    cost_blocks = []
    for alg, report in result.costs.items():
        cost_blocks.append(f"algorithm={alg}\n" + metrics.cost_report_text(report))
    (out / "costs.txt").write_text("\n".join(cost_blocks), encoding="utf-8")
    (out / "summary.txt").write_text(summary_text(result), encoding="utf-8")


def scenario_name(cfg: ExperimentConfig) -> str:
    mu_tag = repr(cfg.step_size).replace(".", "p")
    return f"{cfg.variance_mode}_mu{mu_tag}"


def benchmark_scenarios() -> list[ExperimentConfig]:
    """The three benchmark scenarios: equal variances at step size 0.01, and
    varying variances at step sizes 0.01 and 0.05. All share one master seed
    (hence one topology), differing only in variance mode and step size."""
    base = ExperimentConfig(master_seed=DEFAULT_MASTER_SEED)
    return [
        replace(base, variance_mode="equal", step_size=0.01),
        replace(base, variance_mode="varying", step_size=0.01),
        replace(base, variance_mode="varying", step_size=0.05),
    ]
