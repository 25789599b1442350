"""Learning-curve aggregation and per-iteration cost accounting.

Curves average squared errors across Monte Carlo runs in the linear domain
before converting to dB. Exact zeros are clamped to the -320 dB floor so
noiseless runs stay plottable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

DB_FLOOR = -320.0
_LINEAR_FLOOR = 10.0 ** (DB_FLOOR / 10.0)


@dataclass(frozen=True)
class LearningCurve:
    """Run-averaged network MSE and MSD per iteration, in dB."""

    mse_db: np.ndarray
    msd_db: np.ndarray
    n_runs: int


@dataclass(frozen=True)
class CostReport:
    """Per-iteration arithmetic and traffic beyond the adapt-then-combine baseline."""

    extra_multiplications: int
    extra_additions: int
    extra_transmissions: int


def to_db(linear) -> np.ndarray:
    """10*log10 with the floor clamp applied."""
    arr = np.asarray(linear, dtype=float)
    return 10.0 * np.log10(np.maximum(arr, _LINEAR_FLOOR))


def from_db(db) -> np.ndarray:
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def average_curves(mse_runs, msd_runs) -> LearningCurve:
    """Average per-run squared-error series into one curve.

    Both inputs are (n_runs, n_iterations) arrays (or lists of equal-length
    series). The mean is taken across runs in the linear domain, then
    converted to dB.
    """
    mse = np.asarray(mse_runs, dtype=float)
    msd = np.asarray(msd_runs, dtype=float)
    if mse.size == 0 or msd.size == 0:
        raise ValueError("no runs to average")
    if mse.ndim == 1:
        mse = mse[None, :]
    if msd.ndim == 1:
        msd = msd[None, :]
    if mse.ndim != 2 or msd.ndim != 2:
        raise ValueError("run series must be 1-D or 2-D")
    if mse.shape != msd.shape:
        raise ValueError(f"mse runs shape {mse.shape} != msd runs shape {msd.shape}")
    return LearningCurve(mse_db=to_db(mse.mean(axis=0)),
                         msd_db=to_db(msd.mean(axis=0)),
                         n_runs=mse.shape[0])


def iterations_to_threshold(curve: LearningCurve, threshold_db: float) -> int | None:
    """Smallest iteration index whose MSD is at or below the threshold.

    Returns ``None`` when the curve never reaches it.
    """
    hits = np.nonzero(curve.msd_db <= threshold_db)[0]
    return int(hits[0]) if hits.size else None


def steady_state_mse_db(curve: LearningCurve, fraction: float = 0.1) -> float:
    """Mean MSE (linear domain) over the final ``fraction`` of iterations, in dB."""
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    tail = max(1, int(round(curve.mse_db.size * fraction)))
    return float(to_db(from_db(curve.mse_db[-tail:]).mean()))


def cost_report(algorithm, graph: Graph, m: int) -> CostReport:
    """Per-iteration extras of an algorithm relative to adapt-then-combine.

    The serial schedule adds one weighted sum over each node's neighborhood
    ahead of the adaptation (M entries, one multiply-add per member) and
    requires each freshly adapted estimate to be pushed to the node's
    neighbors immediately: per node, |N_k| - 1 transmissions of an M x 1
    vector. Everything else matches the baseline, so all other algorithms
    report zero.
    """
    from .algorithms import Algorithm, as_algorithm  # cycle-free: runtime import

    if m < 1:
        raise ValueError(f"filter length must be >= 1, got {m}")
    algorithm = as_algorithm(algorithm)
    if algorithm is not Algorithm.SILMS:
        return CostReport(0, 0, 0)
    total_members = sum(len(members) for members in graph.members)
    return CostReport(extra_multiplications=m * total_members,
                      extra_additions=m * total_members,
                      extra_transmissions=total_members - graph.n_nodes)


def curve_to_csv(curve: LearningCurve) -> str:
    """CSV with header ``iteration,mse_db,msd_db``, one row per iteration."""
    lines = ["iteration,mse_db,msd_db"]
    for i, (mse, msd) in enumerate(zip(curve.mse_db, curve.msd_db)):
        lines.append(f"{i},{float(mse)!r},{float(msd)!r}")
    return "\n".join(lines) + "\n"


def parse_curve_csv(text: str) -> LearningCurve:
    """Inverse of :func:`curve_to_csv` (n_runs is not stored; reported as 1)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "iteration,mse_db,msd_db":
        raise ValueError("not a learning-curve CSV")
    mse, msd = [], []
    for ln in lines[1:]:
        _, a, b = ln.split(",")
        mse.append(float(a))
        msd.append(float(b))
    return LearningCurve(mse_db=np.array(mse), msd_db=np.array(msd), n_runs=1)


def cost_report_text(report: CostReport) -> str:
    return ("extra_multiplications={0}\n"
            "extra_additions={1}\n"
            "extra_transmissions={2}\n").format(report.extra_multiplications,
                                                report.extra_additions,
                                                report.extra_transmissions)
