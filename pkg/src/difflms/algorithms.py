"""Diffusion LMS strategies: one network iteration and full trajectories.

Four strategies over per-node estimates of a common parameter vector:

* ``nocoop`` -- every node runs an independent LMS update.
* ``atc``    -- adapt-then-combine: local LMS step, then a weighted
  neighborhood average of the adapted estimates.
* ``cta``    -- combine-then-adapt: neighborhood average first, then the
  local LMS step on the combined estimate.
* ``silms``  -- serial-scheduled LMS: nodes update one after another inside
  an iteration; each node pre-combines the freshest available neighbor
  estimates (already-updated neighbors contribute their new values), adapts,
  and a final neighborhood combination closes the iteration.

All state arrays have shape (..., N, M): arbitrary leading batch axes, one
row per node, one column per filter tap. Reductions use ``np.einsum`` so the
result of any run is bit-identical whether it is executed alone or inside a
batch.
"""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

import numpy as np

from .combiners import CombinationMatrix, validate
from .graph import Graph
from .signal_model import InputProfile, NoiseProfile, draw_samples, node_stream

ERROR_METRICS = ("a_priori", "a_posteriori")


class Algorithm(str, enum.Enum):
    NOCOOP = "nocoop"
    ATC = "atc"
    CTA = "cta"
    SILMS = "silms"


def as_algorithm(value) -> Algorithm:
    if isinstance(value, Algorithm):
        return value
    try:
        return Algorithm(str(value).lower())
    except ValueError:
        names = ", ".join(a.value for a in Algorithm)
        raise ValueError(f"unknown algorithm {value!r}; valid algorithms: {names}") from None


@dataclass(frozen=True)
class Schedule:
    """Node update order for the serial sweep."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(k) for k in self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"schedule {order} is not a permutation of 0..{len(order) - 1}")

    @classmethod
    def ascending(cls, n: int) -> "Schedule":
        return cls(order=tuple(range(n)))

    def positions(self) -> np.ndarray:
        """positions()[node] = rank of the node within the sweep."""
        pos = np.empty(len(self.order), dtype=np.intp)
        for rank, node in enumerate(self.order):
            pos[node] = rank
        return pos

    def reversed(self) -> "Schedule":
        return Schedule(order=self.order[::-1])


def lms_adapt(weights, regressor, observation, mu):
    """One LMS update: w + mu * x * conj(d - w^H x).

    ``weights`` and ``regressor`` share shape (..., M); ``observation`` has
    the matching (...) shape (or is scalar); ``mu`` is a nonnegative scalar
    or anything broadcastable against the update term. Pure function.
    """
    w = np.asarray(weights)
    x = np.asarray(regressor)
    if w.shape != x.shape:
        raise ValueError(f"weights shape {w.shape} != regressor shape {x.shape}")
    err = observation - np.einsum("...m,...m->...", np.conj(w), x)
    return w + mu * x * np.conj(err)[..., None]


def combine(estimates) -> np.ndarray:
    """Convex combination of (vector, weight) pairs; weights must sum to 1."""
    if not estimates:
        raise ValueError("no estimates to combine")
    vectors = [np.asarray(v) for v, _ in estimates]
    shape = vectors[0].shape
    if any(v.shape != shape for v in vectors):
        raise ValueError("estimates differ in shape")
    total = sum(float(w) for _, w in estimates)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"weights sum to {total}, expected 1")
    out = np.zeros(shape, dtype=complex)
    for v, w in zip(vectors, (w for _, w in estimates)):
        out += w * v
    return out


def diffuse(weights: np.ndarray, estimates: np.ndarray) -> np.ndarray:
    """Network-wide combination step: out[k] = sum_l weights[k, l] * estimates[l]."""
    return np.einsum("kl,...lm->...km", weights, estimates)


def _check_iteration_args(omega, x, d) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    omega = np.asarray(omega, dtype=complex)
    x = np.asarray(x, dtype=complex)
    d = np.asarray(d, dtype=complex)
    if omega.ndim < 2:
        raise ValueError("states must have shape (..., n_nodes, filter_length)")
    if x.shape != omega.shape:
        raise ValueError(f"regressor shape {x.shape} != state shape {omega.shape}")
    if d.shape != omega.shape[:-1]:
        raise ValueError(f"observation shape {d.shape} incompatible with states {omega.shape}")
    return omega, x, d


def _check_combiner(c: CombinationMatrix, n: int, label: str) -> np.ndarray:
    w = np.asarray(c.weights, dtype=float)
    if w.shape != (n, n):
        raise ValueError(f"{label} combiner shape {w.shape} does not match {n} nodes")
    sums = w.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > 1e-9:
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise ValueError(f"{label} combiner row {bad} sums to {sums[bad]}, expected 1")
    return w


def _as_mu(mu, n: int) -> np.ndarray:
    arr = np.asarray(mu, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise ValueError(f"step sizes must be scalar or length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError("step sizes must be finite and >= 0")
    return arr


def nocoop_iteration(omega, x, d, mu):
    """Independent LMS at every node; no information exchange."""
    omega, x, d = _check_iteration_args(omega, x, d)
    mu_col = _as_mu(mu, omega.shape[-2])[:, None]
    return lms_adapt(omega, x, d, mu_col)


def atc_iteration(omega, x, d, c: CombinationMatrix, mu, return_intermediates: bool = False):
    """Adapt-then-combine iteration.

    Phase 1 adapts every node from its previous estimate (order-independent);
    phase 2 replaces each estimate with the weighted neighborhood average of
    the adapted values. Returns the new state array, plus the adapted
    intermediates when ``return_intermediates`` is set.
    """
    omega, x, d = _check_iteration_args(omega, x, d)
    n = omega.shape[-2]
    cw = _check_combiner(c, n, "c")
    mu_col = _as_mu(mu, n)[:, None]
    psi = lms_adapt(omega, x, d, mu_col)
    new = diffuse(cw, psi)
    return (new, psi) if return_intermediates else new


def cta_iteration(omega, x, d, c: CombinationMatrix, mu, return_intermediates: bool = False):
    """Combine-then-adapt iteration: neighborhood average first, local LMS second."""
    omega, x, d = _check_iteration_args(omega, x, d)
    n = omega.shape[-2]
    cw = _check_combiner(c, n, "c")
    mu_col = _as_mu(mu, n)[:, None]
    psi = diffuse(cw, omega)
    new = lms_adapt(psi, x, d, mu_col)
    return (new, psi) if return_intermediates else new


def _sweep_plan(c_weights: np.ndarray, schedule: Schedule):
    """Per-node index split for the serial sweep, in sweep order.

    For each node k (visited in schedule order) the nonzero entries of row k
    are split by sweep position: neighbors not yet updated this iteration
    (including k itself) contribute previous-iteration estimates, already
    updated neighbors contribute their fresh values.
    """
    pos = schedule.positions()
    plan = []
    for k in schedule.order:
        nz = np.flatnonzero(c_weights[k])
        old = nz[pos[nz] >= pos[k]]
        new = nz[pos[nz] < pos[k]]
        plan.append((k, old, c_weights[k, old].copy(), new, c_weights[k, new].copy()))
    return plan


def _si_sweep(plan, omega, x, d, mu, phi, psi_out=None) -> None:
    """Serial pre-combine + adapt; fills ``phi`` (and ``psi_out``) in place."""
    for k, old, w_old, new, w_new in plan:
        psi_k = np.einsum("l,...lm->...m", w_old, omega[..., old, :])
        if new.size:
            psi_k = psi_k + np.einsum("l,...lm->...m", w_new, phi[..., new, :])
        if psi_out is not None:
            psi_out[..., k, :] = psi_k
        phi[..., k, :] = lms_adapt(psi_k, x[..., k, :], d[..., k], mu[k])


def si_lms_iteration(omega, x, d, c: CombinationMatrix, a: CombinationMatrix | None,
                     mu, schedule: Schedule | None = None,
                     return_intermediates: bool = False):
    """Serial-scheduled LMS iteration.

    Sweeping the nodes in schedule order, node k first combines previous
    estimates of itself and not-yet-updated neighbors (weights ``c``) with
    the fresh values of already-updated neighbors, then runs its LMS step on
    the combined estimate. When the sweep completes, every node replaces its
    state with the ``a``-weighted neighborhood average of the fresh values.
    With ``c`` = identity this reduces exactly (bit for bit) to
    :func:`atc_iteration` with combiner ``a``. Defaults: ``a = c``,
    ascending schedule.
    """
    omega, x, d = _check_iteration_args(omega, x, d)
    n = omega.shape[-2]
    cw = _check_combiner(c, n, "c")
    aw = _check_combiner(a if a is not None else c, n, "a")
    mu_arr = _as_mu(mu, n)
    if schedule is None:
        schedule = Schedule.ascending(n)
    if len(schedule.order) != n:
        raise ValueError(f"schedule covers {len(schedule.order)} nodes, expected {n}")
    plan = _sweep_plan(cw, schedule)
    phi = np.empty_like(omega)
    psi = np.empty_like(omega) if return_intermediates else None
    _si_sweep(plan, omega, x, d, mu_arr, phi, psi)
    new = diffuse(aw, phi)
    return (new, psi, phi) if return_intermediates else new


@dataclass
class TrajectoryBatch:
    """Per-run learning curves for a batch of Monte Carlo runs.

    ``mse`` and ``msd`` have shape (n_runs, n_iterations); ``states`` is the
    (n_runs, n_iterations, N, M) estimate history when recorded;
    ``sample_checksums`` holds one hex digest of each run's sample stream
    when collected.
    """

    mse: np.ndarray
    msd: np.ndarray
    states: np.ndarray | None = None
    sample_checksums: tuple[str, ...] | None = None


@dataclass
class Trajectory:
    """Single-run history: states (n_iterations, N, M) and error curves."""

    states: np.ndarray
    mse: np.ndarray
    msd: np.ndarray
    sample_checksum: str


def run_trajectories(algorithm, graph: Graph, c: CombinationMatrix | None,
                     a: CombinationMatrix | None, mu, omega0,
                     input_profile: InputProfile, noise_profile: NoiseProfile,
                     n_iterations: int, run_seeds, schedule: Schedule | None = None,
                     error_metric: str = "a_priori", record_states: bool = False,
                     collect_checksums: bool = False, real_valued: bool = False,
                     block_size: int = 256) -> TrajectoryBatch:
    """Run one algorithm over a batch of independently seeded Monte Carlo runs.

    Every run starts from all-zero estimates and consumes its own per-node
    sample substreams derived from the run seed, so results are deterministic
    per seed, independent of batch composition, and identical data is
    presented to any algorithm launched with the same seeds. Per iteration
    the network MSE (mean over nodes of the squared a-priori error, i.e.
    using the pre-update estimates; a-posteriori optionally) and the network
    MSD (mean over nodes of the squared deviation of the post-update
    estimates from the true parameter) are recorded.
    """
    algorithm = as_algorithm(algorithm)
    if n_iterations < 1:
        raise ValueError(f"n_iterations must be >= 1, got {n_iterations}")
    if error_metric not in ERROR_METRICS:
        raise ValueError(f"unknown error metric {error_metric!r}; expected one of {ERROR_METRICS}")
    n = graph.n_nodes
    omega0 = np.asarray(omega0, dtype=complex)
    if omega0.ndim != 1 or omega0.size < 1:
        raise ValueError("omega0 must be a 1-D vector")
    if input_profile.variances.size != n or noise_profile.variances.size != n:
        raise ValueError(f"variance profiles must have length {n}")
    mu_arr = _as_mu(mu, n)
    mu_col = mu_arr[:, None]
    run_seeds = [int(s) for s in run_seeds]
    if not run_seeds:
        raise ValueError("run_seeds must be non-empty")

    needs_c = algorithm in (Algorithm.ATC, Algorithm.CTA, Algorithm.SILMS)
    cw = aw = None
    if needs_c:
        if c is None:
            raise ValueError(f"{algorithm.value} requires a combination matrix")
        bad = validate(c, graph)
        if bad is not None:
            raise ValueError(f"combiner c invalid: {bad}")
        cw = np.asarray(c.weights, dtype=float)
    if algorithm is Algorithm.SILMS:
        a_eff = a if a is not None else c
        bad = validate(a_eff, graph)
        if bad is not None:
            raise ValueError(f"combiner a invalid: {bad}")
        aw = np.asarray(a_eff.weights, dtype=float)
    if schedule is None:
        schedule = Schedule.ascending(n)
    if len(schedule.order) != n:
        raise ValueError(f"schedule covers {len(schedule.order)} nodes, expected {n}")

    if algorithm is Algorithm.NOCOOP:
        def step(omega, x, d):
            return lms_adapt(omega, x, d, mu_col)
    elif algorithm is Algorithm.ATC:
        def step(omega, x, d):
            return diffuse(cw, lms_adapt(omega, x, d, mu_col))
    elif algorithm is Algorithm.CTA:
        def step(omega, x, d):
            return lms_adapt(diffuse(cw, omega), x, d, mu_col)
    else:
        plan = _sweep_plan(cw, schedule)

        def step(omega, x, d):
            phi = np.empty_like(omega)
            _si_sweep(plan, omega, x, d, mu_arr, phi)
            return diffuse(aw, phi)

    n_runs = len(run_seeds)
    m_len = omega0.size
    streams = [[node_stream(seed, k) for k in range(n)] for seed in run_seeds]
    hashers = [hashlib.blake2b(digest_size=16) for _ in run_seeds] if collect_checksums else None

    omega = np.zeros((n_runs, n, m_len), dtype=complex)
    mse = np.empty((n_runs, n_iterations))
    msd = np.empty((n_runs, n_iterations))
    states = np.empty((n_runs, n_iterations, n, m_len), dtype=complex) if record_states else None

    block_size = min(block_size, n_iterations)
    x_block = np.empty((n_runs, block_size, n, m_len), dtype=complex)
    d_block = np.empty((n_runs, block_size, n), dtype=complex)
    for t0 in range(0, n_iterations, block_size):
        b = min(block_size, n_iterations - t0)
        xs = x_block[:, :b]
        ds = d_block[:, :b]
        for r in range(n_runs):
            for k in range(n):
                xk, dk = draw_samples(k, omega0, input_profile, noise_profile,
                                      streams[r][k], b, real_valued)
                xs[r, :, k, :] = xk
                ds[r, :, k] = dk
            if hashers is not None:
                hashers[r].update(np.ascontiguousarray(xs[r]).tobytes())
                hashers[r].update(np.ascontiguousarray(ds[r]).tobytes())
        for i in range(b):
            t = t0 + i
            x = xs[:, i]
            d = ds[:, i]
            if error_metric == "a_priori":
                err = d - np.einsum("...nm,...nm->...n", np.conj(omega), x)
                mse[:, t] = np.mean(np.abs(err) ** 2, axis=-1)
            omega = step(omega, x, d)
            if error_metric == "a_posteriori":
                err = d - np.einsum("...nm,...nm->...n", np.conj(omega), x)
                mse[:, t] = np.mean(np.abs(err) ** 2, axis=-1)
            msd[:, t] = np.mean(np.sum(np.abs(omega - omega0) ** 2, axis=-1), axis=-1)
            if states is not None:
                states[:, t] = omega

    checksums = tuple(h.hexdigest() for h in hashers) if hashers is not None else None
    return TrajectoryBatch(mse=mse, msd=msd, states=states, sample_checksums=checksums)


def run_trajectory(algorithm, graph: Graph, c: CombinationMatrix | None,
                   a: CombinationMatrix | None, mu, omega0,
                   input_profile: InputProfile, noise_profile: NoiseProfile,
                   n_iterations: int, rng_seed: int, schedule: Schedule | None = None,
                   error_metric: str = "a_priori", real_valued: bool = False) -> Trajectory:
    """Single seeded run with full state history. See :func:`run_trajectories`."""
    batch = run_trajectories(algorithm, graph, c, a, mu, omega0, input_profile,
                             noise_profile, n_iterations, [rng_seed], schedule=schedule,
                             error_metric=error_metric, record_states=True,
                             collect_checksums=True, real_valued=real_valued)
    assert batch.states is not None and batch.sample_checksums is not None
    return Trajectory(states=batch.states[0], mse=batch.mse[0], msd=batch.msd[0],
                      sample_checksum=batch.sample_checksums[0])
