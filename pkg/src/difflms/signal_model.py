"""Data model: unknown parameter vector, per-node variance profiles and
seeded (regressor, observation) streams.

Observations follow d = w0^H x + n with white complex circular Gaussian
regressors and noise. Each node draws from its own substream, derived from a
run seed by counter-based splitting, so sample sequences are reproducible and
independent of the order in which nodes are queried. Block draws consume a
stream exactly like repeated single draws.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EQUAL_INPUT_VARIANCE = 1.0
EQUAL_NOISE_VARIANCE = 0.01
VARYING_INPUT_RANGE = (0.5, 2.0)
VARYING_NOISE_RANGE = (0.005, 0.05)

VARIANCE_MODES = ("equal", "varying")


def _positive_variances(values, label: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{label} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{label} must be finite and > 0")
    return arr


@dataclass(frozen=True)
class InputProfile:
    """Per-node regressor power sigma2_x."""

    variances: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "variances", _positive_variances(self.variances, "input variances"))


@dataclass(frozen=True)
class NoiseProfile:
    """Per-node observation-noise variance sigma2_v."""

    variances: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "variances", _positive_variances(self.variances, "noise variances"))


@dataclass(frozen=True)
class Sample:
    """One (regressor, observation) pair for one node at one time index."""

    node: int
    regressor: np.ndarray
    observation: complex


def random_parameter(m: int, rng_seed: int, real_valued: bool = False) -> np.ndarray:
    """Unit-norm length-``m`` parameter vector, i.i.d. circular Gaussian
    entries before normalization. Deterministic per seed."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    gen = np.random.default_rng(np.random.SeedSequence(rng_seed))
    vals = gen.standard_normal((m, 2))
    if real_valued:
        v = vals[:, 0].astype(complex)
    else:
        v = vals[:, 0] + 1j * vals[:, 1]
    return v / np.linalg.norm(v)


def variance_profiles(n: int, mode: str, rng_seed: int) -> tuple[InputProfile, NoiseProfile]:
    """Per-node variance profiles.

    ``equal``: sigma2_x = 1 and sigma2_v = 0.01 at every node.
    ``varying``: sigma2_x uniform in [0.5, 2.0] and sigma2_v uniform in
    [0.005, 0.05], drawn deterministically from the seed (inputs first).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if mode == "equal":
        return (InputProfile(np.full(n, EQUAL_INPUT_VARIANCE)),
                NoiseProfile(np.full(n, EQUAL_NOISE_VARIANCE)))
    if mode == "varying":
        gen = np.random.default_rng(np.random.SeedSequence(rng_seed))
        sx = gen.uniform(*VARYING_INPUT_RANGE, size=n)
        sv = gen.uniform(*VARYING_NOISE_RANGE, size=n)
        return InputProfile(sx), NoiseProfile(sv)
    raise ValueError(f"unknown variance mode {mode!r}; expected one of {VARIANCE_MODES}")


def node_stream(rng_seed: int, node: int) -> np.random.Generator:
    """Independent per-node generator split off a run seed."""
    return np.random.default_rng(np.random.SeedSequence(rng_seed, spawn_key=(node,)))


def draw_samples(node: int, omega0: np.ndarray, input_profile: InputProfile,
                 noise_profile: NoiseProfile, rng: np.random.Generator,
                 count: int, real_valued: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` consecutive samples for one node.

    Returns ``(x, d)`` with ``x`` of shape (count, M) and ``d`` of shape
    (count,), where d = w0^H x + n exactly. The underlying Gaussian values
    are consumed sample-by-sample, so splitting one call into several yields
    the identical sequence.
    """
    n = input_profile.variances.size
    if noise_profile.variances.size != n:
        raise ValueError("input and noise profiles differ in length")
    if not (0 <= node < n):
        raise IndexError(f"node {node} out of range for {n} nodes")
    omega0 = np.asarray(omega0)
    m = omega0.size
    sx = input_profile.variances[node]
    sv = noise_profile.variances[node]
    vals = rng.standard_normal((count, 2 * m + 2))
    if real_valued:
        x = (vals[:, :m] * np.sqrt(sx)).astype(complex)
        noise = (vals[:, 2 * m] * np.sqrt(sv)).astype(complex)
    else:
        x = (vals[:, :m] + 1j * vals[:, m:2 * m]) * np.sqrt(sx / 2.0)
        noise = (vals[:, 2 * m] + 1j * vals[:, 2 * m + 1]) * np.sqrt(sv / 2.0)
    d = np.einsum("bm,m->b", x, np.conj(omega0)) + noise
    return x, d


def draw_sample(node: int, omega0: np.ndarray, input_profile: InputProfile,
                noise_profile: NoiseProfile, rng: np.random.Generator,
                real_valued: bool = False) -> Sample:
    """Draw the next sample for one node from its stream."""
    x, d = draw_samples(node, omega0, input_profile, noise_profile, rng, 1, real_valued)
    return Sample(node=node, regressor=x[0], observation=complex(d[0]))


def profiles_to_csv(input_profile: InputProfile, noise_profile: NoiseProfile) -> str:
    """CSV with header ``node,sigma2_x,sigma2_v``."""
    if input_profile.variances.size != noise_profile.variances.size:
        raise ValueError("input and noise profiles differ in length")
    lines = ["node,sigma2_x,sigma2_v"]
    for k, (sx, sv) in enumerate(zip(input_profile.variances, noise_profile.variances)):
        lines.append(f"{k},{float(sx)!r},{float(sv)!r}")
    return "\n".join(lines) + "\n"
