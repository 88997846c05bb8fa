"""Classical (ballistic) time-of-flight analysis.

A Maxwell-Boltzmann velocity density is pushed through the ballistic map
v(t) = (z + g t^2 / 2) / t to give the arrival-time density at the
detector. :func:`sample_arrival_times` draws the same distribution by
direct simulation and is used as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .core import CloudSpec
from . import stats


def mb_pdf(v, spec: CloudSpec):
    """One-dimensional Maxwell-Boltzmann velocity density (s/m)."""
    var = spec.velocity_variance
    v = np.asarray(v, dtype=float)
    return np.exp(-v * v / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def flight_velocity(t, detector_z: float, g: float):
    """Launch velocity that makes a ballistic atom reach ``detector_z`` at time ``t``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("flight_velocity needs t > 0")
    return (detector_z + 0.5 * g * t * t) / t


def flight_velocity_rate(t, detector_z: float, g: float):
    """dv/dt of the ballistic map, (-z + g t^2/2) / t^2."""
    t = np.asarray(t, dtype=float)
    return (-detector_z + 0.5 * g * t * t) / (t * t)


def classical_tof_pdf(t, spec: CloudSpec):
    """Classical arrival-time density at the detector (1/s).

    Defined as 0 for t <= 0: exp(-m z^2 / 2kT t^2) beats the 1/t^2 factor.
    """
    t = np.asarray(t, dtype=float)
    pos = t > 0
    ts = np.where(pos, t, 1.0)
    z, g = spec.detector_z, spec.g
    with np.errstate(over="ignore", under="ignore"):
        v = (z + 0.5 * g * ts * ts) / ts
        rate = (-z + 0.5 * g * ts * ts) / (ts * ts)
        out = mb_pdf(v, spec) * rate
    return np.where(pos, out, 0.0)


def classical_tof_cdf(t, spec: CloudSpec):
    """P(arrival <= t). The ballistic map is monotone, so this is Phi(v(t) / sqrt(kT/m))."""
    t = np.asarray(t, dtype=float)
    pos = t > 0
    ts = np.where(pos, t, 1.0)
    v = (spec.detector_z + 0.5 * spec.g * ts * ts) / ts
    return np.where(pos, ndtr(v / math.sqrt(spec.velocity_variance)), 0.0)


def classical_mean_arrival(spec: CloudSpec, t_cut: float, **tol) -> float:
    """Mean of the classical arrival density truncated to (t_min, t_cut]."""
    if not t_cut > 0:
        raise ValueError("t_cut must be > 0")
    result = stats.mean_arrival(
        lambda t: float(classical_tof_pdf(t, spec)),
        t_cut,
        points=stats.breakpoints(spec, stats.T_MIN, t_cut),
        **tol,
    )
    return result.tau


@dataclass(frozen=True, eq=False)
class ArrivalSampleSet:
    seed: int
    times: np.ndarray
    task: int = 0

    def __len__(self):
        return len(self.times)


def rng_for(seed: int, task: int = 0) -> np.random.Generator:
    """PCG64 stream for (seed, task); tasks give independent, reproducible substreams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(task,))))


def arrival_time(v, spec: CloudSpec):
    """Positive root of z = v t - g t^2 / 2 for launch velocity ``v``.

    For v < 0 the equivalent form 2|z| / (sqrt(v^2 + 2g|z|) - v) avoids
    cancellation.
    """
    v = np.asarray(v, dtype=float)
    root = np.sqrt(v * v + 2.0 * spec.g * spec.drop)
    return np.where(v >= 0, (v + root) / spec.g, 2.0 * spec.drop / (root - v))


def sample_arrival_times(n: int, seed: int, spec: CloudSpec, task: int = 0) -> ArrivalSampleSet:
    """Monte-Carlo ballistic arrival times.

    Velocities are N(0, kT/m) draws from numpy's ziggurat normal sampler on a
    PCG64 stream seeded by ``SeedSequence(seed, spawn_key=(task,))``; each is
    mapped to its exact arrival time, so no rejection step is involved.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = rng_for(seed, task)
    v = rng.standard_normal(n) * math.sqrt(spec.velocity_variance)
    return ArrivalSampleSet(seed=seed, times=arrival_time(v, spec), task=task)
