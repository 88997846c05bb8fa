"""Arrival statistics: cutoff time, mean arrival times and distribution distances."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .core import CloudSpec, ConvergenceError, DegenerateScenarioError, kappa
from .quadrature import DEFAULT_ATOL, DEFAULT_RTOL, integrate
from .thermal import thermal_width

# Lower integration limit; every density here vanishes faster than any power at 0.
T_MIN = 1e-9
CUTOFF_SIGMAS = 6.0
CUTOFF_MAX_ITER = 200
CUTOFF_RTOL = 1e-12


@dataclass(frozen=True)
class CutoffSolution:
    tc: float
    sigma_tc: float
    iterations: int
    residual: float


def _cutoff_map(t: float, spec: CloudSpec) -> float:
    return math.sqrt(2.0 * (spec.drop + CUTOFF_SIGMAS * float(thermal_width(t, spec))) / spec.g)


def solve_cutoff(spec: CloudSpec, max_iter: int = CUTOFF_MAX_ITER) -> CutoffSolution:
    """Self-consistent cutoff tc = sqrt(2 (|Z| + 6 sigma_T(tc)) / g).

    Damped fixed-point iteration tc <- (tc + map(tc)) / 2 from the free-fall
    time; stops when |tc - map(tc)| <= 1e-12 tc.
    """
    tc = spec.free_fall_time
    for it in range(1, max_iter + 1):
        mapped = _cutoff_map(tc, spec)
        residual = abs(tc - mapped)
        if residual <= CUTOFF_RTOL * tc:
            return CutoffSolution(tc, float(thermal_width(tc, spec)), it, residual)
        tc = 0.5 * (tc + mapped)
    raise ConvergenceError(f"cutoff iteration did not converge in {max_iter} steps (last tc={tc!r})")


def breakpoints(spec: CloudSpec, a: float, b: float) -> list[float]:
    """Quadrature breakpoints around the free-fall time.

    Arrival densities are peaked at t* with widths of order sqrt(kT/m)/g
    (classical) and sqrt(kappa)/g (quantum); both sets of offsets are
    returned so that narrow peaks are never stepped over.
    """
    t_star = spec.free_fall_time
    widths = {math.sqrt(spec.velocity_variance) / spec.g, math.sqrt(kappa(spec)) / spec.g}
    pts = {t_star}
    for w in widths:
        for k in (1, 2, 4, 8, 16, 32):
            pts.update((t_star - k * w, t_star + k * w))
    return sorted(p for p in pts if a < p < b)


@dataclass(frozen=True)
class MeanArrival:
    tau: float
    numerator: float
    denominator: float
    t_min: float
    tc: float


def mean_arrival(
    dist_fn: Callable[[float], float],
    tc: float,
    t_min: float = T_MIN,
    points: Iterable[float] | None = None,
    tol_rel: float = DEFAULT_RTOL,
    tol_abs: float = DEFAULT_ATOL,
) -> MeanArrival:
    """Mean arrival time of ``dist_fn`` truncated to [t_min, tc]."""
    if not tc > 0:
        raise ValueError("tc must be > 0")
    points = list(points) if points is not None else None
    den = integrate(dist_fn, t_min, tc, tol_rel, tol_abs, points)
    if abs(den) < 1e-300:
        raise DegenerateScenarioError(f"arrival density integrates to {den!r} on [{t_min}, {tc}]")
    num = integrate(lambda t: t * dist_fn(t), t_min, tc, tol_rel, tol_abs, points)
    return MeanArrival(num / den, num, den, t_min, tc)


def l1_distance(
    f: Callable[[float], float],
    g: Callable[[float], float],
    a: float,
    b: float,
    points: Iterable[float] | None = None,
    tol_rel: float = DEFAULT_RTOL,
    tol_abs: float = DEFAULT_ATOL,
) -> float:
    return integrate(lambda t: abs(f(t) - g(t)), a, b, tol_rel, tol_abs, points)


def ks_statistic(samples, cdf_fn: Callable) -> float:
    """Kolmogorov-Smirnov sup distance between the empirical CDF of ``samples`` and ``cdf_fn``.

    ``samples`` is an :class:`~coldtof.classical.ArrivalSampleSet` or any
    array of values; ``cdf_fn`` must accept an array.
    """
    times = np.asarray(getattr(samples, "times", samples), dtype=float)
    if times.size == 0:
        raise ValueError("need at least one sample")
    return float(scipy.stats.kstest(times, cdf_fn).statistic)


@dataclass(frozen=True, eq=False)
class TofDistribution:
    """An arrival density sampled on a time grid.

    ``normalization`` is the adaptive integral of the density over the grid
    span, not a sum over the samples, so it does not depend on the grid size.
    """

    kind: str
    times: np.ndarray
    values: np.ndarray
    normalization: float
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DistanceReport:
    l1: float
    sup_relative: float
    t_min: float
    t_max: float
    n_points: int
