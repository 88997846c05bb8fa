"""Thermal mixture of falling packets and the quantum arrival-time density.

Averaging the pure-state current over Maxwell-Boltzmann group velocities
and then taking the modulus gives the quantum TOF density. Two closed forms
are available:

``CurrentVariant.DERIVED``
    P_T(z,t) |(z + g t^2/2) kappa t / sigma_T^2 - g t|. This is what the
    Gaussian velocity average of the pure current actually evaluates to, and
    it agrees with :func:`thermal_current_quadrature`.
``CurrentVariant.PAPER_LITERAL``
    The same bracket without the ``- g t`` drift. It vanishes at
    the free-fall time and is kept for comparison only.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .core import CloudSpec, OracleError, IntegrationError, kappa
from . import packet
from .quadrature import integrate


class CurrentVariant(str, enum.Enum):
    DERIVED = "derived"
    PAPER_LITERAL = "paper"

    @classmethod
    def parse(cls, value) -> "CurrentVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown current variant {value!r}; use 'derived' or 'paper'") from None


def thermal_width(t, spec: CloudSpec):
    """sigma_T(t) = sqrt(sigma0^2 + kappa t^2)."""
    t = np.asarray(t, dtype=float)
    return np.sqrt(spec.sigma0**2 + kappa(spec) * t * t)


def thermal_position_pdf(z, t, spec: CloudSpec):
    """Velocity-averaged position density, centred on the free-fall path z = -g t^2/2."""
    t = np.asarray(t, dtype=float)
    s2 = thermal_width(t, spec) ** 2
    u = np.asarray(z, dtype=float) + 0.5 * spec.g * t * t
    return np.exp(-u * u / (2.0 * s2)) / np.sqrt(2.0 * np.pi * s2)


def thermal_current(z, t, spec: CloudSpec, variant=CurrentVariant.DERIVED):
    """Signed, velocity-averaged current at height ``z`` (before the modulus)."""
    variant = CurrentVariant.parse(variant)
    t = np.asarray(t, dtype=float)
    s2 = thermal_width(t, spec) ** 2
    u = np.asarray(z, dtype=float) + 0.5 * spec.g * t * t
    bracket = u * kappa(spec) * t / s2
    if variant is CurrentVariant.DERIVED:
        bracket = bracket - spec.g * t
    return thermal_position_pdf(z, t, spec) * bracket


def quantum_tof_pdf(t, spec: CloudSpec, variant=CurrentVariant.DERIVED):
    """Quantum arrival-time density |<J>_T| at the detector (1/s)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(under="ignore"):
        out = np.abs(thermal_current(spec.detector_z, np.maximum(t, 0.0), spec, variant))
    return np.where(t > 0, out, 0.0)


def thermal_current_quadrature(z: float, t: float, spec: CloudSpec, tol_rel: float = 1e-12) -> float:
    """Numerically average the pure-state current over group velocity.

    Integrates mb_pdf(v) * J(z, t; v) over a window of +-12 combined standard
    deviations sqrt(kT/m + sigma^2/t^2) around the velocity that dominates
    the integrand. Independent of the closed forms above; only
    :mod:`coldtof.packet` and the Maxwell-Boltzmann density are used.
    """
    # local import: classical imports stats, which imports this module
    from .classical import mb_pdf

    if not t > 0:
        raise ValueError("thermal_current_quadrature needs t > 0")
    var_v = spec.velocity_variance
    sigma = float(packet.packet_width(t, spec))
    u = z + 0.5 * spec.g * t * t
    # the integrand is a Gaussian in v centred where the MB weight and the
    # packet density (centred at v = u/t, width sigma/t) balance
    centre = var_v * t * u / (sigma * sigma + var_v * t * t)
    narrow = math.sqrt(var_v) * sigma / math.sqrt(sigma * sigma + var_v * t * t)
    half = 12.0 * math.sqrt(var_v + (sigma / t) ** 2)
    pts = [centre + k * narrow for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]

    def integrand(v):
        return float(mb_pdf(v, spec) * packet.current(z, t, v, spec))

    # absolute floor on the scale of the answer so zero-valued cases converge
    peak = math.exp(-u * u / (2.0 * (sigma * sigma + var_v * t * t))) / math.sqrt(
        2.0 * math.pi * (sigma * sigma + var_v * t * t))
    floor = 1e-14 * peak * (math.sqrt(var_v) + abs(u) / t + spec.g * t + sigma / t)
    try:
        return integrate(integrand, centre - half, centre + half, tol_rel=tol_rel,
                         tol_abs=max(floor, 1e-300), points=pts)
    except IntegrationError as exc:
        raise OracleError(f"thermal current quadrature failed at z={z!r}, t={t!r}: {exc}") from exc


def variant_discrepancy(spec: CloudSpec, times) -> dict:
    """Compare both closed forms against the quadrature oracle on ``times``.

    Returns max |closed - |oracle|| / max |oracle| per variant, evaluated
    where |oracle| exceeds 1e-12 of its maximum; also the worst pointwise
    relative error there.
    """
    times = np.asarray(times, dtype=float)
    oracle = np.abs([thermal_current_quadrature(spec.detector_z, t, spec) for t in times])
    top = oracle.max()
    mask = oracle > 1e-12 * top
    report = {"n_points": int(times.size), "n_compared": int(mask.sum())}
    for variant in CurrentVariant:
        closed = quantum_tof_pdf(times, spec, variant)
        diff = np.abs(closed - oracle)
        report[variant.value] = {
            "max_deviation_over_max": float(diff[mask].max() / top),
            "max_pointwise_relative": float((diff[mask] / oracle[mask]).max()),
        }
    return report
