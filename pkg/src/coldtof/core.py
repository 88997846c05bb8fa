"""Physical constants, error types and the validated cloud scenario.

Everything downstream works in SI units. Lab-convenience units
(amu, cm) are only accepted through :class:`CloudSpecInput` / :func:`to_si`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class TofError(Exception):
    """Base class for all errors raised by coldtof."""


class SpecError(TofError, ValueError):
    """Invalid scenario parameters."""


class IntegrationError(TofError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ConvergenceError(TofError):
    """Fixed-point iteration exceeded its iteration cap."""


class DegenerateScenarioError(TofError):
    """A normalising integral vanished (underflow)."""


class OracleError(TofError):
    """A numerical oracle failed to produce a trustworthy value."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    k_boltzmann: float = 1.380649e-23  # J/K
    amu: float = 1.66053906660e-27  # kg
    g_default: float = 9.8  # m/s^2

    def __post_init__(self):
        for name in ("hbar", "k_boltzmann", "amu", "g_default"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise SpecError(f"{name} must be finite and > 0, got {value!r}")


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class CloudSpec:
    """A point-sized thermal cloud released at z=0 and detected at ``detector_z``.

    The z axis points up, so ``detector_z`` is negative and gravity
    accelerates the atoms towards it. ``g == 0`` is accepted so that the
    pure-packet kernels can be exercised without gravity; anything that needs
    a free-fall time rejects it.
    """

    mass: float
    temperature: float
    sigma0: float
    detector_z: float
    g: float = DEFAULT_CONSTANTS.g_default
    consts: PhysicalConstants = field(default=DEFAULT_CONSTANTS, repr=False)

    def __post_init__(self):
        for name in ("mass", "temperature", "sigma0", "detector_z", "g"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise SpecError(f"{name} must be finite, got {value!r}")
        for name in ("mass", "temperature", "sigma0"):
            if getattr(self, name) <= 0:
                raise SpecError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.detector_z >= 0:
            raise SpecError(
                f"detector_z must be below the release point (< 0), got {self.detector_z!r}"
            )
        if self.g < 0:
            raise SpecError(f"g must be >= 0, got {self.g!r}")

    @property
    def drop(self) -> float:
        """Fall distance |Z| in metres."""
        return -self.detector_z

    @property
    def velocity_variance(self) -> float:
        """kT/m in m^2/s^2."""
        return self.consts.k_boltzmann * self.temperature / self.mass

    @property
    def free_fall_time(self) -> float:
        """t* = sqrt(2|Z|/g), the arrival time of an atom released at rest."""
        if self.g <= 0:
            raise SpecError("free-fall time needs g > 0")
        return math.sqrt(2.0 * self.drop / self.g)

    def to_input(self) -> "CloudSpecInput":
        """Express this spec in the CLI units (amu, K, cm)."""
        return CloudSpecInput(
            mass_amu=self.mass / self.consts.amu,
            temperature=self.temperature,
            sigma0_cm=self.sigma0 * 100.0,
            detector_z_cm=self.detector_z * 100.0,
            g=self.g,
        )


@dataclass(frozen=True)
class CloudSpecInput:
    """Scenario in the units quoted by experimentalists: amu, kelvin, centimetres."""

    mass_amu: float
    temperature: float
    sigma0_cm: float
    detector_z_cm: float
    g: float | None = None


def to_si(spec_input: CloudSpecInput, consts: PhysicalConstants = DEFAULT_CONSTANTS) -> CloudSpec:
    g = consts.g_default if spec_input.g is None else spec_input.g
    if not (math.isfinite(g) and g > 0):
        raise SpecError(f"g must be finite and > 0, got {g!r}")
    return CloudSpec(
        mass=spec_input.mass_amu * consts.amu,
        temperature=spec_input.temperature,
        sigma0=spec_input.sigma0_cm / 100.0,
        detector_z=spec_input.detector_z_cm / 100.0,
        g=g,
        consts=consts,
    )


def kappa(spec: CloudSpec) -> float:
    """Squared-velocity scale kT/m + hbar^2/(4 m^2 sigma0^2).

    With it the thermal width obeys sigma_T^2(t) = sigma0^2 + kappa t^2.
    """
    quantum = spec.consts.hbar / (2.0 * spec.mass * spec.sigma0)
    return spec.velocity_variance + quantum * quantum
