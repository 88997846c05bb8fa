import math

import pytest
from hypothesis import given, strategies as st

from coldtof.core import (
    DEFAULT_CONSTANTS, CloudSpec, CloudSpecInput, PhysicalConstants, SpecError, kappa, to_si,
)

from conftest import make_spec, without_hbar


def test_default_constants():
    c = DEFAULT_CONSTANTS
    assert (c.hbar, c.k_boltzmann, c.amu, c.g_default) == (1.054571817e-34, 1.380649e-23, 1.66053906660e-27, 9.8)


@pytest.mark.parametrize("field", ["hbar", "k_boltzmann", "amu", "g_default"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_constants_must_be_positive(field, bad):
    with pytest.raises(SpecError):
        PhysicalConstants(**{field: bad})


def test_to_si_rubidium():
    spec = to_si(CloudSpecInput(85.4678, 2.5e-6, 1e-5, -30.0))
    # 85.4678 * 1.66053906660 = 141.922620836...
    assert spec.mass == pytest.approx(1.41922620836e-25, rel=1e-10)
    assert spec.temperature == 2.5e-6
    assert spec.sigma0 == pytest.approx(1e-7, rel=1e-15)
    assert spec.detector_z == pytest.approx(-0.30, rel=1e-15)
    assert spec.g == 9.8


def test_to_si_unit_definitions():
    spec = to_si(CloudSpecInput(1.0, 1.0, 1.0, -1.0))
    assert (spec.mass, spec.temperature, spec.sigma0, spec.detector_z) == (1.66053906660e-27, 1.0, 0.01, -0.01)


@pytest.mark.parametrize("kwargs", [
    dict(detector_z_cm=30.0),
    dict(detector_z_cm=0.0),
    dict(mass_amu=0.0),
    dict(mass_amu=-1.0),
    dict(temperature=0.0),
    dict(sigma0_cm=-1e-5),
    dict(temperature=math.nan),
    dict(mass_amu=math.inf),
    dict(g=0.0),
    dict(g=-9.8),
])
def test_to_si_rejects(kwargs):
    base = dict(mass_amu=85.4678, temperature=2.5e-6, sigma0_cm=1e-5, detector_z_cm=-30.0)
    base.update(kwargs)
    with pytest.raises(SpecError):
        to_si(CloudSpecInput(**base))


def test_g_defaults_to_constants():
    consts = PhysicalConstants(g_default=9.81)
    assert to_si(CloudSpecInput(1, 1, 1, -1), consts).g == 9.81


@given(
    mass=st.floats(0.5, 500),
    temperature=st.floats(1e-12, 1e-2),
    sigma0=st.floats(1e-9, 1e-1),
    z=st.floats(-1e3, -1e-3),
)
def test_round_trip_input_units(mass, temperature, sigma0, z):
    inp = CloudSpecInput(mass, temperature, sigma0, z, 9.8)
    back = to_si(inp).to_input()
    for name in ("mass_amu", "temperature", "sigma0_cm", "detector_z_cm", "g"):
        assert getattr(back, name) == pytest.approx(getattr(inp, name), rel=1e-12)


def test_kappa_addends_rubidium(rb):
    # hand evaluation: kT/m = 1.380649e-23 * 2.5e-6 / 1.419226e-25 = 2.4320e-4
    # hbar / (2 m sigma0) = 1.054572e-34 / (2 * 1.419226e-25 * 1e-7) = 3.7153e-3, squared 1.3804e-5
    assert rb.velocity_variance == pytest.approx(2.4320e-4, rel=1e-4)
    assert kappa(rb) - rb.velocity_variance == pytest.approx(1.3804e-5, rel=1e-3)
    assert kappa(rb) == pytest.approx(2.4320e-4 + 1.3804e-5, rel=1e-4)


def test_kappa_limits(rb):
    assert kappa(without_hbar(rb)) == pytest.approx(rb.velocity_variance, rel=1e-15)
    cold = CloudSpec(rb.mass, 1e-300, rb.sigma0, rb.detector_z)
    assert kappa(cold) == pytest.approx((rb.consts.hbar / (2 * rb.mass * rb.sigma0)) ** 2, rel=1e-12)


@given(st.lists(st.floats(1.0, 300.0), min_size=3, max_size=3, unique=True))
def test_kappa_decreases_with_mass(masses):
    masses = sorted(masses)
    values = [kappa(make_spec(m)) for m in masses]
    assert values[0] > values[1] > values[2]


def test_free_fall_time(rb):
    assert rb.free_fall_time == pytest.approx(0.247436, abs=1e-6)
    assert rb.drop == pytest.approx(0.30)


def test_zero_gravity_allowed_but_no_fall_time(rb):
    import dataclasses
    flat = dataclasses.replace(rb, g=0.0)
    with pytest.raises(SpecError):
        flat.free_fall_time
