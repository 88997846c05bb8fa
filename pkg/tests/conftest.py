import dataclasses

import pytest

from coldtof.core import CloudSpecInput, PhysicalConstants, to_si

RB_AMU = 85.4678
LI_AMU = 6.941
NA_AMU = 22.99
BE_AMU = 9.01


def make_spec(mass_amu=RB_AMU, temperature=2.5e-6, sigma0_cm=1e-5, detector_z_cm=-30.0, g=9.8, consts=None):
    inp = CloudSpecInput(mass_amu, temperature, sigma0_cm, detector_z_cm, g)
    return to_si(inp) if consts is None else to_si(inp, consts)


def without_hbar(spec, hbar=1e-60):
    return dataclasses.replace(spec, consts=dataclasses.replace(spec.consts, hbar=hbar))


@pytest.fixture
def rb():
    """Rb cloud of the first figure: 2.5 uK, sigma0 = 1e-7 m, detector 30 cm below."""
    return make_spec()


@pytest.fixture
def li():
    return make_spec(LI_AMU)


@pytest.fixture
def na():
    return make_spec(NA_AMU)


@pytest.fixture
def tiny_hbar():
    return PhysicalConstants(hbar=1e-60)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], rep.duration))
    if lines:
        terminalreporter.section("acceptance criteria")
        for title, status, duration in sorted(lines, key=lambda x: int(x[0].split(".")[0])):
            terminalreporter.write_line(f"{status:4s}  {title}  ({duration:.2f} s)")
