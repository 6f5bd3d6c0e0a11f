import math

import pytest

from bandgap_delay import LayerStack, OperatingPoint, build_quarter_wave_stack

N_HIGH = 2.22
N_LOW = 1.41
DESIGN_NM = 692.0
PHOTON_NM = 702.0


@pytest.fixture(scope="session")
def mirror() -> LayerStack:
    """The standard 11-layer quarter-wave mirror, high-index outer layers."""
    return build_quarter_wave_stack(DESIGN_NM, N_HIGH, N_LOW, 11, "high")


@pytest.fixture(scope="session")
def unit_cell(mirror) -> LayerStack:
    return LayerStack(layers=mirror.layers[:2])


def point(wavelength=PHOTON_NM, angle_deg=0.0, pol="p") -> OperatingPoint:
    return OperatingPoint(wavelength, math.radians(angle_deg), pol)
