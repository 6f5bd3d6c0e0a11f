"""Tunneling-delay simulator for one-dimensional photonic bandgap mirrors.

Computes complex transmission of layered dielectric stacks at arbitrary
angle and polarization, the competing traversal-time predictions (group
delay, Larmor interaction time, semiclassical time), and the two-photon
coincidence-dip measurement that resolves them at sub-femtosecond scale.
"""

from .core import BACKEND
from .delays import (
    DelayReport,
    air_time,
    angle_scan,
    delay_report,
    group_delay,
    larmor_time,
    semiclassical_time,
    transverse_shift,
)
from .errors import (
    BandgapDelayError,
    ComputationError,
    DipExtractionError,
    OpaquePointError,
    OutsideGapError,
    ValidationError,
)
from .experiments import (
    EnsembleSummary,
    default_mirror,
    reproduce_figures,
    run_perturbation_ensemble,
)
from .hom import (
    DipTrace,
    NarrowbandCheck,
    PhotonPairSpectrum,
    barrier_arm_transfer,
    coincidence_rate,
    narrowband_check,
    tabulated_transfer,
    trace_dip,
)
from .stacks import (
    Layer,
    LayerStack,
    OperatingPoint,
    Polarization,
    air_reference,
    build_quarter_wave_stack,
    load_stack,
    perturb_thicknesses,
    save_stack,
    stack_from_dict,
    stack_to_dict,
)
from .transfer import (
    BlochResult,
    ScatteringAmplitudes,
    bloch_analysis,
    scattering,
    transmission_spectrum,
)
from .units import C_NM_PER_FS

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BandgapDelayError",
    "BlochResult",
    "C_NM_PER_FS",
    "ComputationError",
    "DelayReport",
    "DipExtractionError",
    "DipTrace",
    "EnsembleSummary",
    "Layer",
    "LayerStack",
    "NarrowbandCheck",
    "OpaquePointError",
    "OperatingPoint",
    "OutsideGapError",
    "PhotonPairSpectrum",
    "Polarization",
    "ScatteringAmplitudes",
    "ValidationError",
    "air_reference",
    "air_time",
    "angle_scan",
    "barrier_arm_transfer",
    "bloch_analysis",
    "build_quarter_wave_stack",
    "coincidence_rate",
    "default_mirror",
    "delay_report",
    "group_delay",
    "larmor_time",
    "load_stack",
    "narrowband_check",
    "perturb_thicknesses",
    "reproduce_figures",
    "run_perturbation_ensemble",
    "save_stack",
    "scattering",
    "semiclassical_time",
    "stack_from_dict",
    "stack_to_dict",
    "tabulated_transfer",
    "trace_dip",
    "transmission_spectrum",
    "transverse_shift",
]
