"""Complex transmission/reflection of a stack at any operating point, plus
Bloch analysis of periodic unit cells.

The field conventions live in ``_core_py`` (both kernels implement them).
One consequence worth restating: the transmission amplitude includes the
propagation phase across the stack's physical thickness, and the empty
air-reference stack of length L behaves as an equally thick slab of the
incident medium, i.e. phi_T = k0 * L * cos(theta) in air.  Relative delays
against the air reference are then pure subtractions.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import ValidationError
from .stacks import LayerStack, OperatingPoint, Polarization

# Recursive sweep refinement for phase unwrapping stops once the step is
# this small (nm); a jump still exceeding the trigger there is flagged by
# raising.
UNWRAP_FLOOR_NM = 1.0e-6
_UNWRAP_TRIGGER = math.pi / 2


def _pol_code(pol: Polarization) -> int:
    return core.POL_P if Polarization.parse(pol) is Polarization.P else core.POL_S


def _effective_arrays(stack: LayerStack) -> tuple[np.ndarray, np.ndarray]:
    """Layer arrays fed to the kernel.  The empty reference stack is
    realized as one slab of the incident medium with the stored length."""
    if stack.layers:
        return stack.index_array(), stack.thickness_array()
    if stack.reference_length > 0.0:
        return (
            np.array([stack.incident_medium], dtype=np.complex128),
            np.array([stack.reference_length], dtype=np.float64),
        )
    return np.zeros(0, dtype=np.complex128), np.zeros(0, dtype=np.float64)


def raw_amplitudes(
    stack: LayerStack,
    wavelengths_nm: np.ndarray,
    alphas: np.ndarray,
    pol: Polarization,
) -> tuple[np.ndarray, np.ndarray]:
    """Batch (t, r) with alpha = n_inc*sin(theta) given directly.

    This is the one entry point every higher-level routine funnels
    through; wavelengths and alphas must have equal shape.
    """
    lam = np.asarray(wavelengths_nm, dtype=np.float64)
    alpha = np.asarray(alphas, dtype=np.float64)
    if lam.shape != alpha.shape:
        raise ValidationError(f"wavelengths shape {lam.shape} != alphas shape {alpha.shape}")
    if lam.size and (not np.all(np.isfinite(lam)) or np.any(lam <= 0.0)):
        raise ValidationError("wavelengths must be finite and > 0")
    if lam.size and not np.all(np.isfinite(alpha)):
        raise ValidationError("alphas must be finite")
    n, d = _effective_arrays(stack)
    k0 = 2.0 * math.pi / lam
    return core.amplitudes(n, d, stack.incident_medium, stack.exit_medium, k0, alpha, _pol_code(pol))


def _alpha(stack: LayerStack, angle_rad: float) -> float:
    if stack.incident_medium.imag != 0.0:
        raise ValidationError("incident medium must be lossless to define the angle of incidence")
    return stack.incident_medium.real * math.sin(angle_rad)


def _admittance(n: complex, alpha: float, pol: Polarization) -> complex:
    q = cmath.sqrt(n * n - alpha * alpha)
    if q.imag < 0.0:
        q = -q
    return q if Polarization.parse(pol) is Polarization.S else (n * n) / q


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Complex t, r and the derived intensity coefficients at one point."""

    t: complex
    r: complex
    phi_T: float  # principal-value arg(t), radians
    transmittance: float
    reflectance: float


def scattering(stack: LayerStack, point: OperatingPoint) -> ScatteringAmplitudes:
    alpha = _alpha(stack, point.angle_of_incidence)
    t_arr, r_arr = raw_amplitudes(
        stack,
        np.array([point.vacuum_wavelength]),
        np.array([alpha]),
        point.polarization,
    )
    t = complex(t_arr[0])
    r = complex(r_arr[0])
    eta_in = _admittance(stack.incident_medium, alpha, point.polarization)
    eta_out = _admittance(stack.exit_medium, alpha, point.polarization)
    transmittance = abs(t) ** 2 * eta_out.real / eta_in.real
    return ScatteringAmplitudes(
        t=t,
        r=r,
        phi_T=cmath.phase(t),
        transmittance=transmittance,
        reflectance=abs(r) ** 2,
    )


# ---------------------------------------------------------------------------
# Spectra with continuously unwrapped phase.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumSample:
    wavelength: float
    transmittance: float
    reflectance: float
    phi_T: float  # unwrapped along the sweep


def _wrap_to_pi(x: float) -> float:
    return (x + math.pi) % (2.0 * math.pi) - math.pi


def _unwrap_gap(phase_at, x_lo: float, arg_lo: float, x_hi: float, arg_hi: float) -> float:
    """Total continuous phase change between two samples.

    If the wrapped jump is large the interval is bisected (fresh kernel
    evaluations at midpoints) until each sub-jump is unambiguous, down to
    a step floor of UNWRAP_FLOOR_NM.
    """
    jump = _wrap_to_pi(arg_hi - arg_lo)
    if abs(jump) <= _UNWRAP_TRIGGER or (x_hi - x_lo) <= UNWRAP_FLOOR_NM:
        return jump
    x_mid = 0.5 * (x_lo + x_hi)
    arg_mid = phase_at(x_mid)
    return _unwrap_gap(phase_at, x_lo, arg_lo, x_mid, arg_mid) + _unwrap_gap(
        phase_at, x_mid, arg_mid, x_hi, arg_hi
    )


def transmission_spectrum(
    stack: LayerStack,
    wavelengths_nm,
    angle_rad: float = 0.0,
    pol: Polarization = Polarization.P,
) -> list[SpectrumSample]:
    lam = np.asarray(wavelengths_nm, dtype=np.float64)
    if lam.size == 0:
        raise ValidationError("wavelength list must be non-empty")
    if np.any(np.diff(lam) <= 0.0):
        raise ValidationError("wavelengths must be strictly ascending")
    if not (0.0 <= angle_rad < math.pi / 2):
        raise ValidationError(f"angle must lie in [0, pi/2), got {angle_rad!r}")
    pol = Polarization.parse(pol)

    alpha = _alpha(stack, angle_rad)
    alphas = np.full_like(lam, alpha)
    t, r = raw_amplitudes(stack, lam, alphas, pol)

    eta_in = _admittance(stack.incident_medium, alpha, pol)
    eta_out = _admittance(stack.exit_medium, alpha, pol)
    trans = np.abs(t) ** 2 * (eta_out.real / eta_in.real)
    refl = np.abs(r) ** 2
    raw_arg = np.angle(t)

    def phase_at(wavelength: float) -> float:
        tt, _ = raw_amplitudes(stack, np.array([wavelength]), np.array([alpha]), pol)
        return float(np.angle(tt[0]))

    phi = np.empty_like(lam)
    phi[0] = raw_arg[0]
    for i in range(1, lam.size):
        phi[i] = phi[i - 1] + _unwrap_gap(phase_at, lam[i - 1], raw_arg[i - 1], lam[i], raw_arg[i])

    return [
        SpectrumSample(float(w), float(T), float(R), float(p))
        for w, T, R, p in zip(lam, trans, refl, phi)
    ]


SPECTRUM_CSV_COLUMNS = ("wavelength_nm", "transmittance", "reflectance", "phi_T_rad")


def write_spectrum_csv(samples: list[SpectrumSample], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(SPECTRUM_CSV_COLUMNS)
    for s in samples:
        writer.writerow(
            [f"{s.wavelength:.12g}", f"{s.transmittance:.12g}", f"{s.reflectance:.12g}", f"{s.phi_T:.12g}"]
        )


# ---------------------------------------------------------------------------
# Bloch quasimomentum of a periodic unit cell.
# ---------------------------------------------------------------------------

# |Im K| * Lambda above this counts as "inside the gap".
GAP_TOLERANCE = 1.0e-9


@dataclass(frozen=True)
class BlochResult:
    quasimomentum: complex  # rad/nm, Re(K*Lambda) in [0, pi]
    kappa: float  # |Im K|, evanescent decay constant per nm
    in_gap: bool


def bloch_analysis(unit_cell: LayerStack, point: OperatingPoint) -> BlochResult:
    """Bloch wavevector K of the infinite repetition of ``unit_cell``:
    cos(K Lambda) = (1/2) tr M_cell."""
    if not unit_cell.layers:
        raise ValidationError("unit cell must contain at least one layer")
    cell_thickness = unit_cell.total_thickness
    if cell_thickness <= 0.0:
        raise ValidationError("unit cell must have positive total thickness")
    alpha = _alpha(unit_cell, point.angle_of_incidence)
    ht = core.half_trace(
        unit_cell.index_array(),
        unit_cell.thickness_array(),
        np.array([point.k0]),
        np.array([alpha]),
        _pol_code(point.polarization),
    )
    k_lambda = cmath.acos(complex(ht[0]))  # principal branch: Re in [0, pi]
    kappa = abs(k_lambda.imag) / cell_thickness
    return BlochResult(
        quasimomentum=k_lambda / cell_thickness,
        kappa=kappa,
        in_gap=bool(abs(k_lambda.imag) > GAP_TOLERANCE),
    )
