"""Candidate traversal-time predictions for a barrier, all referenced to an
equal-length air path.

Definitions, in the exp(-i omega t) / exp(+i k z) field convention:

* Transverse beam shift
      Dy = -dphi_T/dk_y |_omega = -(1 / (k n_inc cos theta)) dphi_T/dtheta,
  with k = omega/c.  For the empty reference stack this reduces to the
  plane-wave walk-off L tan(theta).

* Group (stationary-phase) delay
      tau_g = dphi_T/domega |_theta + (Dy / c) sin(theta).
  The second term converts the fixed-angle frequency derivative into the
  fixed-k_y one that governs wavepacket peak arrival.

* Larmor interaction time.  A probe frequency Omega_L scales every layer
  index (not the ambient media) by 1 + Omega_L/omega.  The complex time is
  the logarithmic response of the transmission amplitude,
      tau_c = dphi_T/dOmega_L + i dln|t|/dOmega_L  at Omega_L = 0,
  written here so that its real part is +L/c for free propagation.  The
  real (in-plane) part tracks the group delay closely in the regime of
  interest and is taken equal to it; the reported Larmor time is the
  quadrature sum sqrt(tau_g^2 + tau_y^2) with tau_y the imaginary
  (out-of-plane) part.

* Semiclassical comparison time
      tau_sc = d omega / (c^2 kappa),
  the photon transcription (effective inertia h-bar omega / c^2) of the
  massive-particle result m d / (h-bar kappa), with kappa the Bloch
  evanescent decay constant of the stack's leading two-layer period.  Only
  defined inside the gap; provided as the comparison curve it is, not as a
  peak-arrival prediction.

* Air reference: a parallel wavefront at c reaching the far-side point
  displaced by Dy takes (d cos theta + Dy sin theta)/c.  Relative delays
  are (theory - air reference), the observable a dip shift measures.
"""

from __future__ import annotations

import cmath
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import OpaquePointError, OutsideGapError, ValidationError
from .numderiv import DiffResult, adaptive_richardson
from .stacks import LayerStack, OperatingPoint, Polarization
from .transfer import bloch_analysis, raw_amplitudes, scattering
from .units import C_NM_PER_FS, wavelength_from_omega

# Phase is meaningless where essentially nothing is transmitted.
MIN_TRANSMITTANCE = 1.0e-8

# Frequency-derivative step h0 = 1e-4 * omega halved down to 1e-8 * omega;
# the Larmor probe starts finer because the response is itself first order.
OMEGA_STEP_REL = 1.0e-4
OMEGA_FLOOR_REL = 1.0e-8
LARMOR_STEP_REL = 1.0e-5
THETA_STEP = 1.0e-4  # radians


def _amp(stack: LayerStack, wavelength: float, alpha: float, pol: Polarization) -> complex:
    t, _ = raw_amplitudes(stack, np.array([wavelength]), np.array([alpha]), pol)
    return complex(t[0])


def _require_transparent(stack: LayerStack, point: OperatingPoint) -> float:
    transmittance = scattering(stack, point).transmittance
    if not transmittance > MIN_TRANSMITTANCE:
        raise OpaquePointError(
            f"opaque point: phase derivative undefined (transmittance {transmittance:.3e} "
            f"at {point.vacuum_wavelength:g} nm, {math.degrees(point.angle_of_incidence):.3g} deg)"
        )
    return transmittance


def _phase_wrt_omega(stack: LayerStack, point: OperatingPoint) -> DiffResult:
    omega0 = point.omega
    alpha = stack.incident_medium.real * math.sin(point.angle_of_incidence)

    def quotient(h: float) -> float:
        t_plus = _amp(stack, wavelength_from_omega(omega0 + h), alpha, point.polarization)
        t_minus = _amp(stack, wavelength_from_omega(omega0 - h), alpha, point.polarization)
        return cmath.phase(t_plus / t_minus) / (2.0 * h)

    return adaptive_richardson(quotient, OMEGA_STEP_REL * omega0, OMEGA_FLOOR_REL * omega0, atol=1.0e-12)


def _phase_wrt_theta(stack: LayerStack, point: OperatingPoint) -> DiffResult:
    theta0 = point.angle_of_incidence
    n_inc = stack.incident_medium.real
    lam = point.vacuum_wavelength

    def quotient(h: float) -> float:
        t_plus = _amp(stack, lam, n_inc * math.sin(theta0 + h), point.polarization)
        t_minus = _amp(stack, lam, n_inc * math.sin(theta0 - h), point.polarization)
        return cmath.phase(t_plus / t_minus) / (2.0 * h)

    # atol set so the symmetric zero at normal incidence converges cleanly
    return adaptive_richardson(quotient, THETA_STEP, THETA_STEP * 1.0e-4, atol=1.0e-10)


def _log_t_wrt_larmor(stack: LayerStack, point: OperatingPoint) -> DiffResult:
    omega0 = point.omega
    alpha = stack.incident_medium.real * math.sin(point.angle_of_incidence)
    lam = point.vacuum_wavelength

    def quotient(h: float) -> complex:
        t_plus = _amp(stack.with_scaled_indices(1.0 + h / omega0), lam, alpha, point.polarization)
        t_minus = _amp(stack.with_scaled_indices(1.0 - h / omega0), lam, alpha, point.polarization)
        return cmath.log(t_plus / t_minus) / (2.0 * h)

    return adaptive_richardson(quotient, LARMOR_STEP_REL * omega0, OMEGA_FLOOR_REL * omega0, atol=1.0e-12)


def transverse_shift(stack: LayerStack, point: OperatingPoint) -> float:
    """Lateral displacement Dy of the transmitted beam, in nm."""
    _require_transparent(stack, point)
    return _transverse_shift_checked(stack, point)[0]


def _transverse_shift_checked(stack: LayerStack, point: OperatingPoint) -> tuple[float, bool]:
    if point.angle_of_incidence == 0.0:
        return 0.0, True  # symmetric in alpha, derivative vanishes identically
    diff = _phase_wrt_theta(stack, point)
    k = point.k0
    dy = -float(diff.value) / (k * stack.incident_medium.real * math.cos(point.angle_of_incidence))
    return dy, diff.converged


def group_delay(stack: LayerStack, point: OperatingPoint) -> float:
    """Stationary-phase delay tau_g in fs (not yet air-referenced)."""
    _require_transparent(stack, point)
    dy, _ = _transverse_shift_checked(stack, point)
    diff = _phase_wrt_omega(stack, point)
    return float(diff.value) + dy * math.sin(point.angle_of_incidence) / C_NM_PER_FS


def larmor_time(stack: LayerStack, point: OperatingPoint) -> tuple[float, float]:
    """(out_of_plane, magnitude) of the Larmor interaction time, fs.

    out_of_plane is dln|t|/dOmega_L; for this mirror it is negative at
    midgap (a uniform index increase detunes the stack from the probe and
    strengthens the ambient mismatch, so |t| drops).  Only its square
    enters the reported magnitude.
    """
    _require_transparent(stack, point)
    tau_g = group_delay(stack, point)
    diff = _log_t_wrt_larmor(stack, point)
    out_of_plane = float(diff.value.real)  # dln|t|/dOmega_L
    return out_of_plane, math.hypot(tau_g, out_of_plane)


def _unit_cell(stack: LayerStack) -> LayerStack:
    if not stack.layers:
        raise ValidationError("semiclassical time needs a stack with layers")
    period = stack.layers[:2] if len(stack.layers) >= 2 else stack.layers[:1]
    return LayerStack(layers=period, incident_medium=stack.incident_medium, exit_medium=stack.exit_medium)


def semiclassical_time(stack: LayerStack, point: OperatingPoint) -> float:
    """tau_sc = d omega / (c^2 kappa), kappa from the leading period."""
    bloch = bloch_analysis(_unit_cell(stack), point)
    if not bloch.in_gap:
        raise OutsideGapError(
            f"semiclassical time undefined outside gap (kappa = {bloch.kappa:.3e} /nm "
            f"at {point.vacuum_wavelength:g} nm)"
        )
    return stack.total_thickness * point.omega / (C_NM_PER_FS**2 * bloch.kappa)


def air_time(stack: LayerStack, point: OperatingPoint, transverse_shift_nm: float) -> float:
    """Vacuum wavefront time to the far-side point displaced by Dy, fs."""
    d = stack.traversal_length
    theta = point.angle_of_incidence
    return (d * math.cos(theta) + transverse_shift_nm * math.sin(theta)) / C_NM_PER_FS


@dataclass(frozen=True)
class DelayReport:
    """Every timescale at one operating point, with the air reference."""

    point: OperatingPoint
    transmittance: float
    transverse_shift: float  # nm
    phase_derivative: float  # fs, the dphi_T/domega term alone
    group_delay: float  # fs
    larmor_out_of_plane: float  # fs
    larmor_time: float  # fs, quadrature magnitude
    larmor_in_plane_raw: float  # fs, raw dphi/dOmega_L (diagnostic only)
    semiclassical_time: float | None  # fs, None in a pass band
    air_time: float  # fs
    relative_group_delay: float  # fs
    relative_larmor_time: float  # fs
    flags: tuple[str, ...] = ()

    @property
    def angle_deg(self) -> float:
        return math.degrees(self.point.angle_of_incidence)


def delay_report(stack: LayerStack, point: OperatingPoint) -> DelayReport:
    transmittance = _require_transparent(stack, point)
    flags: list[str] = []

    dy, dy_ok = _transverse_shift_checked(stack, point)
    if not dy_ok:
        flags.append("transverse_shift_unconverged")

    omega_diff = _phase_wrt_omega(stack, point)
    if not omega_diff.converged:
        flags.append("group_delay_unconverged")
    phase_derivative = float(omega_diff.value)
    tau_g = phase_derivative + dy * math.sin(point.angle_of_incidence) / C_NM_PER_FS

    larmor_diff = _log_t_wrt_larmor(stack, point)
    if not larmor_diff.converged:
        flags.append("larmor_unconverged")
    tau_y = float(larmor_diff.value.real)
    larmor_in_plane_raw = float(larmor_diff.value.imag)  # dphi/dOmega_L
    larmor_magnitude = math.hypot(tau_g, tau_y)

    if stack.layers:
        try:
            tau_sc = semiclassical_time(stack, point)
        except OutsideGapError:
            tau_sc = None
    else:
        tau_sc = None

    reference = air_time(stack, point, dy)
    return DelayReport(
        point=point,
        transmittance=transmittance,
        transverse_shift=dy,
        phase_derivative=phase_derivative,
        group_delay=tau_g,
        larmor_out_of_plane=tau_y,
        larmor_time=larmor_magnitude,
        larmor_in_plane_raw=larmor_in_plane_raw,
        semiclassical_time=tau_sc,
        air_time=reference,
        relative_group_delay=tau_g - reference,
        relative_larmor_time=larmor_magnitude - reference,
        flags=tuple(flags),
    )


def _failed_report(point: OperatingPoint, transmittance: float, reason: str) -> DelayReport:
    nan = float("nan")
    return DelayReport(
        point=point,
        transmittance=transmittance,
        transverse_shift=nan,
        phase_derivative=nan,
        group_delay=nan,
        larmor_out_of_plane=nan,
        larmor_time=nan,
        larmor_in_plane_raw=nan,
        semiclassical_time=None,
        air_time=nan,
        relative_group_delay=nan,
        relative_larmor_time=nan,
        flags=(reason,),
    )


MAX_SCAN_ANGLE_RAD = math.radians(85.0)


def angle_scan(
    stack: LayerStack,
    wavelength_nm: float,
    pol: Polarization,
    angles_rad,
    threads: int | None = None,
) -> list[DelayReport]:
    """One DelayReport per angle, input order preserved.  Per-point
    failures become flagged rows, never a scan failure."""
    angles = [float(a) for a in angles_rad]
    for a in angles:
        if not (0.0 <= a <= MAX_SCAN_ANGLE_RAD):
            raise ValidationError(f"scan angles must lie in [0, 85 deg], got {math.degrees(a):.6g} deg")
    pol = Polarization.parse(pol)

    def one(angle: float) -> DelayReport:
        point = OperatingPoint(wavelength_nm, angle, pol)
        try:
            return delay_report(stack, point)
        except OpaquePointError:
            return _failed_report(point, scattering(stack, point).transmittance, "opaque")

    if threads is not None and threads > 1 and len(angles) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, angles))
    return [one(a) for a in angles]


SCAN_CSV_COLUMNS = (
    "angle_deg",
    "transmittance",
    "rel_group_delay_fs",
    "rel_larmor_fs",
    "semiclassical_fs",
    "transverse_shift_nm",
    "flags",
)


def write_scan_csv(reports: list[DelayReport], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(SCAN_CSV_COLUMNS)
    for rep in reports:
        writer.writerow(
            [
                f"{rep.angle_deg:.12g}",
                f"{rep.transmittance:.12g}",
                f"{rep.relative_group_delay:.12g}",
                f"{rep.relative_larmor_time:.12g}",
                "" if rep.semiclassical_time is None else f"{rep.semiclassical_time:.12g}",
                f"{rep.transverse_shift:.12g}",
                ";".join(rep.flags),
            ]
        )
