"""Two-photon coincidence-dip model.

Physics being modeled, in brief.  A cw pump at frequency 2 omega_0 down-
converts into photon pairs whose members carry conjugate detunings
omega_0 +/- Omega with joint spectral density |f(Omega)|^2 (an even
function; the pair frequencies sum to the pump's exactly).  One photon
crosses the barrier arm, whose relative transfer function is H(omega);
the other crosses the reference arm with an adjustable external delay
tau.  At a 50/50 beamsplitter, coincidences between the two output ports
arise from two fourth-order amplitudes, both-transmitted and
both-reflected, which enter with opposite sign.  Summing and integrating
over the pair spectrum gives the coincidence rate

    R(tau) = N - Re integral dOmega |f|^2 H(w0+Omega) H*(w0-Omega)
                 exp(-2 i Omega tau),
    N      = integral dOmega |f|^2 [ |H(w0+Omega)|^2 + |H(w0-Omega)|^2 ] / 2,

normalized here so the distinguishable-photon plateau R(|tau| -> inf) is
1 (the raw factor-of-two in absolute rate is absorbed).  Two standard
consequences worth noting: constant factors in H cancel, and even-order
spectral phase drops out of the cross term (dispersion cancellation), so
the dip position tracks the odd part of the phase, i.e. the group delay.

The barrier arm for an angled mirror is built by ``barrier_arm_transfer``:
the stack amplitude is evaluated along the fixed-k_y slice (the angle each
detuned component sees keeps n sin(theta) omega constant) and referenced
against the air configuration, modeled as the constant delay air_time of
the center frequency, so the measured dip center is exactly the
relative group delay in the narrowband limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .delays import air_time, _transverse_shift_checked, _require_transparent
from .errors import DipExtractionError, ValidationError
from .stacks import LayerStack, OperatingPoint
from .transfer import raw_amplitudes
from .units import C_NM_PER_FS

# Gauss-Legendre order for the spectral integral over +/-6 sigma.  Rates
# are evaluated at both n and 2n nodes and the order is doubled until they
# agree; smooth spectra converge at the base order already.
QUADRATURE_NODES = 128
MAX_QUADRATURE_NODES = 1024
QUADRATURE_RATE_TOL = 1.0e-8
QUADRATURE_HALF_WIDTH_SIGMAS = 6.0


@lru_cache(maxsize=16)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    # leggauss is O(order^2); cache since escalation revisits the same orders
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class PhotonPairSpectrum:
    """Joint spectrum of the down-converted pair.

    correlation_time is the RMS width (fs) of the unit-transmission
    coincidence dip; for the Gaussian default this fixes the RMS detuning
    width sigma_Omega = 1 / (2 correlation_time).  A phase-matched sinc^2
    profile with the same dip RMS width is available via shape="sinc2".
    """

    center_wavelength: float = 702.0
    correlation_time: float = 15.0
    shape: str = "gaussian"
    pump_wavelength: float | None = None

    def __post_init__(self):
        if not self.center_wavelength > 0:
            raise ValidationError(f"center_wavelength must be > 0, got {self.center_wavelength!r}")
        if not self.correlation_time > 0:
            raise ValidationError(f"correlation_time must be > 0, got {self.correlation_time!r}")
        if self.shape not in ("gaussian", "sinc2"):
            raise ValidationError(f"shape must be 'gaussian' or 'sinc2', got {self.shape!r}")
        if self.pump_wavelength is None:
            object.__setattr__(self, "pump_wavelength", self.center_wavelength / 2.0)
        elif abs(self.pump_wavelength - self.center_wavelength / 2.0) > 1.0e-9 * self.center_wavelength:
            raise ValidationError(
                "pair frequencies must sum to the pump frequency: "
                f"pump_wavelength must equal center_wavelength/2, got {self.pump_wavelength!r}"
            )

    @property
    def center_omega(self) -> float:
        return 2.0 * math.pi * C_NM_PER_FS / self.center_wavelength

    @property
    def sigma_omega(self) -> float:
        """RMS detuning width (rad/fs) of the Gaussian profile; for sinc2,
        the equivalent scale used to size the quadrature window."""
        return 1.0 / (2.0 * self.correlation_time)

    def density(self, detuning) -> np.ndarray:
        """Normalized joint spectral density |f(Omega)|^2 (fs/rad)."""
        omega = np.asarray(detuning, dtype=np.float64)
        if self.shape == "gaussian":
            s = self.sigma_omega
            return np.exp(-(omega**2) / (2.0 * s * s)) / (s * math.sqrt(2.0 * math.pi))
        # sinc^2 with triangle-dip half-base a = sqrt(6) * correlation_time,
        # which matches the Gaussian's RMS dip width.
        a = math.sqrt(6.0) * self.correlation_time
        return (a / math.pi) * np.sinc(a * omega / math.pi) ** 2

    def quadrature(self, nodes: int = QUADRATURE_NODES) -> tuple[np.ndarray, np.ndarray]:
        """(detunings, weights) with the spectral density folded into the
        weights; Gauss-Legendre over +/- 6 sigma."""
        x, w = _leggauss(nodes)
        half = QUADRATURE_HALF_WIDTH_SIGMAS * self.sigma_omega
        detuning = half * x
        return detuning, half * w * self.density(detuning)


TransferFunction = Callable[[np.ndarray], np.ndarray]
"""Maps an array of detunings Omega (rad/fs) to complex arm amplitudes."""


def barrier_arm_transfer(stack: LayerStack, point: OperatingPoint) -> TransferFunction:
    """Relative transfer function of the barrier arm against the equal-air
    configuration (see module docstring)."""
    _require_transparent(stack, point)
    reference_delay = air_time(stack, point, _transverse_shift_checked(stack, point)[0])
    omega0 = point.omega
    alpha0 = stack.incident_medium.real * math.sin(point.angle_of_incidence)

    def transfer(detuning: np.ndarray) -> np.ndarray:
        omega = omega0 + np.asarray(detuning, dtype=np.float64)
        if np.any(omega <= 0.0):
            raise ValidationError("detuning reaches non-positive frequency")
        wavelengths = 2.0 * math.pi * C_NM_PER_FS / omega
        alphas = alpha0 * omega0 / omega  # fixed k_y across the spectrum
        t, _ = raw_amplitudes(stack, wavelengths, alphas, point.polarization)
        return t * np.exp(-1j * omega * reference_delay)

    return transfer


def tabulated_transfer(detunings, values) -> TransferFunction:
    """Wrap a precomputed table as a TransferFunction that refuses to
    extrapolate (raises if the spectrum needs samples outside it)."""
    grid = np.asarray(detunings, dtype=np.float64)
    vals = np.asarray(values, dtype=np.complex128)
    if grid.ndim != 1 or grid.shape != vals.shape or grid.size < 2:
        raise ValidationError("tabulated transfer needs matching 1-d arrays of length >= 2")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError("tabulated detunings must be strictly ascending")

    def transfer(detuning: np.ndarray) -> np.ndarray:
        om = np.asarray(detuning, dtype=np.float64)
        if np.any(om < grid[0]) or np.any(om > grid[-1]):
            raise ValidationError("transmission table under-sampled")
        re = np.interp(om, grid, vals.real)
        im = np.interp(om, grid, vals.imag)
        return re + 1j * im

    return transfer


def _tabulate(spectrum: PhotonPairSpectrum, barrier_t: TransferFunction, nodes: int):
    detuning, weights = spectrum.quadrature(nodes)
    t_plus = np.asarray(barrier_t(detuning), dtype=np.complex128)
    t_minus = np.asarray(barrier_t(-detuning), dtype=np.complex128)
    cross = t_plus * np.conj(t_minus)
    plateau = float(np.sum(weights * (np.abs(t_plus) ** 2 + np.abs(t_minus) ** 2)) / 2.0)
    if plateau <= 0.0:
        raise ValidationError("barrier transmission vanishes over the whole pair spectrum")
    return detuning, weights, cross, plateau


def _rates(detuning, weights, cross, plateau, delays_fs) -> np.ndarray:
    taus = np.asarray(delays_fs, dtype=np.float64)
    phase = np.exp(-2j * np.outer(taus, detuning))
    return 1.0 - (phase @ (weights * cross)).real / plateau


def _converged_rates(spectrum, barrier_t, delays_fs, nodes: int) -> np.ndarray:
    rates = _rates(*_tabulate(spectrum, barrier_t, nodes), delays_fs)
    while True:
        nodes *= 2
        refined = _rates(*_tabulate(spectrum, barrier_t, nodes), delays_fs)
        if float(np.max(np.abs(refined - rates))) <= QUADRATURE_RATE_TOL:
            return refined
        rates = refined
        if nodes >= MAX_QUADRATURE_NODES:
            raise ValidationError(
                f"spectral quadrature did not converge by {nodes} nodes; "
                "the barrier transfer function varies too fast over the pair spectrum"
            )


def coincidence_rate(
    spectrum: PhotonPairSpectrum,
    barrier_t: TransferFunction,
    relative_delay: float,
    nodes: int = QUADRATURE_NODES,
) -> float:
    """Normalized coincidence rate at one external delay (fs)."""
    return float(_converged_rates(spectrum, barrier_t, [relative_delay], nodes)[0])


@dataclass(frozen=True)
class DipTrace:
    """Coincidence rate versus external delay, with the extracted minimum.

    delays_fs holds relative delays; prism_positions_um exposes the
    double-pass trombone-position equivalent (tau * c / 2)."""

    delays_fs: tuple[float, ...]
    rates: tuple[float, ...]
    dip_center: float  # fs, parabolic fit through 5 samples at the minimum
    visibility: float  # 1 - min(rate)

    @property
    def prism_positions_um(self) -> tuple[float, ...]:
        return tuple(tau * C_NM_PER_FS / 2.0e3 for tau in self.delays_fs)


DIP_FIT_WINDOW = 5


def trace_dip(
    spectrum: PhotonPairSpectrum,
    barrier_t: TransferFunction,
    delays_fs,
    nodes: int = QUADRATURE_NODES,
) -> DipTrace:
    """Sweep the external delay across the dip and locate its minimum."""
    taus = np.asarray(delays_fs, dtype=np.float64)
    if taus.size < DIP_FIT_WINDOW:
        raise ValidationError(f"need at least {DIP_FIT_WINDOW} delay samples, got {taus.size}")
    if np.any(np.diff(taus) <= 0):
        raise ValidationError("delays must be strictly ascending")

    rates = _converged_rates(spectrum, barrier_t, taus, nodes)

    half = DIP_FIT_WINDOW // 2
    i_min = int(np.argmin(rates))
    if i_min < half or i_min > taus.size - 1 - half:
        raise DipExtractionError("dip not bracketed: minimum sits at the edge of the scanned range")

    window = slice(i_min - half, i_min + half + 1)
    coeffs = np.polyfit(taus[window], rates[window], 2)
    if coeffs[0] <= 0.0:
        raise DipExtractionError("dip not bracketed: no convex minimum in the fit window")
    center = float(-coeffs[1] / (2.0 * coeffs[0]))

    return DipTrace(
        delays_fs=tuple(float(x) for x in taus),
        rates=tuple(float(x) for x in rates),
        dip_center=center,
        visibility=float(1.0 - rates.min()),
    )


@dataclass(frozen=True)
class NarrowbandCheck:
    dip_shift: float
    group_delay: float
    difference: float


NARROWBAND_MIN_CORRELATION_TIME = 100.0


def narrowband_check(
    spectrum: PhotonPairSpectrum,
    barrier_t: TransferFunction,
    nodes: int = QUADRATURE_NODES,
) -> NarrowbandCheck:
    """Compare the dip center against the arm's own group delay
    d arg H / d Omega at zero detuning; the two must coincide when the
    spectrum is narrow (the stationary-phase limit)."""
    if spectrum.correlation_time < NARROWBAND_MIN_CORRELATION_TIME:
        raise ValidationError(
            f"narrowband check needs correlation_time >= {NARROWBAND_MIN_CORRELATION_TIME} fs, "
            f"got {spectrum.correlation_time!r}"
        )

    h = 1.0e-3 * spectrum.sigma_omega
    t_p = complex(np.asarray(barrier_t(np.array([h])))[0])
    t_m = complex(np.asarray(barrier_t(np.array([-h])))[0])
    t_p2 = complex(np.asarray(barrier_t(np.array([h / 2.0])))[0])
    t_m2 = complex(np.asarray(barrier_t(np.array([-h / 2.0])))[0])
    d1 = np.angle(t_p / t_m) / (2.0 * h)
    d2 = np.angle(t_p2 / t_m2) / h
    arm_delay = float((4.0 * d2 - d1) / 3.0)

    span = 4.0 * spectrum.correlation_time
    taus = np.linspace(arm_delay - span, arm_delay + span, 201)
    dip = trace_dip(spectrum, barrier_t, taus, nodes=nodes)
    return NarrowbandCheck(
        dip_shift=dip.dip_center,
        group_delay=arm_delay,
        difference=dip.dip_center - arm_delay,
    )
