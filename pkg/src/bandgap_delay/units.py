"""Unit system: lengths in nanometers, times in femtoseconds, angular
frequencies in rad/fs.  Keeps every quantity O(1)-O(1e3) so sub-fs delay
arithmetic stays far from float underflow."""

import math

C_NM_PER_FS = 299.792458


def omega_from_wavelength(wavelength_nm: float) -> float:
    """Angular frequency in rad/fs for a vacuum wavelength in nm."""
    return 2.0 * math.pi * C_NM_PER_FS / wavelength_nm


def wavelength_from_omega(omega_rad_per_fs: float) -> float:
    """Vacuum wavelength in nm for an angular frequency in rad/fs."""
    return 2.0 * math.pi * C_NM_PER_FS / omega_rad_per_fs
