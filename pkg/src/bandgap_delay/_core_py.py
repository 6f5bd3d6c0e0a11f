"""Pure-NumPy transfer-matrix kernel, vectorized over operating points.

Conventions (shared with the compiled kernel, which must match bit-for-bit
in structure):

* time dependence exp(-i omega t); forward propagation accumulates
  exp(+i k_z z), so the transmission amplitude of a transparent slab has
  phase that grows with frequency;
* alpha = n_incident * sin(theta) is the conserved in-plane direction
  cosine; layer longitudinal wavevector k_z = k0 * sqrt(n^2 - alpha^2)
  on the branch Im >= 0 (and Re > 0 for a positive real radicand), so
  evanescent components decay toward +z;
* per-layer characteristic matrix acting on (tangential E, tangential H):

      [[cos d,        -i sin d / eta],
       [-i eta sin d,  cos d       ]]

  with phase thickness d = k_z * thickness and admittance
  eta_S = sqrt(n^2 - alpha^2), eta_P = n^2 / sqrt(n^2 - alpha^2);
* t is the tangential-field transmission ratio, which makes P and S
  coincide exactly at normal incidence.
"""

from __future__ import annotations

import numpy as np

POL_S = 0
POL_P = 1


def _branch_sqrt(radicand: np.ndarray) -> np.ndarray:
    """Complex sqrt with Im >= 0 (Re >= 0 holds automatically for the
    physical radicands, whose imaginary part is never negative)."""
    q = np.sqrt(radicand.astype(np.complex128, copy=False))
    return np.where(q.imag < 0.0, -q, q)


def _eta(n: complex, alpha: np.ndarray, pol: int) -> np.ndarray:
    q = _branch_sqrt(n * n - alpha * alpha)
    if pol == POL_S:
        return q
    return (n * n) / q


def amplitudes(n, d, n_in, n_out, k0, alpha, pol):
    """Complex (t, r) for one stack at many operating points.

    n: complex layer indices, shape (N,); d: thicknesses nm, shape (N,);
    n_in/n_out: ambient indices; k0: vacuum wavenumbers rad/nm, shape (P,);
    alpha: conserved n_in*sin(theta), shape (P,); pol: POL_S or POL_P.
    Returns (t, r) arrays of shape (P,).
    """
    k0 = np.asarray(k0, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)

    a = np.ones_like(k0, dtype=np.complex128)
    b = np.zeros_like(a)
    c = np.zeros_like(a)
    dd = np.ones_like(a)

    n = np.asarray(n, dtype=np.complex128)
    d = np.asarray(d, dtype=np.float64)
    for j in range(n.shape[0]):
        q = _branch_sqrt(n[j] * n[j] - alpha * alpha)
        eta = q if pol == POL_S else (n[j] * n[j]) / q
        delta = k0 * d[j] * q
        cd = np.cos(delta)
        sd = np.sin(delta)
        m01 = -1j * sd / eta
        m10 = -1j * sd * eta
        a, b, c, dd = (
            a * cd + b * m10,
            a * m01 + b * cd,
            c * cd + dd * m10,
            c * m01 + dd * cd,
        )

    eta_in = _eta(complex(n_in), alpha, pol)
    eta_out = _eta(complex(n_out), alpha, pol)
    bv = a + b * eta_out
    cv = c + dd * eta_out
    den = eta_in * bv + cv
    t = 2.0 * eta_in / den
    r = (eta_in * bv - cv) / den
    return t, r


def half_trace(n, d, k0, alpha, pol):
    """Half the trace of the unit-cell translation matrix, cos(K * Lambda),
    at many operating points.  Ambient media do not enter."""
    k0 = np.asarray(k0, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)

    a = np.ones_like(k0, dtype=np.complex128)
    b = np.zeros_like(a)
    c = np.zeros_like(a)
    dd = np.ones_like(a)

    n = np.asarray(n, dtype=np.complex128)
    d = np.asarray(d, dtype=np.float64)
    for j in range(n.shape[0]):
        q = _branch_sqrt(n[j] * n[j] - alpha * alpha)
        eta = q if pol == POL_S else (n[j] * n[j]) / q
        delta = k0 * d[j] * q
        cd = np.cos(delta)
        sd = np.sin(delta)
        m01 = -1j * sd / eta
        m10 = -1j * sd * eta
        a, b, c, dd = (
            a * cd + b * m10,
            a * m01 + b * cd,
            c * cd + dd * m10,
            c * m01 + dd * cd,
        )
    return 0.5 * (a + dd)
