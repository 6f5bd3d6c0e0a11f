# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled transfer-matrix kernel.

Semantics mirror bandgap_delay._core_py exactly (same branch choices, same
cascade order); see that module's docstring for the field conventions.
"""

import numpy as np

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex z)
    double complex ccos(double complex z)
    double complex csin(double complex z)
    double cimag(double complex z)
    double creal(double complex z)

POL_S = 0
POL_P = 1


cdef inline double complex _branch_sqrt(double complex radicand) nogil:
    cdef double complex q = csqrt(radicand)
    if cimag(q) < 0.0:
        q = -q
    return q


cdef inline double complex _eta(double complex n, double alpha, int pol) nogil:
    cdef double complex q = _branch_sqrt(n * n - alpha * alpha)
    if pol == 0:
        return q
    return n * n / q


cdef void _cascade(const double complex* n, const double* d, Py_ssize_t nlayers,
                   double k0, double alpha, int pol,
                   double complex* a, double complex* b,
                   double complex* c, double complex* dd) nogil:
    cdef double complex ra = 1.0, rb = 0.0, rc = 0.0, rd = 1.0
    cdef double complex q, eta, delta, cd, sd, m01, m10
    cdef double complex na, nb, nc, nd
    cdef Py_ssize_t j
    for j in range(nlayers):
        q = _branch_sqrt(n[j] * n[j] - alpha * alpha)
        if pol == 0:
            eta = q
        else:
            eta = n[j] * n[j] / q
        delta = k0 * d[j] * q
        cd = ccos(delta)
        sd = csin(delta)
        m01 = -1j * sd / eta
        m10 = -1j * sd * eta
        na = ra * cd + rb * m10
        nb = ra * m01 + rb * cd
        nc = rc * cd + rd * m10
        nd = rc * m01 + rd * cd
        ra = na; rb = nb; rc = nc; rd = nd
    a[0] = ra; b[0] = rb; c[0] = rc; dd[0] = rd


def amplitudes(n, d, n_in, n_out, k0, alpha, int pol):
    """Complex (t, r) for one stack at many operating points; see the
    pure-Python twin for the argument contract."""
    cdef const double complex[::1] n_v = np.ascontiguousarray(n, dtype=np.complex128)
    cdef const double[::1] d_v = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] k0_v = np.ascontiguousarray(np.atleast_1d(k0), dtype=np.float64)
    cdef const double[::1] al_v = np.ascontiguousarray(np.atleast_1d(alpha), dtype=np.float64)
    if k0_v.shape[0] != al_v.shape[0]:
        raise ValueError("k0 and alpha must have equal length")
    if n_v.shape[0] != d_v.shape[0]:
        raise ValueError("n and d must have equal length")

    cdef Py_ssize_t npts = k0_v.shape[0]
    t_out = np.empty(npts, dtype=np.complex128)
    r_out = np.empty(npts, dtype=np.complex128)
    cdef double complex[::1] t_v = t_out
    cdef double complex[::1] r_v = r_out

    cdef double complex cn_in = n_in
    cdef double complex cn_out = n_out
    cdef double complex a, b, c, dd, eta_in, eta_out, bv, cv, den
    cdef Py_ssize_t i
    cdef const double complex* n_ptr = NULL
    cdef const double* d_ptr = NULL
    if n_v.shape[0] > 0:
        n_ptr = &n_v[0]
        d_ptr = &d_v[0]

    with nogil:
        for i in range(npts):
            _cascade(n_ptr, d_ptr, n_v.shape[0], k0_v[i], al_v[i], pol, &a, &b, &c, &dd)
            eta_in = _eta(cn_in, al_v[i], pol)
            eta_out = _eta(cn_out, al_v[i], pol)
            bv = a + b * eta_out
            cv = c + dd * eta_out
            den = eta_in * bv + cv
            t_v[i] = 2.0 * eta_in / den
            r_v[i] = (eta_in * bv - cv) / den
    return t_out, r_out


def half_trace(n, d, k0, alpha, int pol):
    """cos(K * Lambda) of the unit cell at many operating points."""
    cdef const double complex[::1] n_v = np.ascontiguousarray(n, dtype=np.complex128)
    cdef const double[::1] d_v = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] k0_v = np.ascontiguousarray(np.atleast_1d(k0), dtype=np.float64)
    cdef const double[::1] al_v = np.ascontiguousarray(np.atleast_1d(alpha), dtype=np.float64)
    if k0_v.shape[0] != al_v.shape[0]:
        raise ValueError("k0 and alpha must have equal length")
    if n_v.shape[0] != d_v.shape[0]:
        raise ValueError("n and d must have equal length")

    cdef Py_ssize_t npts = k0_v.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    cdef double complex[::1] out_v = out
    cdef double complex a, b, c, dd
    cdef Py_ssize_t i
    cdef const double complex* n_ptr = NULL
    cdef const double* d_ptr = NULL
    if n_v.shape[0] > 0:
        n_ptr = &n_v[0]
        d_ptr = &d_v[0]

    with nogil:
        for i in range(npts):
            _cascade(n_ptr, d_ptr, n_v.shape[0], k0_v[i], al_v[i], pol, &a, &b, &c, &dd)
            out_v[i] = 0.5 * (a + dd)
    return out
