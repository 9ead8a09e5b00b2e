# cython: language_level=3
"""Compiled double precision kernels (zeta on vertical lines, Hardy Z, cosine sums)."""

import numpy as np

from libc.math cimport cos, sin, exp, log, ceil, fabs, sqrt, M_PI, atan2

from zetapfrac._pykernels import EM_COEFFS as _EM_PY, STIRLING_COEFFS as _ST_PY

cdef int N_EM = len(_EM_PY)
cdef int N_ST = len(_ST_PY)
cdef double EM[64]
cdef double ST[64]
for _i in range(N_EM):
    EM[_i] = _EM_PY[_i]
for _i in range(N_ST):
    ST[_i] = _ST_PY[_i]

cdef double LOG_PI = log(M_PI)
cdef double HALF_LOG_2PI = 0.5 * log(2.0 * M_PI)


cdef inline double cabs_(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double complex clog_(double complex z) nogil:
    return log(cabs_(z)) + 1j * atan2(z.imag, z.real)


cdef double complex _zeta(double sigma, double t) nogil:
    cdef double complex s = sigma + 1j * t
    cdef int n_cut = <int> ceil((cabs_(s) + 40.0) / M_PI)
    if n_cut < 12:
        n_cut = 12
    cdef double complex total = 0
    cdef double ln, mag
    cdef int n, j
    for n in range(1, n_cut):
        ln = log(<double> n)
        mag = exp(-sigma * ln)
        total = total + (mag * cos(t * ln) - 1j * mag * sin(t * ln))
    ln = log(<double> n_cut)
    mag = exp(-sigma * ln)
    cdef double complex n_pow = mag * cos(t * ln) - 1j * mag * sin(t * ln)
    total = total + n_pow * n_cut / (s - 1.0) + 0.5 * n_pow
    cdef double complex poch = s
    cdef double complex term_pow = n_pow / n_cut
    cdef double inv_n2 = 1.0 / (<double> n_cut * n_cut)
    cdef double complex term
    for j in range(N_EM):
        term = EM[j] * poch * term_pow
        total = total + term
        if cabs_(term) < 1e-18 * cabs_(total):
            break
        poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
        term_pow = term_pow * inv_n2
    return total


cdef double complex _loggamma(double complex z) nogil:
    cdef double complex shift = 0
    cdef double complex w = z
    while w.real < 12.0:
        shift = shift + clog_(w)
        w = w + 1.0
    cdef double complex inv = 1.0 / w
    cdef double complex inv2 = inv * inv
    cdef double complex acc = 0
    cdef double complex p = inv
    cdef int j
    for j in range(N_ST):
        acc = acc + ST[j] * p
        p = p * inv2
    return (w - 0.5) * clog_(w) - w + HALF_LOG_2PI + acc - shift


cdef double _theta(double t) nogil:
    return _loggamma(0.25 + 0.5j * t).imag - 0.5 * t * LOG_PI


def zeta_d(double sigma, double t):
    """Euler-Maclaurin zeta(sigma + i t) in double precision, sigma >= 0."""
    return complex(_zeta(sigma, t))


def loggamma_d(z):
    """log Gamma(z) for Re(z) > 0."""
    return complex(_loggamma(complex(z)))


def theta_d(double t):
    """Riemann-Siegel theta function."""
    return _theta(t)


def hardy_z(ts):
    """Hardy Z(t) on an array; sign(Z) = -sign(Xi) for real t."""
    cdef double[::1] tv = np.ascontiguousarray(ts, dtype=float)
    out = np.empty(tv.shape[0], dtype=float)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double th
    cdef double complex z
    with nogil:
        for i in range(tv.shape[0]):
            th = _theta(tv[i])
            z = (cos(th) + 1j * sin(th)) * _zeta(0.5, tv[i])
            ov[i] = z.real
    return out


def zeta_line(double sigma, ts):
    """zeta(sigma + i t) for an array of t."""
    cdef double[::1] tv = np.ascontiguousarray(ts, dtype=float)
    out = np.empty(tv.shape[0], dtype=complex)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            ov[i] = _zeta(sigma, tv[i])
    return out


def cosine_series(ys, coeffs, freqs):
    """sum_k coeffs[k] * cos(freqs[k] * y) for each y."""
    cdef double[::1] yv = np.ascontiguousarray(ys, dtype=float)
    cdef double[::1] cv = np.ascontiguousarray(coeffs, dtype=float)
    cdef double[::1] fv = np.ascontiguousarray(freqs, dtype=float)
    out = np.empty(yv.shape[0], dtype=float)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, k
    cdef double acc
    with nogil:
        for i in range(yv.shape[0]):
            acc = 0.0
            for k in range(cv.shape[0]):
                acc = acc + cv[k] * cos(fv[k] * yv[i])
            ov[i] = acc
    return out
