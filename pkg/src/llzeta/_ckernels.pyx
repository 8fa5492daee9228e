# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Same signatures as ``_pykernels``."""

from libc.math cimport exp, log, cos, sin, expm1, atan2, fmod, M_PI, floor, hypot

import numpy as np


cdef inline double complex _cexp(double complex w) noexcept nogil:
    cdef double r = exp(w.real)
    return r * cos(w.imag) + 1j * (r * sin(w.imag))


cdef inline double complex _clog(double complex w) noexcept nogil:
    return log(hypot(w.real, w.imag)) + 1j * atan2(w.imag, w.real)


cdef inline double complex _cexpm1(double complex w) noexcept nogil:
    cdef double sh = sin(0.5 * w.imag)
    cdef double re = expm1(w.real) * cos(w.imag) - 2.0 * sh * sh
    return re + 1j * (exp(w.real) * sin(w.imag))


cdef inline double _wrap(double t) noexcept nogil:
    # reduce to (-pi, pi]
    t = fmod(t + M_PI, 2.0 * M_PI)
    if t <= 0.0:
        t += 2.0 * M_PI
    return t - M_PI


def power_sum(const double complex[:] b, const double complex[:] logz, double complex s):
    cdef Py_ssize_t i, n = b.shape[0]
    cdef double complex acc = 0
    with nogil:
        for i in range(n):
            acc = acc + b[i] * _cexp(s * logz[i])
    return complex(acc)


def lerch_sum(const double complex[:] a, const double complex[:] z, int k,
              double complex s, long n0, long n1):
    cdef long n
    cdef int j
    cdef double twopi = 2.0 * M_PI
    cdef double sr = s.real, si = s.imag
    cdef double accr = 0.0, acci = 0.0
    cdef double wr, wi, lm, ar, mag, ph, e
    cdef bint real_phase = si == 0.0
    for j in range(k):
        if a[j].real != 0.0:
            real_phase = False
    with nogil:
        for n in range(n0, n1):
            j = (n - 1) % k
            wr = n + z[j].real
            wi = z[j].imag
            if wi == 0.0 and wr > 0.0:
                lm = log(wr)
                ar = 0.0
            else:
                lm = 0.5 * log(wr * wr + wi * wi)
                ar = atan2(wi, wr)
            mag = -twopi * n * a[j].imag - sr * lm + si * ar
            if real_phase and ar == 0.0:
                accr = accr + exp(mag)
            else:
                ph = twopi * fmod(n * a[j].real, 1.0) - si * lm - sr * ar
                e = exp(mag)
                accr = accr + e * cos(ph)
                acci = acci + e * sin(ph)
    return complex(accr, acci)


def powexp_sum(double complex cb, double tb, double pb, double qb,
               double complex cz, double tz, double pz, double qz,
               double complex s, long n0, long n1):
    cdef long n
    cdef double lnn, arg, base_arg_b, base_arg_z, lmod_b, lmod_z
    cdef double complex acc = 0, logb, logz
    cdef double twopi = 2.0 * M_PI
    if cb == 0:
        return 0j
    lmod_b = log(hypot(cb.real, cb.imag))
    base_arg_b = atan2(cb.imag, cb.real)
    lmod_z = log(hypot(cz.real, cz.imag))
    base_arg_z = atan2(cz.imag, cz.real)
    with nogil:
        for n in range(n0, n1):
            lnn = log(<double>n)
            logb = (lmod_b - pb * lnn - qb * n) + 1j * (base_arg_b + twopi * fmod(tb * n, 1.0))
            arg = _wrap(base_arg_z + twopi * fmod(tz * n, 1.0))
            logz = (lmod_z - pz * lnn - qz * n) + 1j * arg
            acc = acc + _cexp(logb + s * logz)
    return complex(acc)


def hankel_sum(const double complex[:] lam, const double complex[:] loglam,
               const double complex[:] w, double complex s, double complex c,
               double complex L, double k, bint deriv):
    cdef Py_ssize_t i, n = lam.shape[0]
    cdef double complex acc = 0, term, den
    with nogil:
        for i in range(n):
            den = -_cexpm1(L - k * lam[i])
            term = w[i] * _cexp((s - 1.0) * loglam[i] - c * lam[i]) / den
            if deriv:
                term = term * loglam[i]
            acc = acc + term
    return complex(acc)


def taylor_moments(const double complex[:] base, const double complex[:] ratio, int m_max):
    """Return [sum_n base_n * ratio_n**m for m = 1..m_max]."""
    cdef Py_ssize_t i, n = base.shape[0]
    cdef int m
    out = np.zeros(m_max, dtype=np.complex128)
    cdef double complex[:] o = out
    cdef double complex p
    with nogil:
        for i in range(n):
            p = base[i]
            for m in range(m_max):
                p = p * ratio[i]
                o[m] = o[m] + p
    return out
