"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``."""

import numpy as np

_CHUNK = 1 << 16


def _cexpm1(w):
    sh = np.sin(0.5 * w.imag)
    return (np.expm1(w.real) * np.cos(w.imag) - 2.0 * sh * sh) + 1j * (np.exp(w.real) * np.sin(w.imag))


def power_sum(b, logz, s):
    b = np.asarray(b, dtype=np.complex128)
    logz = np.asarray(logz, dtype=np.complex128)
    return complex(np.sum(b * np.exp(s * logz)))


def lerch_sum(a, z, k, s, n0, n1):
    a = np.asarray(a, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    acc = 0j
    for lo in range(n0, n1, _CHUNK):
        n = np.arange(lo, min(lo + _CHUNK, n1), dtype=np.int64)
        j = (n - 1) % k
        aj = a[j]
        nf = n.astype(np.float64)
        phase = -2 * np.pi * nf * aj.imag + 2j * np.pi * np.fmod(nf * aj.real, 1.0)
        acc += complex(np.sum(np.exp(phase - s * np.log(nf + z[j]))))
    return acc


def powexp_sum(cb, tb, pb, qb, cz, tz, pz, qz, s, n0, n1):
    if cb == 0:
        return 0j
    lmod_b, arg_b = np.log(abs(cb)), np.angle(cb)
    lmod_z, arg_z = np.log(abs(cz)), np.angle(cz)
    acc = 0j
    for lo in range(n0, n1, _CHUNK):
        n = np.arange(lo, min(lo + _CHUNK, n1), dtype=np.float64)
        lnn = np.log(n)
        logb = (lmod_b - pb * lnn - qb * n) + 1j * (arg_b + 2 * np.pi * np.fmod(tb * n, 1.0))
        arg = arg_z + 2 * np.pi * np.fmod(tz * n, 1.0)
        arg = np.pi - np.mod(np.pi - arg, 2 * np.pi)
        logz = (lmod_z - pz * lnn - qz * n) + 1j * arg
        acc += complex(np.sum(np.exp(logb + s * logz)))
    return acc


def hankel_sum(lam, loglam, w, s, c, L, k, deriv):
    den = -_cexpm1(L - k * lam)
    term = w * np.exp((s - 1.0) * loglam - c * lam) / den
    if deriv:
        term = term * loglam
    return complex(np.sum(term))


def taylor_moments(base, ratio, m_max):
    base = np.asarray(base, dtype=np.complex128)
    ratio = np.asarray(ratio, dtype=np.complex128)
    out = np.zeros(m_max, dtype=np.complex128)
    p = base.copy()
    for m in range(m_max):
        p = p * ratio
        out[m] = np.sum(p)
    return out
