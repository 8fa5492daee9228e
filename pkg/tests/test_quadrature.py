import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from llzeta import _kernels, _pykernels
from llzeta.quadrature import adaptive_panels, gauss_legendre, geometric_breakpoints, trapezoid_circle


def _ps(f):
    return lambda x, w: complex(np.sum(w * f(x)))


def test_gauss_legendre_exact_on_polynomials():
    x, w = gauss_legendre(10)
    for d in range(20):
        assert np.sum(w * x ** d) == pytest.approx((1 + (-1) ** d) / (d + 1), abs=1e-14)
    with pytest.raises(ValueError):
        x[0] = 0.0


def test_adaptive_panels():
    v, err = adaptive_panels(_ps(lambda t: np.exp(1j * t) / (1 + t * t)), [0, 1, 5, 40], 1e-12)
    # no elementary closed form; compare against a fine fixed rule
    x, w = gauss_legendre(400)
    ref = sum(_panel_ref(lambda t: np.exp(1j * t) / (1 + t * t), a, a + 1, x, w) for a in range(40))
    assert abs(v - ref) < 1e-11
    assert err < 1e-11
    v, _ = adaptive_panels(_ps(np.sqrt), [0, 1], 1e-10)
    assert v.real == pytest.approx(2 / 3, abs=1e-9)


def _panel_ref(f, lo, hi, x, w):
    h = 0.5 * (hi - lo)
    return np.sum(h * w * f(lo + h * (x + 1)))


def test_geometric_breakpoints():
    bp = geometric_breakpoints(0.0, 10.0, first=1.0)
    assert bp == [0.0, 1.0, 3.0, 7.0, 10.0]


def test_trapezoid_circle_residue():
    assert trapezoid_circle(lambda s: 1 / (s - 0.3), 0.3, 0.1, 16) == pytest.approx(1.0, abs=1e-14)
    assert abs(trapezoid_circle(lambda s: s ** 3, 0, 1, 16)) < 1e-15
    assert trapezoid_circle(lambda s: np.exp(s) / s ** 2, 0, 0.5, 32) == \
        pytest.approx(1.0, abs=1e-14)


# ---------------------------------------------------------------- backends

needs_c = pytest.mark.skipif(not hasattr(_kernels, "_impl") or _kernels.BACKEND != "cython",
                             reason="compiled kernels not built")


@pytest.fixture
def ckernels():
    from llzeta import _ckernels
    return _ckernels


@needs_c
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.floats(-3, 3), st.floats(-5, 5), st.integers(0, 2 ** 32 - 1))
def test_power_and_moment_parity(n, sr, si, seed):
    from llzeta import _ckernels
    rng = np.random.default_rng(seed)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    logz = -np.log(np.arange(1, n + 1)) + 1j * rng.uniform(-3, 3, n)
    s = complex(sr, si)
    ref = _pykernels.power_sum(b, logz, s)
    assert abs(_ckernels.power_sum(b, logz, s) - ref) <= 1e-12 * (1 + np.sum(np.abs(b * np.exp(s * logz))))
    u = 0.5 * np.exp(1j * rng.uniform(-3, 3, n))
    m1 = _pykernels.taylor_moments(b, u, 8)
    m2 = _ckernels.taylor_moments(b, u, 8)
    assert np.allclose(m1, m2, rtol=1e-12, atol=1e-14)


@needs_c
def test_series_kernel_parity(ckernels):
    a = np.array([0.3 + 0.05j, 0.71])
    z = np.array([0.2, 0.4 + 0.1j])
    for s in (2.5, 1.5 + 3j):
        p = _pykernels.lerch_sum(a, z, 2, s, 1, 5000)
        c = ckernels.lerch_sum(a, z, 2, s, 1, 5000)
        assert abs(p - c) < 1e-12 * max(1, abs(p))
    args = (1.0 + 0.5j, 0.25, 1.0, 0.0, 2.0, 0.1, 1.0, 0.0, 1.5 + 1j, 1, 3000)
    assert abs(_pykernels.powexp_sum(*args) - ckernels.powexp_sum(*args)) < 1e-12


@needs_c
def test_hankel_kernel_parity(ckernels):
    t = np.linspace(0.01, 30, 200)
    lam = t * np.exp(0.3j)
    loglam = np.log(t) + 0.3j
    w = np.full(t.shape, 30 / 200, dtype=np.complex128)
    for deriv in (0, 1):
        p = _pykernels.hankel_sum(lam, loglam, w, 0.5 + 2j, 1.2 + 0j, 0.4 + 1j, 2, deriv)
        c = ckernels.hankel_sum(lam, loglam, w, 0.5 + 2j, 1.2 + 0j, 0.4 + 1j, 2, deriv)
        assert abs(p - c) < 1e-12 * max(1, abs(p))


@needs_c
def test_use_backend_switches_and_restores():
    from llzeta.contour import eval_zeta_k
    from llzeta.series import PeriodicParams
    p = PeriodicParams(2, (0.3, 0.7j), (0.0, 0.1))
    prev = _kernels.use_backend("python")
    try:
        assert _kernels.BACKEND == "python"
        slow = eval_zeta_k(p, 3.0, tol=1e-12)
    finally:
        _kernels.use_backend(prev)
    fast = eval_zeta_k(p, 3.0, tol=1e-12)
    assert abs(slow.value - fast.value) < 1e-12
    with pytest.raises(ValueError):
        _kernels.use_backend("fortran")
