"""Hankel-contour continuation of the k-periodic cut to all s.

Each residue class j contributes

    C_j(s) = e^{2 pi i j a_j} I^j(s) / ((e^{2 pi i s} - 1) Gamma(s)),

    I^j(s) = int_{C_rho} lam^{s-1} e^{-(j+z_j) lam} / (1 - e^{2 pi i k a_j - k lam}) dlam,

where C_rho comes in along arg 0, circles the origin counterclockwise at
radius rho and leaves along arg 2 pi.  The two rays combine into
(e^{2 pi i s} - 1) R(s) with R the single-ray integral.  The prefactor is
evaluated as Gamma(1-s) e^{-i pi s} / (2 pi i), which stays finite at
s = 0, -1, -2, ...; near positive integers the quotient is expanded about
the integer so no 0/0 is ever formed numerically.
"""

from dataclasses import dataclass, field
import cmath
import math

import numpy as np

from . import _kernels
from .errors import ContourCollisionError, DomainError, PoleError
from .quadrature import adaptive_panels
from .series import EvalResult, eval_zeta_k_series, pole_result

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------- Gamma

_LG = 607.0 / 128.0
_LC = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_LN_SQRT_2PI = 0.5 * math.log(TWO_PI)


def _sin_pi(s):
    """sin(pi s) with the integer part removed exactly."""
    n = round(s.real)
    v = cmath.sin(math.pi * (s - n))
    return -v if n % 2 else v


def _lanczos_log(s):
    # log Gamma(s) for Re s >= 1/2
    z = s - 1.0
    acc = _LC[0]
    for i in range(1, len(_LC)):
        acc += _LC[i] / (z + i)
    t = z + _LG + 0.5
    return _LN_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma(s):
    """Euler Gamma via Lanczos (g = 607/128) plus reflection."""
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == round(s.real):
        raise PoleError(f"Gamma has a pole at {s.real:g}")
    if s.real < 0.5:
        return math.pi / (_sin_pi(s) * gamma(1.0 - s))
    if s.imag == 0 and s.real == round(s.real) and s.real <= 171:
        return complex(math.factorial(int(s.real) - 1))
    return cmath.exp(_lanczos_log(s))


def _expm1(w):
    w = complex(w)
    sh = math.sin(0.5 * w.imag)
    return complex(math.expm1(w.real) * math.cos(w.imag) - 2.0 * sh * sh, math.exp(w.real) * math.sin(w.imag))


def _phi1(x):
    """expm1(x)/x, elementwise, equal to 1 at 0."""
    x = np.asarray(x, dtype=np.complex128)
    out = np.ones_like(x)
    big = np.abs(x) > 1e-5
    xb = x[big]
    sh = np.sin(0.5 * xb.imag)
    em = (np.expm1(xb.real) * np.cos(xb.imag) - 2.0 * sh * sh) + 1j * (np.exp(xb.real) * np.sin(xb.imag))
    out[big] = em / xb
    xs = x[~big]
    out[~big] = 1.0 + xs / 2.0 + xs * xs / 6.0
    return out


# ---------------------------------------------------------------- contour parameters


@dataclass(frozen=True)
class ContourSpec:
    rho: float = 0.5
    ray_len: float | None = None  # None: chosen from the integrand decay
    circle_nodes: int = 24  # Gauss-Legendre order per circle panel
    ray_nodes: int = 20  # Gauss-Legendre order per ray panel
    bump: tuple | None = None  # (u, eps): semicircle over the real axis at u
    phi: float | None = None  # ray rotation; None picks it from Im s

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if self.bump is not None:
            u, eps = self.bump
            if not (0 < eps < u / 2):
                raise ValueError("bump needs 0 < eps < u/2")


@dataclass
class BranchRecord:
    """Continuous arguments along a path and the winding accumulated per coordinate."""

    args: np.ndarray
    start_args: np.ndarray
    windings: np.ndarray = field(default=None)

    def __post_init__(self):
        self.args = np.asarray(self.args, dtype=np.float64)
        self.start_args = np.asarray(self.start_args, dtype=np.float64)
        if self.windings is None:
            self.windings = (self.args - self.start_args) / TWO_PI


def _poles_near(aj, k, radius):
    """Integrand poles 2 pi i (a_j - l/k) with modulus <= radius."""
    aj = complex(aj)
    # |2 pi i (a - l/k)| <= radius  =>  |Re a - l/k| <= radius / (2 pi)
    lo = math.floor(k * (aj.real - radius / TWO_PI)) - 1
    hi = math.ceil(k * (aj.real + radius / TWO_PI)) + 1
    out = []
    for l in range(lo, hi + 1):
        lam = TWO_PI_I * (aj - l / k)
        if abs(lam) <= radius:
            out.append(lam)
    return out


def _pole_gap(aj, k):
    d = math.inf
    for lam in _poles_near(aj, k, 1.0):
        if abs(lam) > 1e-9:
            d = min(d, abs(lam))
    return d


def choose_rho(p):
    """min(0.5, d/2, pi/k) with d the nearest nonzero integrand pole inside |lam| <= 1."""
    d = min(_pole_gap(p.a_eff(j), p.k) for j in range(1, p.k + 1))
    return min(0.5, d / 2.0, math.pi / p.k)


# ---------------------------------------------------------------- integrands


def _reduced_L(aj, k):
    """2 pi i k a_j with the real part of k a_j reduced mod 1 (same exponential)."""
    aj = complex(aj)
    x = k * aj.real
    return complex(-TWO_PI * k * aj.imag, TWO_PI * (x - round(x)))


class _Integrand:
    def __init__(self, c, L, k, s, deriv=False):
        self.c = complex(c)
        self.L = complex(L)
        self.k = float(k)
        self.s = complex(s)
        self.deriv = bool(deriv)

    def ray(self, phi, branch):
        """Panel sum over lam = r e^{i phi}, arg lam = branch."""
        rot = cmath.exp(1j * phi)

        def ps(r, w):
            lam = np.ascontiguousarray(r * rot)
            loglam = np.ascontiguousarray(np.log(r) + 1j * branch)
            ww = np.ascontiguousarray(w * rot + 0j)
            return _kernels.hankel_sum(lam, loglam, ww, self.s, self.c, self.L, self.k, self.deriv)

        return ps

    def circle(self, rho, extra=None):
        """Panel sum over theta with lam = rho e^{i theta}; ``extra`` multiplies the weights."""
        lr = math.log(rho)

        def ps(th, w):
            lam = rho * np.exp(1j * th)
            loglam = lr + 1j * th
            ww = w * 1j * lam
            if extra is not None:
                ww = ww * extra(loglam)
            return _kernels.hankel_sum(np.ascontiguousarray(lam), np.ascontiguousarray(loglam),
                                       np.ascontiguousarray(ww), self.s, self.c, self.L, self.k, self.deriv)

        return ps


def _ray_length(c_re, sigma, start):
    """T with r^(sigma-1) e^{-c_re r} negligible (1e-19) relative to its peak beyond ``start``."""
    if c_re <= 0:
        raise DomainError("integrand does not decay along the ray")
    a = max(sigma - 1.0, 0.0)
    peak_r = max(start, a / c_re)
    log_peak = a * math.log(peak_r) - c_re * peak_r if peak_r > 0 else 0.0
    T = max(2.0 * peak_r, start + 1.0)
    while a * math.log(T) - c_re * T > log_peak - 44.0:
        T *= 1.25
    return T


def _ray_breakpoints(start, T, scale):
    pts = [start]
    while pts[-1] < T:
        pts.append(min(T, pts[-1] + min(max(0.25 * pts[-1], 0.05), scale)))
    return pts


def _choose_phi(a_imags, cs, s, spec):
    """Ray rotation that removes the e^{pi |Im s| / 2} cancellation on the rays.

    Allowed only when every Im a_j >= 0 (no poles in the swept sector) and
    kept so that e^{-c lam} still decays on the rotated rays.
    """
    if spec.phi is not None:
        return spec.phi
    t = complex(s).imag
    if abs(t) < 2.0 or min(a_imags) < 0:
        return 0.0
    phi = math.copysign(min(math.pi / 2 - 0.35, 0.08 * abs(t)), t)
    for c in cs:
        room = math.pi / 2 - 0.15 - math.copysign(1.0, phi) * cmath.phase(c)
        if abs(phi) > room:
            phi = math.copysign(max(room, 0.0), phi)
    return phi


def _check_collision(aj, k, rho, phi, guard, with_rays=True):
    R = max(4.0, 2 * rho)
    for lam in _poles_near(aj, k, R):
        r = abs(lam)
        if abs(r - rho) < guard:
            raise ContourCollisionError(f"pole {lam:.6g} within {guard:g} of the circle |lam| = {rho:g}")
        if with_rays and r > rho:
            ang = cmath.phase(lam * cmath.exp(-1j * phi))
            if abs(ang) < 1e-300 or r * abs(math.sin(ang)) < guard and math.cos(ang) > 0:
                raise ContourCollisionError(f"pole {lam:.6g} lies on the integration ray")


# ---------------------------------------------------------------- the loop integral


def _hankel_parts(j, aj, zj, s, spec, k, tol, phi, deriv=False, circle_extra=None, s_power=None):
    """(circle, R, err): circle piece and single incoming-ray integral R."""
    c = j + complex(zj)
    L = _reduced_L(aj, k)
    sp = complex(s) if s_power is None else complex(s_power)
    f = _Integrand(c, L, k, sp, deriv)
    rho = spec.rho
    ang = np.linspace(phi, phi + TWO_PI, 9)
    circ, e1 = adaptive_panels(f.circle(rho, circle_extra), ang, tol, order=spec.circle_nodes, rel=1e-15)
    c_rot = (c * cmath.exp(1j * phi)).real
    T = spec.ray_len or _ray_length(c_rot, sp.real, rho)
    bp = _ray_breakpoints(rho, T, min(2.0, 4.0 / max(abs(c), k)))
    R, e2 = adaptive_panels(f.ray(phi, phi), bp, tol, order=spec.ray_nodes, rel=1e-15)
    return circ, R, e1 + e2


def hankel_I(j, a_j, z_j, s, c=None, k=1, tol=1e-13):
    """Loop integral I^j(s) over C_rho (arg 0 in, arg 2 pi out).

    Without ``c`` the radius follows the choose_rho rule for this a_j alone.
    """
    spec = c or ContourSpec(rho=min(0.5, _pole_gap(a_j, k) / 2.0, math.pi / k))
    s = complex(s)
    if (j + complex(z_j)).real <= 0:
        raise DomainError("need Re(j + z_j) > 0")
    phi = _choose_phi([complex(a_j).imag], [j + complex(z_j)], s, spec)
    _check_collision(a_j, k, spec.rho, phi, 1e-3 * spec.rho)
    circ, R, _ = _hankel_parts(j, a_j, z_j, s, spec, k, tol, phi)
    return circ + _e2pis_m1(s) * R


def _e2pis_m1(s):
    n = round(s.real)
    return _expm1(TWO_PI_I * (s - n))


def _straight_ray(j, aj, zj, s, k, tol, pieces):
    """Integral of the J^j integrand over a polyline/arc path described by ``pieces``."""
    c = j + complex(zj)
    L = _reduced_L(aj, k)
    f = _Integrand(c, L, k, complex(s))
    total = 0j
    for kind, args in pieces:
        if kind == "seg":
            lo, hi = args
            if lo == 0.0:
                bp = [0.0] + [hi * 2.0 ** (-m) for m in range(60, 0, -1)] + [hi]
            else:
                bp = _ray_breakpoints(lo, hi, 1.0)
            v, _ = adaptive_panels(f.ray(0.0, 0.0), bp, tol, order=20, rel=1e-15)
            total += v
        else:  # arc lam = u + eps e^{i th}, th from th0 to th1
            u, eps, th0, th1 = args

            def ps(th, w, u=u, eps=eps):
                lam = u + eps * np.exp(1j * th)
                ww = w * 1j * eps * np.exp(1j * th)
                return _kernels.hankel_sum(np.ascontiguousarray(lam), np.ascontiguousarray(np.log(lam)),
                                           np.ascontiguousarray(ww), f.s, f.c, f.L, f.k, False)

            lo, hi = (th0, th1) if th0 < th1 else (th1, th0)
            v, _ = adaptive_panels(ps, np.linspace(lo, hi, 9), tol, order=24, rel=1e-15)
            total += v if th0 < th1 else -v
    return total


def hankel_J(j, a_j, z_j, s, k=1, tol=1e-13, ray_len=None):
    """Straight ray integral over (0, inf); needs Re s > 0 (Re s > 1 if a_j in Z[1/k])."""
    c = j + complex(z_j)
    T = ray_len or _ray_length(c.real, complex(s).real, 1.0)
    _check_collision(a_j, k, 0.0, 0.0, 1e-9)
    return _straight_ray(j, a_j, z_j, s, k, tol, [("seg", (0.0, T))])


def hankel_I_deformed(j, a_j, z_j, s, c, k=1, tol=1e-13):
    """Ray integral over [0, u-eps] + upper semicircle about u + [u+eps, inf)."""
    if c.bump is None:
        raise ValueError("ContourSpec.bump is required")
    u, eps = c.bump
    for lam in _poles_near(a_j, k, u + 2 * eps + 1.0):
        if abs(abs(lam - u) - eps) < 1e-6 * eps:
            raise ContourCollisionError(f"pole {lam:.6g} on the bump")
        if abs(lam.imag) < 1e-12 and lam.real > 0 and abs(lam - u) > eps:
            raise ContourCollisionError(f"pole {lam:.6g} on the real ray")
    cc = j + complex(z_j)
    T = c.ray_len or max(_ray_length(cc.real, complex(s).real, u + eps), u + eps + 1.0)
    pieces = [("seg", (0.0, u - eps)), ("arc", (u, eps, math.pi, 0.0)), ("seg", (u + eps, T))]
    return _straight_ray(j, a_j, z_j, s, k, tol, pieces)


# ---------------------------------------------------------------- zeta_k


def _near_int_gamma_delta(n, delta):
    """delta * Gamma(1 - n - delta) for integer n >= 1."""
    prod = 1.0 + 0j
    for m in range(1, n):
        prod *= (-m - delta)
    return -gamma(1.0 - delta) / prod


def _components(p, s, tol, spec, phi, indices=None):
    """Loop-integral pieces for the classes in ``indices`` (default all).

    Returns (terms, errs, S0, near, n, delta).  Away from positive integers
    each term is (e_j, I^j(s)).  For s = n + delta near a positive integer n
    each term is (e_j, (I^j(s) - I^j(n)) / delta) and S0 = sum e_j I^j(n),
    which is exact: 2 pi i / k per class with a_j in Z[1/k] when n = 1, else 0.
    """
    k = p.k
    s = complex(s)
    n = round(s.real)
    delta = s - n
    near = n >= 1 and abs(delta) < 0.25
    idx = range(1, k + 1) if indices is None else indices
    if near:
        scale = abs(_near_int_gamma_delta(n, delta) * cmath.exp(-1j * math.pi * s)) / TWO_PI
    else:
        scale = abs(gamma(1.0 - s) * cmath.exp(-1j * math.pi * s)) / TWO_PI
    qtol = tol * 0.05 / max(scale, 1e-300) / len(idx)
    terms, errs = [], []
    S0 = 0j
    for j in idx:
        aj, zj = p.a_eff(j), p.z[j - 1]
        ej = cmath.exp(TWO_PI_I * j * aj)
        if (j + zj).real <= 0:
            raise DomainError(f"need Re(j + z_j) > 0 for the loop integral (j={j})")
        _check_collision(aj, k, spec.rho, phi, 1e-3 * spec.rho)
        if near:
            if n == 1 and p.rational_l(j) is not None:
                S0 += ej * TWO_PI_I / k
            v, ec = _hankel_parts_split(j, aj, zj, s, n, delta, spec, k, qtol, phi)
        else:
            circ, R, ec = _hankel_parts(j, aj, zj, s, spec, k, qtol, phi)
            v = circ + _e2pis_m1(s) * R
        terms.append((ej, v))
        errs.append(ec)
    return terms, errs, S0, near, n, delta


def _hankel_parts_split(j, aj, zj, s, n, delta, spec, k, tol, phi):
    """(I(s) - I(n)) / delta for s = n + delta, computed without cancellation."""
    c = j + complex(zj)
    L = _reduced_L(aj, k)
    fc = _Integrand(c, L, k, complex(n))
    ang = np.linspace(phi, phi + TWO_PI, 9)
    extra = lambda ll: ll * _phi1(delta * ll)
    circ, e1 = adaptive_panels(fc.circle(spec.rho, extra), ang, tol, order=spec.circle_nodes, rel=1e-15)
    fr = _Integrand(c, L, k, complex(s))
    c_rot = (c * cmath.exp(1j * phi)).real
    T = spec.ray_len or _ray_length(c_rot, complex(s).real, spec.rho)
    bp = _ray_breakpoints(spec.rho, T, min(2.0, 4.0 / max(abs(c), k)))
    R, e2 = adaptive_panels(fr.ray(phi, phi), bp, tol, order=spec.ray_nodes, rel=1e-15)
    fac = TWO_PI_I * complex(_phi1(TWO_PI_I * delta))
    return circ + fac * R, e1 + abs(fac) * e2


def _combine(terms, errs, S0, near, n, delta, s):
    total = sum(ej * v for ej, v in terms)
    err = sum(errs)
    ph = cmath.exp(-1j * math.pi * s) / TWO_PI_I
    if near:
        dG = _near_int_gamma_delta(n, delta)
        value = dG * ph * total
        err_v = abs(dG * ph) * err
        if S0 != 0:
            value += (dG / delta) * ph * S0
        return value, err_v
    g = gamma(1.0 - s)
    return g * ph * total, abs(g * ph) * err


def _spec_for(p, spec):
    rho = choose_rho(p)
    if spec is None:
        return ContourSpec(rho=rho)
    return spec


def eval_component(j, p, s, tol=1e-12, spec=None):
    """C_j(s) = sum_{q>=0} e^{2 pi i (qk+j) a_j} (qk+j+z_j)^-s, continued in s."""
    s = complex(s)
    spec = _spec_for(p, spec)
    phi = _choose_phi([complex(x).imag for x in p.a], [j + p.z[j - 1]], s, spec)
    terms, errs, S0, near, n, delta = _components(p, s, tol, spec, phi, [j])
    if near and delta == 0 and S0 != 0:
        return pole_result(S0 / TWO_PI_I)
    v, e = _combine(terms, errs, S0, near, n, delta, s)
    return EvalResult(v, e, "contour")


def eval_zeta_k(p, s, tol=1e-10, spec=None, method="auto", cross_check=True):
    """zeta_k(a, z, s) on all of C.

    ``method``: "auto" uses the series for Re s > 1.5 (cross-checked against
    the contour when ``cross_check``), "contour" or "series" force a route.
    At s = 1 with a nonzero residue a pole record is returned.
    """
    s = complex(s)
    p.check_z()
    if method == "series" or (method == "auto" and s.real > 1.5 and all(complex(x).imag >= 0 for x in p.a)):
        r = eval_zeta_k_series(p, s, tol)
        if method == "auto" and cross_check and s.real <= 12:
            try:
                rc = eval_zeta_k(p, s, tol, spec, method="contour")
                r = EvalResult(r.value, max(r.err, min(abs(rc.value - r.value), 1e300)), "series", r.terms_used)
            except (DomainError, ContourCollisionError):
                pass
        return r
    spec = _spec_for(p, spec)
    phi = _choose_phi([complex(x).imag for x in p.a], [j + p.z[j - 1] for j in range(1, p.k + 1)], s, spec)
    terms, errs, S0, near, n, delta = _components(p, s, tol, spec, phi)
    if near and delta == 0 and S0 != 0:
        return pole_result(S0 / TWO_PI_I)
    v, e = _combine(terms, errs, S0, near, n, delta, s)
    return EvalResult(v, e, "contour")
