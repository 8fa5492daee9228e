"""Residues, monodromies and path continuation."""

import cmath
import math

import numpy as np

from .contour import ContourSpec, BranchRecord, eval_component, eval_zeta_k, hankel_I_deformed, hankel_J
from .errors import ConventionError, ConvergenceDomainError, DomainError, StepRefinementError
from .quadrature import adaptive_panels, trapezoid_circle
from .seqspace import TruncatedSeq, unwrap_args
from .series import EvalResult, PeriodicParams, eval_er_series, eval_zeta_k_series

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------- residue at s = 1


def residue_formula(p):
    """(1/k) sum over j with a_j in Z[1/k] of e^{2 pi i j a_j}."""
    tot = 0j
    for j in range(1, p.k + 1):
        l = p.rational_l(j)
        if l is not None:
            tot += cmath.exp(TWO_PI_I * j * l / p.k)
    return tot / p.k


def residue_numeric(p, radius=0.25, tol=1e-12, nodes=64):
    """(1/2 pi i) times the integral of zeta_k over |s - 1| = radius, by the trapezoidal rule."""
    if not 0 < radius < 0.5:
        raise ValueError("radius must lie in (0, 1/2)")
    return trapezoid_circle(lambda s: eval_zeta_k(p, s, tol, method="contour").value, 1.0, radius, nodes)


# ---------------------------------------------------------------- z-monodromy


def _excluded(k, j, pblock):
    return -(pblock * k + j)


def monodromy_z_formula(p, s, j, pblock):
    """Change of zeta_k after z_j winds once positively around -(pk+j)."""
    s = complex(s)
    zj = p.z[j - 1]
    w = pblock * p.k + j + zj
    if w == 0:
        raise DomainError("basepoint lies on the excluded hyperplane")
    aj = p.a_eff(j)
    n = pblock * p.k + j
    coef = cmath.exp(-TWO_PI * n * aj.imag + 1j * TWO_PI * math.fmod(n * aj.real, 1.0))
    sn = s - round(s.real)
    return coef * cmath.exp(-s * cmath.log(w)) * _expm1c(-TWO_PI_I * sn)


def _expm1c(w):
    sh = math.sin(0.5 * w.imag)
    return complex(math.expm1(w.real) * math.cos(w.imag) - 2.0 * sh * sh, math.exp(w.real) * math.sin(w.imag))


class ZContinuation:
    """Continue zeta_k(a, z, s) along a path z(t) in C^k.

    Each class j is split into head terms q < Q_j, whose powers
    (qk+j+z_j)^-s are followed with a continuously tracked logarithm, and a
    tail that is holomorphic (hence single-valued) on the half-plane
    Re(Q_j k + j + z_j) > 0 containing the whole path.
    """

    def __init__(self, p, s, path, tol=1e-12, min_samples=64, max_samples=1 << 16):
        self.p = p
        self.s = complex(s)
        self.tol = tol
        self.path = path
        k = p.k
        m = min_samples
        while True:
            t = np.linspace(0.0, 1.0, m + 1)
            Z = np.asarray(path(t), dtype=np.complex128)  # (m+1, k)
            self.Q = [max(0, math.ceil((0.75 - j - Z[:, j - 1].real.min()) / k)) for j in range(1, k + 1)]
            W = [Z[:, j - 1][:, None] + (np.arange(self.Q[j - 1]) * k + j)[None, :] for j in range(1, k + 1)]
            steps = [np.abs(np.angle(w[1:] / w[:-1])).max() if w.size else 0.0 for w in W]
            if max(steps, default=0.0) <= math.pi / 2:
                break
            if m >= max_samples:
                raise StepRefinementError("path passes too close to an excluded point")
            m *= 2
        for w in W:
            if np.any(w == 0):
                raise DomainError("path hits an excluded hyperplane")
        self.Z = Z
        self.logs = []
        for w in W:
            if w.shape[1] == 0:
                self.logs.append(np.zeros((Z.shape[0], 0)))
                continue
            arg = np.angle(w[0]) + np.concatenate([np.zeros((1, w.shape[1])), np.cumsum(np.angle(w[1:] / w[:-1]), axis=0)])
            self.logs.append(np.log(np.abs(w)) + 1j * arg)

    def _head(self, i):
        p, s, k = self.p, self.s, self.p.k
        total = 0j
        for j in range(1, k + 1):
            aj = p.a_eff(j)
            Q = self.Q[j - 1]
            if Q:
                n = np.arange(Q) * k + j
                coef = np.exp(-TWO_PI * n * aj.imag + 1j * TWO_PI * np.fmod(n * aj.real, 1.0))
                total += complex(np.sum(coef * np.exp(-s * self.logs[j - 1][i])))
        return total

    def _tail(self, i):
        p, s, k = self.p, self.s, self.p.k
        z = tuple(complex(x) for x in self.Z[i])
        total = 0j
        err = 0.0
        for j in range(1, k + 1):
            aj = p.a_eff(j)
            Q = self.Q[j - 1]
            shifted = list(z)
            shifted[j - 1] = z[j - 1] + Q * k
            q = PeriodicParams(k, p.a, tuple(shifted))
            n0 = Q * k
            shift = cmath.exp(-TWO_PI * n0 * aj.imag + 1j * TWO_PI * math.fmod(n0 * aj.real, 1.0))
            r = _component(q, j, s, self.tol)
            total += shift * r.value
            err += abs(shift) * r.err
        return total, err

    def value_at(self, i):
        """Continued value at sample index i (0 = start, -1 = end)."""
        tail, err = self._tail(i)
        return EvalResult(self._head(i) + tail, err, "contour")

    def monodromy(self):
        """end - start; on a closed loop the single-valued tails cancel exactly and are skipped."""
        if np.array_equal(self.Z[0], self.Z[-1]):
            return EvalResult(self._head(-1) - self._head(0), 0.0, "contour")
        a, b = self.value_at(0), self.value_at(-1)
        return EvalResult(b.value - a.value, a.err + b.err, "contour")


def _component(p, j, s, tol):
    if s.real > 1.5 and all(complex(x).imag >= 0 for x in p.a):
        return eval_zeta_k_series(p, s, tol, indices=[j])
    return eval_component(j, p, s, tol)


def lasso_loop(z0, center, radius, turns=1):
    """Scalar loop: z0 -> center + i radius (above the axis), circle ``turns`` times, back."""
    z0 = complex(z0)
    top = center + 1j * radius
    lift = complex(z0.real, radius) if abs(z0.imag) < radius else z0

    def seg(t):
        t = np.asarray(t)
        out = np.empty(t.shape, dtype=np.complex128)
        # five phases of equal parameter length
        u = t * 5.0
        ph = np.minimum(u.astype(int), 4)
        f = u - ph
        pts = [z0, lift, top]
        go = [(pts[0], pts[1]), (pts[1], pts[2])]
        for i, (A, B) in enumerate(go):
            m = ph == i
            out[m] = A + (B - A) * f[m]
        m = ph == 2
        out[m] = center + 1j * radius * np.exp(1j * TWO_PI * turns * f[m])
        back = [(pts[2], pts[1]), (pts[1], pts[0])]
        for i, (A, B) in enumerate(back):
            m = ph == 3 + i
            out[m] = A + (B - A) * f[m]
        return out

    return seg


def _coordinate_path(p, j, scalar_path):
    z = np.array(p.z, dtype=np.complex128)

    def path(t):
        Z = np.broadcast_to(z, (np.size(t), p.k)).copy()
        Z[:, j - 1] = scalar_path(t)
        return Z

    return path


def monodromy_z_numeric(p, s, j, pblock, loop_samples=64, radius=0.25, tol=1e-12):
    """end - start of zeta_k continued once around z_j = -(pk+j) (positive lasso)."""
    centre = _excluded(p.k, j, pblock)
    if abs(p.z[j - 1] - centre) < radius:
        raise DomainError("basepoint inside the loop disc")
    others = [_excluded(p.k, j, q) for q in range(pblock + 3) if q != pblock]
    if any(abs(o - centre) <= radius for o in others):
        raise DomainError("loop disc contains another excluded point")
    path = _coordinate_path(p, j, lasso_loop(p.z[j - 1], centre, radius))
    return ZContinuation(p, s, path, tol, min_samples=5 * loop_samples).monodromy()


def concat_paths(*paths):
    """Join vector paths t -> (len t, k) on equal parameter sub-intervals."""
    n = len(paths)

    def path(t):
        t = np.asarray(t, dtype=np.float64)
        u = np.minimum((t * n).astype(int), n - 1)
        f = t * n - u
        first = np.asarray(paths[0](np.array([0.0])))
        out = np.empty((t.size, first.shape[1]), dtype=np.complex128)
        for i, pth in enumerate(paths):
            m = u == i
            if m.any():
                out[m] = pth(f[m])
        return out

    return path


def reverse_path(path):
    return lambda t: path(1.0 - np.asarray(t))


def commutator_monodromy(p, s, loops, tol=1e-12, samples=64):
    """Monodromy along g1^-1 g2^-1 g1 g2 for two based loops (vector paths)."""
    g1, g2 = loops
    path = concat_paths(reverse_path(g1), reverse_path(g2), g1, g2)
    return ZContinuation(p, s, path, tol, min_samples=4 * 5 * samples).monodromy()


def z_loop(p, j, pblock, radius=0.25):
    """Vector lasso loop in coordinate j around -(pblock k + j)."""
    return _coordinate_path(p, j, lasso_loop(p.z[j - 1], _excluded(p.k, j, pblock), radius))


# ---------------------------------------------------------------- a-monodromy


def monodromy_a_formula(p, s, j, l):
    """[2 pi (a_j - l/k)]^{s-1} e^{i pi (s-1)/2} e^{-2 pi i (a_j - l/k)(j + z_j)} / k,

    defined on the sector Arg(a_j - l/k) in [-pi/2, 0).
    """
    s = complex(s)
    d = complex(p.a[j - 1]) - l / p.k
    if d == 0:
        raise DomainError("a_j = l/k")
    ang = cmath.phase(d)
    if not (-math.pi / 2 <= ang < 0):
        raise ConventionError(f"Arg(a_j - l/k) = {ang:.4f} outside [-pi/2, 0)")
    return (cmath.exp((s - 1) * cmath.log(TWO_PI * d)) * cmath.exp(1j * math.pi * (s - 1) / 2)
            * cmath.exp(-TWO_PI_I * d * (j + p.z[j - 1])) / p.k)


def a_bump(p, j, l):
    """(u, eps) of a bump enclosing the pole 2 pi i (a_j - l/k) that sits just above the ray."""
    lam0 = TWO_PI_I * (complex(p.a[j - 1]) - l / p.k)
    u = lam0.real
    h = abs(lam0.imag)
    if u <= 0:
        raise ConventionError("pole is not over the positive ray")
    hi = min(u / 2, TWO_PI / p.k - h)
    if not h < hi:
        raise ConventionError("no admissible bump radius for this pole")
    return u, h + 0.5 * (hi - h)


def monodromy_a_numeric(p, s, j, l, tol=1e-13):
    """Straight-ray minus bumped-ray integral for class j (the a-continuation defect)."""
    aj, zj = p.a[j - 1], p.z[j - 1]
    spec = ContourSpec(bump=a_bump(p, j, l))
    return hankel_J(j, aj, zj, s, k=p.k, tol=tol) - hankel_I_deformed(j, aj, zj, s, spec, k=p.k, tol=tol)


# ---------------------------------------------------------------- continuation in the ER variable


def _path_args(path, start_args=None, max_samples=1 << 14):
    m = path.samples_per_segment
    while True:
        v = path.samples(m)
        step = np.abs(np.angle(v[1:] / v[:-1])) if v.shape[0] > 1 else np.zeros(1)
        if np.all(v != 0) and (step.size == 0 or step.max() <= math.pi / 2):
            break
        if np.any(v == 0):
            raise DomainError("path meets the coordinate cross")
        if m >= max_samples:
            raise StepRefinementError("argument steps stay near pi; refine the path")
        m *= 2
    init = np.angle(v[0]) if start_args is None else start_args
    return v, unwrap_args(v, math.pi / 2 + 1e-9, initial=init)


def continue_along_path(b, path, s, tol=1e-10, z_tail=None, start_args=None):
    """Evaluate zeta^ER(b, gamma(1), s) continued along ``path`` from the principal branch.

    Returns the endpoint value and the BranchRecord of continuous arguments.
    """
    s = complex(s)
    if s.real <= 1:
        raise ConvergenceDomainError("continuation along paths uses the series; need Re s > 1")
    v, args = _path_args(path, start_args)
    if np.min(np.abs(v) / path.weight(np.arange(1, v.shape[1] + 1))) <= 0:
        raise DomainError("path meets the closed cross")
    z_end = TruncatedSeq(v[-1], path.weight, z_tail)
    res = eval_er_series(b, z_end, s, tol, args=args[-1])
    return res, BranchRecord(args[-1], args[0])


def path_monodromy(b, path, s, tol=1e-10, z_tail=None):
    """continued end value minus principal start value."""
    end, rec = continue_along_path(b, path, s, tol, z_tail)
    z0 = TruncatedSeq(path.samples(1)[0], path.weight, z_tail)
    start = eval_er_series(b, z0, s, tol, args=rec.start_args)
    return EvalResult(end.value - start.value, end.err + start.err, "series"), rec


# ---------------------------------------------------------------- H0 difference integral


def continue_h0_integral(a, z0, z1, s, tol=1e-10):
    """zeta(a, z1, s) - zeta(a, z0, s) = -s int_0^1 sum_n e^{2 pi i n a_n} dz_n / (n + z_n(t))^{s+1} dt.

    ``a``, ``z0``, ``z1`` have common period k = len(a).  The inner sum is the
    periodic series at s + 1 (convergent for Re s > 0), weighted by dz_j.
    """
    s = complex(s)
    if s.real <= 0:
        raise ConvergenceDomainError("difference integral needs Re s > 0")
    k = len(a)
    z0 = np.asarray(z0, dtype=np.complex128)
    z1 = np.asarray(z1, dtype=np.complex128)
    dz = z1 - z0
    if not np.any(dz):
        return EvalResult(0j, 0.0, "integral")
    # excluded points -(qk+j) with q >= 0: the segment must avoid them, and for
    # head terms whose base crosses the negative axis the principal power jumps
    for j in range(1, k + 1):
        A, B = z0[j - 1], z1[j - 1]
        seg = np.linspace(0.0, 1.0, 2049)
        zz = A + seg * (B - A)
        qmax = max(0, math.ceil((-min(zz.real) - j) / k) + 1)
        for q in range(qmax + 1):
            w = zz + q * k + j
            if np.min(np.abs(w)) < 1e-12:
                raise DomainError(f"segment meets the excluded point {-(q * k + j)}")
            if np.any((w.real < 0) & (np.abs(w.imag) < 1e-14)) or np.any(np.diff(np.sign(w.imag))[(w.real[1:] < 0)] != 0):
                raise DomainError("segment crosses a branch cut of the principal power; split it")
    s1 = s + 1.0

    def ps(t, w):
        acc = 0j
        for ti, wi in zip(t, w):
            zt = z0 + ti * dz
            p = PeriodicParams(k, tuple(a), tuple(zt))
            for j in range(1, k + 1):
                if dz[j - 1] == 0:
                    continue
                acc += wi * dz[j - 1] * eval_zeta_k_series(p, s1, tol * 1e-3, indices=[j]).value
        return acc

    val, err = adaptive_panels(ps, [0.0, 0.5, 1.0], tol / max(abs(s), 1.0) * 0.1, order=16, rel=1e-15)
    return EvalResult(-s * val, abs(s) * err, "integral")


# ---------------------------------------------------------------- pole of the power-weight family


def pole_of_power_weight(eta):
    """Pole location and residue of s -> zeta^ER(1, n^-eta, s) = zeta(eta s)."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return 1.0 / eta, 1.0 / eta


def pole_of_power_weight_numeric(eta, radius=0.2, nodes=64, tol=1e-12):
    """Circle integral of s -> zeta(eta s) around s = 1/eta; returns the residue."""
    p = PeriodicParams(1, (0,), (0,))
    c = 1.0 / eta
    r = radius / eta
    return trapezoid_circle(lambda s: eval_zeta_k(p, eta * s, tol, method="contour").value, c, r, nodes)
