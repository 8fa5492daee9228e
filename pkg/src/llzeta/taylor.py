"""Taylor continuation of sum b_n z_n^s in the sequence variable, and Dirichlet-series helpers.

The increment zeta(b, z+w, s) - zeta(b, z, s) expands as sum_m P_m(w) with

    P_m(w) = binom(s, m) sum_n b_n z_n^s u_n^m,    u_n = w_n / z_n,

and everything below is organised around the moments S_m = sum_n b_n z_n^s u_n^m.
"""

from dataclasses import dataclass
from decimal import Decimal, localcontext
import math

import numpy as np

from . import _kernels
from .errors import ConvergenceDomainError, DomainError, TruncationError
from .seqspace import TruncatedSeq, WeightFamily, dist_to_cross
from .series import EvalResult, _tail_bound, abscissa_estimate

ETA_LADDER = (2.0, 1.5, 1.0, 0.75, 0.5, 0.25, 0.1, 0.05, 0.01)
_INV_N = WeightFamily.inverse_n()
_ONES = WeightFamily.ones()


@dataclass(frozen=True)
class _Rate:
    """Weight n^-power e^-rate n for tail extrema (duck-types WeightFamily)."""

    power: float
    rate: float

    def log(self, n):
        n = np.asarray(n, dtype=np.float64)
        return -self.power * np.log(n) - self.rate * n


# ---------------------------------------------------------------- domains


@dataclass(frozen=True)
class Domain:
    """Admissible perturbation domain with its witnesses.

    kind is "ball", "polydisk", "entire" or "none"; ``halfplane`` is the
    lower bound on Re s where the expansion converges when w has an
    infinite tail (-inf for entire).
    """

    kind: str
    beta: float = math.nan
    eta: float = math.nan
    halfplane: float = math.nan
    reason: str = ""

    @property
    def rate(self):
        """The weight rho_n = n^-power e^-rate n bounding |w_n| / beta."""
        if self.kind == "ball":
            return _Rate(1.0, 0.0)
        if self.kind == "polydisk":
            return _Rate(1.0 + self.eta, 0.0)
        if self.kind == "entire":
            return _Rate(1.0, self.eta)
        raise DomainError(self.reason)

    def __bool__(self):
        return self.kind != "none"


def _sup_ratio(w, rate):
    """sup_n |w_n| / rho_n including the tail (inf if unboundable)."""
    n = np.arange(1, w.N + 1)
    with np.errstate(divide="ignore"):
        lr = np.log(np.abs(w.entries)) - rate.log(n)
    val = float(np.max(lr))
    if w.tail is not None:
        hi, _ = w.tail.log_abs_extrema(rate, w.N + 1)
        val = max(val, float(hi))
    return math.exp(val) if val < 700 else math.inf


def domain_classify(z, w):
    """Strongest of entire(beta, eta) > polydisk(beta, eta) > ball(beta) containing w.

    Each test requires beta < dist_to_cross(z), so that |w_n| < |z_n| for all n.
    """
    d = dist_to_cross(z)
    if not d > 0:
        return Domain("none", reason="z lies on the closed coordinate cross")
    if not np.any(w.entries) and w.tail is None:
        return Domain("entire", 0.0, ETA_LADDER[0], -math.inf)
    for eta in ETA_LADDER:
        beta = _sup_ratio(w, _Rate(1.0, eta))
        if beta < d:
            return Domain("entire", beta, eta, -math.inf)
    for eta in ETA_LADDER:
        beta = _sup_ratio(w, _Rate(1.0 + eta, 0.0))
        if beta < d:
            return Domain("polydisk", beta, eta, 1.0 - eta)
    beta = _sup_ratio(w, _Rate(1.0, 0.0))
    if beta < d:
        return Domain("ball", beta, math.nan, 1.0)
    return Domain("none", beta, reason=f"sup |w_n| n = {beta:.6g} >= dist_to_cross(z) = {d:.6g}")


# ---------------------------------------------------------------- windows


def _as_seq(w, like):
    if isinstance(w, TruncatedSeq):
        return w
    return TruncatedSeq(np.asarray(w, dtype=np.complex128), like.weight)


def _logz(z, N, args):
    zv = z.at(np.arange(1, N + 1))
    if np.any(zv == 0):
        raise DomainError("z_n = 0 on the window")
    lz = np.log(zv)
    if args is not None:
        a = np.asarray(args, dtype=np.float64)
        m = min(a.size, N)
        if np.any(np.abs(np.angle(np.exp(1j * (a[:m] - lz.imag[:m])))) > 1e-9):
            raise DomainError("branch arguments inconsistent with z")
        lz[:m] = lz.real[:m] + 1j * a[:m]
    return zv, lz


class _Window:
    """b z^s and u = w/z on a window, plus a majorant for the n-tail beyond it."""

    def __init__(self, b, z, w, s, dom, args=None):
        self.b, self.z, self.w, self.s, self.dom = b, z, w, s, dom
        self.args = args
        self.N = max(w.N, 1) if w.tail is None else max(w.N, z.N, b.N)

    def arrays(self, N):
        n = np.arange(1, N + 1)
        zv, lz = _logz(self.z, N, self.args)
        bv = self.b.at(n)
        wv = self.w.at(n)
        return bv * np.exp(self.s * lz), wv / zv

    def tail_term_bound(self, n0, m=None):
        """Bound for sum_{n > n0} |b_n z_n^s| x_n^m (m fixed), or of the full increment if m is None."""
        if self.w.tail is None:
            return 0.0
        s = self.s
        sigma = s.real
        rate = self.dom.rate
        beta = _sup_ratio(self.w, rate)
        if self.b.tail is None:
            return 0.0
        bhi, _ = self.b.tail.log_abs_extrema(_ONES, n0 + 1)
        zhi, zlo = self.z.tail.log_abs_extrema(_INV_N, n0 + 1)
        if not math.isfinite(zlo):
            return math.inf
        d = math.exp(zlo)
        cz = math.exp(sigma * (zhi if sigma >= 0 else zlo) + abs(s.imag) * math.pi)
        X0 = beta / d
        # x_n <= X0 * n rho_n, and n rho_n = n^-(power-1) e^-rate n is decreasing
        xt = X0 * math.exp(-(rate.power - 1.0) * math.log(n0 + 1) - rate.rate * (n0 + 1))
        if xt >= 1:
            return math.inf
        C = math.exp(bhi) * cz
        if m is None:
            fac = abs(s) * X0 * (1.0 - xt) ** (-abs(s) - 1.0)
            return fac * _tail_bound(C, sigma + (rate.power - 1.0), rate.rate, n0)
        return X0 ** m * _tail_bound(C, sigma + m * (rate.power - 1.0), m * rate.rate, n0)

    def grow(self, budget, m=None, cap=1 << 24):
        N = self.N
        while self.tail_term_bound(N, m) > budget:
            if N >= cap:
                raise TruncationError("n-window for the Taylor tail exceeds the cap", self.tail_term_bound(N, m))
            N *= 2
        return N, self.tail_term_bound(N, m)


def _gate(z, w, s):
    dom = domain_classify(z, w)
    if not dom:
        raise DomainError(f"w outside every admissible domain: {dom.reason}")
    if w.tail is not None and not s.real > dom.halfplane:
        raise DomainError(f"Re s = {s.real:.6g} not in the half-plane Re s > {dom.halfplane:.6g} of the {dom.kind} domain")
    return dom


# ---------------------------------------------------------------- coefficients


def falling_binomial(s, m):
    """binom(s, m) = s (s-1) ... (s-m+1) / m!, built incrementally."""
    c = 1.0 + 0j
    for i in range(m):
        c *= (s - i) / (i + 1)
    return c


def taylor_coefficient(b, z, s, m, args=None, tol=1e-14):
    """Evaluator of the m-homogeneous term w -> binom(s, m) sum_n b_n z_n^(s-m) w_n^m.

    ``args`` fixes arg z_n on the window (principal branch otherwise); the
    same logarithm serves every m.  m = 0 gives the zero increment.
    """
    s = complex(s)
    if m < 0:
        raise ValueError("order must be nonnegative")
    coef = falling_binomial(s, m)

    def P(w):
        w = _as_seq(w, z)
        if m == 0 or coef == 0 or (not np.any(w.entries) and w.tail is None):
            return 0j
        dom = _gate(z, w, s)
        win = _Window(b, z, w, s, dom, args)
        N, _ = win.grow(tol / max(abs(coef), 1e-300), m)
        bz, u = win.arrays(N)
        return coef * complex(np.sum(bz * u ** m))

    return P


def taylor_continue(b, z, w, s, M=200, tol=1e-10, args=None):
    """zeta(b, z+w, s) - zeta(b, z, s) as sum_{m <= M'} P_m(w).

    Half of ``tol`` bounds the n-tail beyond the window, half the remainder
    in m; M' is the first order where the ratio-test majorant of the
    remainder, built from the absolute moments, drops below its share.
    """
    s = complex(s)
    z = z if isinstance(z, TruncatedSeq) else TruncatedSeq(z)
    w = _as_seq(w, z)
    if not np.any(w.entries) and w.tail is None:
        return EvalResult(0j, 0.0, "taylor")
    dom = _gate(z, w, s)
    win = _Window(b, z, w, s, dom, args)
    N, ntail = win.grow(0.5 * tol)
    bz, u = win.arrays(N)
    x = np.abs(u)
    xmax = float(x.max())
    S = _kernels.taylor_moments(bz, u, M + 1)
    A = np.real(_kernels.taylor_moments(np.abs(bz).astype(np.complex128), x.astype(np.complex128), M + 1))
    total = 0j
    coef = 1.0 + 0j
    for m in range(1, M + 1):
        coef *= (s - (m - 1)) / m
        total += coef * S[m - 1]
        nxt = coef * (s - m) / (m + 1)
        q = xmax * max(1.0, (abs(s) + m + 1) / (m + 2))
        if nxt == 0:
            return EvalResult(total, ntail, "taylor", terms_used=m)
        if q < 1:
            rem = abs(nxt) * A[m] / (1.0 - q)
            if rem <= 0.5 * tol:
                return EvalResult(total, ntail + rem, "taylor", terms_used=m)
    q = xmax * max(1.0, (abs(s) + M + 1) / (M + 2))
    rem = abs(falling_binomial(s, M + 1)) * A[M] / (1.0 - q) if q < 1 else math.inf
    raise TruncationError(f"Taylor remainder {rem:.3g} above tol at M = {M}", rem)


# ---------------------------------------------------------------- Dirichlet series


def _decimal_probe(gen):
    try:
        return isinstance(gen(1), Decimal)
    except Exception:
        return False


def dirichlet_perturb_ok(lam, mu, beta, eta, n_max, precision=None):
    """True iff |e^-lam_n - e^-mu_n| < beta e^(-eta n) / n for all n <= n_max.

    ``lam`` and ``mu`` are callables on index arrays (or sequences).  If both
    are callables returning Decimal for scalar ints, the test runs in Decimal
    arithmetic at raised precision, so tiny perturbations are resolved
    exactly rather than lost in lam_n - mu_n.
    """
    if not (beta > 0 and eta > 0):
        raise ValueError("beta and eta must be positive")
    if callable(lam) and callable(mu) and _decimal_probe(lam) and _decimal_probe(mu):
        # 1 - e^-d cancels about as many digits as d is small, so double the scale
        prec = precision or 2 * int(eta * n_max / math.log(10)) + 60
        with localcontext() as ctx:
            ctx.prec = max(ctx.prec, prec)
            lb = Decimal(beta).ln()
            for n in range(1, n_max + 1):
                a, c = lam(n), mu(n)
                diff = abs(a - c)
                if diff == 0:
                    continue
                lhs = -min(a, c) + (-(-diff).exp() + 1).ln()
                if not lhs < lb - Decimal(eta) * n - Decimal(n).ln():
                    return False
        return True
    n = np.arange(1, n_max + 1)
    a = np.real(_gen(lam, n))
    c = np.real(_gen(mu, n))
    diff = np.abs(a - c)
    nz = diff > 0
    with np.errstate(divide="ignore"):
        lhs = -np.minimum(a, c)[nz] + np.log(-np.expm1(-diff[nz]))
    rhs = math.log(beta) - eta * n[nz] - np.log(n[nz])
    return bool(np.all(lhs < rhs))


def _gen(g, n):
    if callable(g):
        return np.asarray(g(n))
    return np.asarray(g)[: n.size]


def _envelope(av, lv):
    """(K, theta, mode) with |A_n| <= K e^(theta lam_n) (mode "A") or |A_inf - A_n| likewise ("R")."""
    A = np.cumsum(av)
    est = abscissa_estimate(av, lv, lv.size)
    theta = est.sigma
    if est.branch == "convergent" and theta < 0:
        R = np.abs(A[-1] - A[:-1])
        lw = lv[:-1]
        K = float(np.max(R * np.exp(-theta * lw))) if R.size else 0.0
        return K, theta, "R", A[-1]
    theta = max(theta, 0.0)
    K = float(np.max(np.abs(A) * np.exp(-theta * lv)))
    return K, theta, "A", A[-1]


def dirichlet_eval(a, lam, s, tol=1e-8, probe=1 << 16, max_terms=200_000_000, margin=0.05):
    """sum_n a_n e^(-lam_n s) for callables a, lam on 1-based index arrays.

    The tail past N is bounded by Abel summation against an envelope
    |A_n| <= K e^(theta lam_n) of the partial sums (or of the remainders
    when the series converges with a negative abscissa).  K and theta are
    measured on a probe window, so the bound is empirical beyond it.
    """
    s = complex(s)
    n = np.arange(1, probe + 1)
    av = _gen(a, n).astype(np.complex128)
    lv = np.real(_gen(lam, n)).astype(np.float64)
    K, theta, mode, _ = _envelope(av, lv)
    sigma = s.real
    if not sigma > theta + margin or (mode == "A" and not sigma > 0):
        raise ConvergenceDomainError(f"Re s = {sigma:.6g} not beyond the estimated abscissa {theta:.6g} + {margin}")

    def lam_at(N):
        return float(np.real(_gen(lam, np.array([N]))[0]))

    def bound(N, AN):
        l1 = lam_at(N + 1)
        if mode == "A":
            first = abs(AN) * math.exp(-sigma * l1)
        else:
            first = K * math.exp((theta - sigma) * lam_at(N))
        return first + K * abs(s) / (sigma - theta) * math.exp(-(sigma - theta) * l1)

    total = 0j
    A_run = 0j
    N = 0
    chunk = 1 << 16
    while True:
        hi = N + chunk
        n = np.arange(N + 1, hi + 1)
        ac = _gen(a, n).astype(np.complex128)
        lc = np.real(_gen(lam, n)).astype(np.float64)
        total += _kernels.power_sum(np.ascontiguousarray(ac), np.ascontiguousarray(-lc + 0j), s)
        A_run += complex(np.sum(ac))
        N = hi
        err = bound(N, A_run)
        if err <= tol:
            return EvalResult(total, err, "series", terms_used=N)
        if N >= max_terms:
            raise TruncationError(f"tail bound {err:.3g} above tol after {N} terms", err)
        if err < 1e3 * tol:
            chunk = max(chunk, N // 4)
        else:
            chunk = max(chunk, N)
