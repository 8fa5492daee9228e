"""Direct series for the Euler-Riemann and k-periodic Lerch-Lipschitz zeta.

Two independent routes live here:

* ``eval_er_series`` sums sum_n b_n z_n^s term by term and stops when an
  elementary majorant of the remaining tail drops below ``tol``.
* ``eval_zeta_k_series`` splits the periodic series into k geometric-times-
  power progressions and sums each tail with a generalised Euler-Maclaurin
  formula, so it needs only a few hundred terms at any tolerance.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import cmath
import math

import numpy as np

from . import _kernels
from .errors import ConvergenceDomainError, DomainError, PreconditionError, TruncationError, UnsupportedTailError
from .quadrature import adaptive_panels, geometric_breakpoints
from .seqspace import LerchTail, PhaseTail, PowerTail, TruncatedSeq, WeightFamily

TWO_PI = 2.0 * math.pi
RATIONAL_TOL = 1e-12


# ---------------------------------------------------------------- types


def _parse_a(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        v = v.strip()
        if "/" in v and "j" not in v and "i" not in v:
            return Fraction(v)
        return complex(v.replace("i", "j"))
    return complex(v)


@dataclass(frozen=True)
class PeriodicParams:
    """(k, a, z) of the k-periodic cut.  Entries of ``a`` may be ``Fraction``s
    (or "p/q" strings), which makes membership in Z[1/k] exact."""

    k: int
    a: tuple
    z: tuple

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")
        a = tuple(_parse_a(x) for x in self.a)
        z = tuple(complex(x) for x in self.z)
        if len(a) != self.k or len(z) != self.k:
            raise ValueError(f"a and z must have length k={self.k}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "z", z)

    @property
    def a_complex(self):
        return np.array([complex(x) for x in self.a], dtype=np.complex128)

    @property
    def z_array(self):
        return np.array(self.z, dtype=np.complex128)

    def rational_l(self, j):
        """l with a_j = l/k, or None.  ``j`` is 1-based."""
        aj = self.a[j - 1]
        if isinstance(aj, Fraction):
            x = aj * self.k
            return int(x) if x.denominator == 1 else None
        l = round(aj.real * self.k)
        if abs(aj - l / self.k) < RATIONAL_TOL:
            return int(l)
        return None

    def a_eff(self, j):
        """a_j, snapped to l/k when it is declared (or numerically) in Z[1/k]."""
        l = self.rational_l(j)
        return complex(l / self.k) if l is not None else complex(self.a[j - 1])

    def log_omega(self, j):
        """Principal log of exp(2 pi i k a_j), exactly 0 on Z[1/k]."""
        if self.rational_l(j) is not None:
            return 0j
        aj = complex(self.a[j - 1])
        x = self.k * aj.real
        return complex(-TWO_PI * self.k * aj.imag, TWO_PI * (x - round(x)))

    def check_z(self):
        for j, zj in enumerate(self.z, start=1):
            if zj.imag == 0 and zj.real < 0 and zj.real == round(zj.real):
                m = -int(round(zj.real))
                if m >= j and (m - j) % self.k == 0:
                    raise DomainError(f"z_{j} = {zj.real:g} makes a denominator vanish")

    def check_a_upper(self):
        for j, aj in enumerate(self.a, start=1):
            if complex(aj).imag < 0:
                raise DomainError(f"Im a_{j} < 0: series diverges")


@dataclass(frozen=True)
class EvalResult:
    value: complex
    err: float
    method: str
    terms_used: int = 0
    residue: complex | None = None

    @property
    def is_pole(self):
        return self.residue is not None and math.isinf(abs(self.value))

    def __complex__(self):
        return complex(self.value)


def pole_result(residue, method="contour"):
    return EvalResult(complex(math.inf, 0.0), 0.0, method, 0, complex(residue))


# ---------------------------------------------------------------- ER <-> LL


def ll_to_er(a, xi, n_max):
    """Substitution b_n = exp(2 pi i n a_j), z_n = 1/(n + xi_j), j = (n-1) mod k."""
    a = tuple(complex(x) for x in a)
    xi = tuple(complex(x) for x in xi)
    if len(a) != len(xi):
        raise ValueError("a and xi must have the same period")
    n = np.arange(1, n_max + 1)
    xij = np.asarray(xi)[(n - 1) % len(xi)]
    den = n + xij
    bad = np.nonzero(den == 0)[0]
    if bad.size:
        raise DomainError(f"n + xi vanishes at n = {int(n[bad[0]])}")
    # further zeros beyond the window
    for j, x in enumerate(xi, start=1):
        if x.imag == 0 and x.real < 0 and x.real == round(x.real):
            m = -int(round(x.real))
            if m >= j and (m - j) % len(xi) == 0:
                raise DomainError(f"n + xi vanishes at n = {m}")
    bt = PhaseTail(a)
    zt = LerchTail(xi)
    b = TruncatedSeq(bt(n), WeightFamily.ones(), bt)
    z = TruncatedSeq(1.0 / den, WeightFamily.inverse_n(), zt)
    return b, z


# ---------------------------------------------------------------- ER direct route


def _tail_profile(b, z, sigma, t_abs, n_lo):
    """Constants (C, alpha, beta) with |b_n z_n^s| <= C n^-alpha e^-beta n for n >= n_lo."""
    if isinstance(b.tail, PowerTail):
        cb, pb, qb = abs(b.tail.coef), b.tail.power, b.tail.rate
    elif isinstance(b.tail, PhaseTail):
        cb, pb, qb = 1.0, 0.0, TWO_PI * min(complex(x).imag for x in b.tail.a)
    else:
        raise UnsupportedTailError(f"no majorant for b tail {type(b.tail).__name__}")
    if isinstance(z.tail, PowerTail):
        cz, pz, qz = abs(z.tail.coef), z.tail.power, z.tail.rate
        # without a phase the argument is fixed; otherwise it sweeps the circle
        arg_cap = abs(cmath.phase(z.tail.coef)) if z.tail.phase == 0 else math.pi
    elif isinstance(z.tail, LerchTail):
        m = max(abs(x) for x in z.tail.xi)
        if n_lo <= 2 * m:
            raise UnsupportedTailError("window too short for the Lerch tail majorant")
        cz, pz, qz = 1.0 / (1.0 - m / n_lo), 1.0, 0.0
        arg_cap = math.asin(min(1.0, m / n_lo))
    else:
        raise UnsupportedTailError(f"no majorant for z tail {type(z.tail).__name__}")
    if cb == 0 or cz == 0:
        return 0.0, 0.0, 0.0
    C = cb * cz ** sigma * math.exp(t_abs * arg_cap)
    return C, pb + sigma * pz, qb + sigma * qz


def _tail_bound(C, alpha, beta, n):
    """Upper bound for sum_{m > n} C m^-alpha e^-beta m (inf if divergent)."""
    if C == 0:
        return 0.0
    # a tiny beta makes the geometric form useless; the algebraic one still holds
    alg = C * n ** (1.0 - alpha) / (alpha - 1.0) if alpha > 1 and beta >= 0 else math.inf
    if beta > 0:
        # m^-alpha e^-beta m <= n^-alpha e^-beta m * max(1, (m/n)^-alpha)
        if alpha >= 0:
            return min(alg, C * n ** (-alpha) * math.exp(-beta * n) / (-math.expm1(-beta)))
        slope = beta + alpha / n
        if slope <= 0:
            return math.inf
        return C * n ** (-alpha) * math.exp(-beta * n) / (-math.expm1(-slope))
    return alg


def _sum_tail_terms(b, z, s, n0, n1):
    if n1 <= n0:
        return 0j
    bt, zt = b.tail, z.tail
    if isinstance(bt, PowerTail) and isinstance(zt, PowerTail):
        return _kernels.powexp_sum(complex(bt.coef), bt.phase, bt.power, bt.rate,
                                   complex(zt.coef), zt.phase, zt.power, zt.rate, s, n0, n1)
    if isinstance(bt, PhaseTail) and isinstance(zt, LerchTail) and len(bt.a) == len(zt.xi):
        a = np.array(bt.a, dtype=np.complex128)
        xi = np.array(zt.xi, dtype=np.complex128)
        return _kernels.lerch_sum(a, xi, len(a), s, n0, n1)
    acc = 0j
    for lo in range(n0, n1, 1 << 16):
        n = np.arange(lo, min(lo + (1 << 16), n1))
        acc += complex(np.sum(bt(n) * np.exp(s * np.log(zt(n)))))
    return acc


def eval_er_series(b, z, s, tol=1e-10, args=None, max_terms=200_000_000):
    """sum_n b_n z_n^s by direct summation with a certified tail majorant.

    ``args`` optionally fixes arg z_n on the window (a continued branch);
    otherwise the principal branch is used.  Tail terms always use the
    principal branch.
    """
    s = complex(s)
    if s.real <= 1:
        raise ConvergenceDomainError("eval_er_series needs Re s > 1")
    N = max(b.N, z.N)
    if b.N < N:
        b = b.extended(N) if b.tail is not None else TruncatedSeq(np.pad(b.entries, (0, N - b.N)), b.weight)
    if z.N < N:
        z = z.extended(N)
    zw = z.entries
    bw = b.entries
    nz = bw != 0
    if np.any(zw[nz] == 0):
        raise DomainError("z_n = 0 on the window")
    if args is None:
        logz = np.log(zw[nz])
    else:
        args = np.asarray(args, dtype=np.float64)
        logz = np.log(np.abs(zw[nz])) + 1j * args[nz]
    head = _kernels.power_sum(np.ascontiguousarray(bw[nz]), np.ascontiguousarray(logz), s)
    head_mag = float(np.sum(np.abs(bw[nz]) * np.exp(s.real * logz.real - s.imag * logz.imag))) if nz.any() else 0.0
    if b.tail is None or z.tail is None:
        err = 4e-16 * head_mag * max(1.0, math.log2(max(N, 2)))
        return EvalResult(head, err, "series", N)

    C, alpha, beta = _tail_profile(b, z, s.real, abs(s.imag), N + 1)
    budget = 0.5 * tol
    bound = _tail_bound(C, alpha, beta, N)
    n_end = N
    if bound > budget:
        hi = max(2 * N, 16)
        while _tail_bound(C, alpha, beta, hi) > budget:
            if hi >= max_terms:
                raise TruncationError(
                    f"tail majorant {_tail_bound(C, alpha, beta, max_terms):.3e} still above tol at {max_terms} terms",
                    achieved=_tail_bound(C, alpha, beta, max_terms),
                )
            hi = min(2 * hi, max_terms)
        lo = n_end
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _tail_bound(C, alpha, beta, mid) > budget:
                lo = mid
            else:
                hi = mid
        n_end = hi
        bound = _tail_bound(C, alpha, beta, n_end)
    mid_sum = _sum_tail_terms(b, z, s, N + 1, n_end + 1)
    value = head + mid_sum
    rounding = 4e-16 * (head_mag + C * (N + 1) ** (-alpha) * math.exp(-beta * (N + 1)) * (n_end - N)) * math.log2(max(n_end, 2))
    return EvalResult(value, bound + rounding, "series", n_end)


# ---------------------------------------------------------------- generalised Euler-Maclaurin tails

_BERN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def _g_kernel(y):
    """1/(1 - e^y) + 1/y, analytic at y = 0."""
    y = np.asarray(y, dtype=np.complex128)
    out = np.empty_like(y)
    small = np.abs(y) < 0.5
    ys = y[small]
    # -sum_{n>=1} B_n y^(n-1)/n!  with B_1 = -1/2
    acc = 0.5 + 0 * ys
    for i, B in enumerate(_BERN):
        n = 2 * i + 2
        acc = acc - B * ys ** (n - 1) / math.factorial(n)
    out[small] = acc
    yl = y[~small]
    out[~small] = -1.0 / np.expm1(yl) + 1.0 / yl
    return out


@lru_cache(maxsize=512)
def _g_coeffs(L, radius=2.0, nodes=128):
    """Taylor coefficients of x -> g(L + x) from samples on |x| = radius."""
    theta = TWO_PI * np.arange(nodes) / nodes
    x = radius * np.exp(1j * theta)
    vals = _g_kernel(L + x)
    c = np.fft.fft(vals) / nodes
    m = np.arange(nodes)
    return c / radius ** m, float(np.max(np.abs(vals)))


def _power(Y, s):
    return np.exp(-s * np.log(Y))


def progression_tail(L, Y, k, s, tol=1e-15):
    """sum_{p>=0} e^{L p} (Y + k p)^{-s}, for Re Y large, Re L <= 0, |Im L| <= pi.

    Uses sum = integral + sum_m g_m f^(m)(0) with g(x) = 1/(1-e^{L+x}) + 1/(L+x).
    Returns (value, err).
    """
    s = complex(s)
    Y = complex(Y)
    g, gmax = _g_coeffs(complex(L))
    term = complex(_power(Y, s))
    em = 0j
    err_em = math.inf
    prev_env = math.inf
    for m in range(len(g) // 2):
        # Cauchy bound |g_m| <= gmax / 2^m gives a monotone stopping envelope
        env = gmax * 0.5 ** m * abs(term)
        if m > 4 and env > prev_env:
            err_em = prev_env
            break
        em += g[m] * term
        if env <= 1e-18 * abs(em):
            err_em = env
            break
        prev_env = env
        term *= -k * (s + m) / Y
    else:
        err_em = prev_env

    if L == 0:
        if s == 1:
            raise ConvergenceDomainError("harmonic progression diverges")
        integral = complex(np.exp((1.0 - s) * np.log(Y))) / (k * (s - 1.0))
        err_int = 0.0
    else:
        aL = abs(L)
        rot = -complex(L).conjugate() / aL

        def ps(v, w):
            return complex(np.sum(w * np.exp(-aL * v - s * np.log(Y + k * rot * v)))) * rot

        h0 = min(1.0 / aL, abs(Y) / k) / 4.0
        V = 46.0 / aL
        bp = [0.0] + geometric_breakpoints(h0, max(V, 2 * h0), first=h0, growth=2.0)
        scale = abs(Y) ** (1.0 - s.real) / k
        integral, err_int = adaptive_panels(ps, bp, max(tol * 1e-2, 1e-16 * scale), order=24, rel=1e-15)
    return em + integral, err_em + err_int


def _blocks_needed(p, s):
    P = 2.0 * abs(s) + 25.0
    for zj, j in zip(p.z, range(1, p.k + 1)):
        c = j + zj
        P = max(P, (2.0 * abs(s) + 20.0 - c.real) / p.k, 3.0 * abs(c) / p.k)
    return int(math.ceil(P))


def eval_zeta_k_series(p, s, tol=1e-12, indices=None):
    """sum_{q>=0} sum_j e^{2 pi i (qk+j) a_j} (qk+j+z_j)^-s  for Re s > 1.

    ``indices`` restricts the inner sum to the given (1-based) classes j.
    """
    s = complex(s)
    if s.real <= 1:
        raise ConvergenceDomainError("the periodic series converges only for Re s > 1")
    p.check_a_upper()
    p.check_z()
    k = p.k
    idx = list(range(1, k + 1)) if indices is None else list(indices)
    P = _blocks_needed(p, s)
    a = np.array([p.a_eff(j) for j in range(1, k + 1)], dtype=np.complex128)
    z = p.z_array
    n = np.arange(1, k * P + 1)
    jj = (n - 1) % k
    keep = np.isin(jj + 1, idx)
    n, jj = n[keep], jj[keep]
    head_terms = np.exp(-TWO_PI * n * a[jj].imag + 1j * TWO_PI * np.fmod(n * a[jj].real, 1.0) - s * np.log(n + z[jj]))
    if len(idx) == k:
        value = _kernels.lerch_sum(a, z, k, s, 1, k * P + 1)
    else:
        value = complex(np.sum(head_terms))
    err = 0.0
    for j in idx:
        aj = a[j - 1]
        n0 = k * P + j
        pref = math.exp(-TWO_PI * n0 * aj.imag) * complex(np.exp(1j * TWO_PI * math.fmod(n0 * aj.real, 1.0)))
        if pref == 0:
            continue
        t, e = progression_tail(p.log_omega(j), n0 + z[j - 1], k, s, tol)
        value += pref * t
        err += abs(pref) * e
    err += 1e-16 * float(np.sum(np.abs(head_terms)))
    return EvalResult(complex(value), err, "series", k * P)


# ---------------------------------------------------------------- Dirichlet abscissa


@dataclass(frozen=True)
class AbscissaEstimate:
    sigma: float
    branch: str  # "divergent" or "convergent"

    def __float__(self):
        return self.sigma

    def __iter__(self):
        return iter((self.sigma, self.branch))


def _generate(gen, n):
    if callable(gen):
        return np.asarray(gen(n), dtype=np.complex128)
    return np.asarray(gen, dtype=np.complex128)[: n.size]


def abscissa_estimate(a, lam, n_max, cauchy_tol=1e-6):
    """Finite-window estimate of the abscissa of convergence of sum a_n e^{-lambda_n s}.

    ``a`` and ``lam`` are callables on 1-based index arrays (or sequences).
    The convergent branch is used iff the partial sums vary by less than
    ``cauchy_tol`` over the last decade of the window.
    """
    n = np.arange(1, n_max + 1)
    av = _generate(a, n)
    lv = np.real(_generate(lam, n)).astype(np.float64)
    if lv.size != n_max or av.size != n_max:
        raise PreconditionError("generators returned the wrong number of terms")
    if np.any(np.diff(lv) <= 0):
        raise PreconditionError("lambda_n must be strictly increasing")
    A = np.cumsum(av)
    lo = max(1, n_max // 10)
    last = A[lo - 1:]
    spread = float(np.max(np.abs(last - last[-1])))
    with np.errstate(divide="ignore"):
        if spread < cauchy_tol:
            i0, i1 = max(1, n_max // 100), max(2, n_max // 10)
            R = A[-1] - A[i0 - 1:i1]
            lam_w = lv[i0 - 1:i1]
            ok = (np.abs(R) > 0) & (lam_w > 0)
            if not ok.any():
                return AbscissaEstimate(-math.inf, "convergent")
            return AbscissaEstimate(float(np.max(np.log(np.abs(R[ok])) / lam_w[ok])), "convergent")
        lam_w = lv[lo - 1:]
        ok = lam_w > 0
        vals = np.log(np.abs(last[ok])) / lam_w[ok]
        return AbscissaEstimate(float(np.max(vals)), "divergent")
