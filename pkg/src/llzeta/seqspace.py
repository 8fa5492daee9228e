"""Weighted sequence spaces at a finite truncation window.

A sequence is stored as its first N entries plus an optional closed-form
tail descriptor for n > N.  Norms and distances are suprema/infima of
``|z_n| / r_n`` over the window and, where the tail admits it, over n > N.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    BranchUndefinedError,
    DomainError,
    PreconditionError,
    StepRefinementError,
    UnsupportedTailError,
)

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------- weights


@dataclass(frozen=True)
class WeightFamily:
    """r_n = n^(-power) * exp(-rate * n)."""

    kind: str
    eta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("ones", "inverse_n", "exp_neg_n", "inverse_n_pow"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "inverse_n_pow" and not self.eta > 0:
            raise ValueError("inverse_n_pow needs eta > 0")

    @classmethod
    def ones(cls):
        return cls("ones")

    @classmethod
    def inverse_n(cls):
        return cls("inverse_n")

    @classmethod
    def exp_neg_n(cls):
        return cls("exp_neg_n")

    @classmethod
    def inverse_n_pow(cls, eta):
        return cls("inverse_n_pow", float(eta))

    @property
    def power(self):
        return {"ones": 0.0, "inverse_n": 1.0, "exp_neg_n": 0.0}.get(self.kind, self.eta)

    @property
    def rate(self):
        return 1.0 if self.kind == "exp_neg_n" else 0.0

    def log(self, n):
        n = np.asarray(n, dtype=np.float64)
        return -self.power * np.log(n) - self.rate * n

    def __call__(self, n):
        return np.exp(self.log(n))


# ---------------------------------------------------------------- tails


def _log_ratio_extrema(power, rate, n_lo):
    """Extrema over integers n >= n_lo of g(n) = power*ln n + rate*n, plus its limit.

    Returns (sup, inf) where either may be +-inf.  g is concave or convex in n
    so the extrema are at n_lo, at infinity, or at one interior critical point.
    """
    def g(n):
        return power * np.log(n) + rate * n

    def at_inf():
        if rate > 0 or (rate == 0 and power > 0):
            return np.inf
        if rate < 0 or (rate == 0 and power < 0):
            return -np.inf
        return 0.0

    cands = [g(n_lo)]
    if power != 0 and rate != 0:
        c = -power / rate
        if c > n_lo:
            cands += [g(np.floor(c)), g(np.ceil(c))]
    lim = at_inf()
    vals = cands + [lim]
    return max(vals), min(vals)


class Tail:
    """Closed-form description of z_n for n > N."""

    def __call__(self, n):
        raise NotImplementedError

    def log_abs_extrema(self, weight, n_lo):
        """(sup, inf) of ln(|z_n| / r_n) over n >= n_lo."""
        raise UnsupportedTailError(f"{type(self).__name__} has no closed-form ratio bounds")

    def abs_sup(self, n_lo):
        return float(np.exp(self.log_abs_extrema(WeightFamily.ones(), n_lo)[0]))


@dataclass(frozen=True)
class PowerTail(Tail):
    """z_n = coef * exp(2 pi i phase n) * n^(-power) * exp(-rate n)."""

    coef: complex = 1.0
    power: float = 0.0
    rate: float = 0.0
    phase: float = 0.0

    def __call__(self, n):
        n = np.asarray(n, dtype=np.float64)
        mod = np.exp(np.log(abs(self.coef)) - self.power * np.log(n) - self.rate * n) if self.coef != 0 else 0 * n
        return mod * np.exp(1j * (np.angle(self.coef) + TWO_PI * np.fmod(self.phase * n, 1.0)))

    def log_abs_extrema(self, weight, n_lo):
        if self.coef == 0:
            return -np.inf, -np.inf
        c = np.log(abs(self.coef))
        hi, lo = _log_ratio_extrema(weight.power - self.power, weight.rate - self.rate, n_lo)
        return c + hi, c + lo


@dataclass(frozen=True)
class LerchTail(Tail):
    """z_n = 1 / (n + xi_j),  j = (n-1) mod k."""

    xi: tuple = (0.0,)

    def __call__(self, n):
        n = np.asarray(n, dtype=np.int64)
        xi = np.asarray(self.xi, dtype=np.complex128)
        return 1.0 / (n + xi[(n - 1) % len(xi)])

    def log_abs_extrema(self, weight, n_lo):
        # |n + xi| = n |1 + xi/n| with the correction bounded for n >= n_lo
        m = max(abs(x) for x in self.xi)
        if n_lo <= m:
            raise UnsupportedTailError("tail starts before |xi|; extend the window")
        corr_hi = -np.log1p(-m / n_lo)
        corr_lo = -np.log1p(m / n_lo)
        hi, lo = _log_ratio_extrema(weight.power - 1.0, weight.rate, n_lo)
        return hi + corr_hi, lo + corr_lo


@dataclass(frozen=True)
class PhaseTail(Tail):
    """b_n = exp(2 pi i n a_j),  j = (n-1) mod k."""

    a: tuple = (0.0,)

    def __call__(self, n):
        n = np.asarray(n, dtype=np.int64)
        a = np.asarray(self.a, dtype=np.complex128)
        aj = a[(n - 1) % len(a)]
        nf = n.astype(np.float64)
        return np.exp(-TWO_PI * nf * aj.imag + 1j * TWO_PI * np.fmod(nf * aj.real, 1.0))

    def log_abs_extrema(self, weight, n_lo):
        his, los = [], []
        for aj in self.a:
            h, l = _log_ratio_extrema(weight.power, weight.rate - TWO_PI * complex(aj).imag, n_lo)
            his.append(h)
            los.append(l)
        return max(his), min(los)


@dataclass(frozen=True)
class FunctionTail(Tail):
    """Tail given by an arbitrary vectorised callable; evaluable but not boundable."""

    fn: Callable = field(compare=False)

    def __call__(self, n):
        return np.asarray(self.fn(np.asarray(n)), dtype=np.complex128)


# ---------------------------------------------------------------- sequences


@dataclass(frozen=True, eq=False)
class TruncatedSeq:
    entries: np.ndarray
    weight: WeightFamily = WeightFamily("inverse_n")
    tail: Tail | None = None

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128).ravel()
        if e.size < 1:
            raise ValueError("need N >= 1 entries")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def N(self):
        return self.entries.size

    @classmethod
    def from_tail(cls, tail, N, weight=WeightFamily("inverse_n")):
        return cls(tail(np.arange(1, N + 1)), weight, tail)

    def at(self, n):
        """Entries at 1-based indices, using the tail beyond the window."""
        n = np.asarray(n, dtype=np.int64)
        out = np.empty(n.shape, dtype=np.complex128)
        inside = n <= self.N
        out[inside] = self.entries[n[inside] - 1]
        if (~inside).any():
            if self.tail is None:
                out[~inside] = 0.0
            else:
                out[~inside] = self.tail(n[~inside])
        return out

    def extended(self, N):
        """Same sequence with the window grown to N (requires a tail)."""
        if N <= self.N:
            return self
        return TruncatedSeq(self.at(np.arange(1, N + 1)), self.weight, self.tail)

    def ratios(self):
        return np.abs(self.entries) / self.weight(np.arange(1, self.N + 1))

    def __add__(self, other):
        if other.N != self.N:
            raise ValueError("window mismatch")
        return TruncatedSeq(self.entries + other.entries, self.weight, None)


def weighted_norm(z):
    """sup |z_n| / r_n."""
    r = z.ratios()
    val = float(r.max())
    if z.tail is not None:
        hi, _ = z.tail.log_abs_extrema(z.weight, z.N + 1)
        val = max(val, float(np.exp(hi)))
    return val


def dist_to_cross(z):
    """inf |z_n| / r_n; zero exactly on the closed coordinate cross."""
    r = z.ratios()
    val = float(r.min())
    if z.tail is not None:
        _, lo = z.tail.log_abs_extrema(z.weight, z.N + 1)
        val = min(val, float(np.exp(lo)))
    return val


# ---------------------------------------------------------------- paths


@dataclass(frozen=True, eq=False)
class PathSpec:
    """Concatenated segments, each a map from a t-array in [0,1] to (len(t), N) values."""

    segments: tuple
    samples_per_segment: int = 64
    weight: WeightFamily = WeightFamily("inverse_n")

    def samples(self, per_segment=None):
        m = per_segment or self.samples_per_segment
        t = np.linspace(0.0, 1.0, m + 1)
        chunks = []
        for i, seg in enumerate(self.segments):
            v = np.asarray(seg(t), dtype=np.complex128)
            chunks.append(v if i == 0 else v[1:])
        return np.concatenate(chunks, axis=0)

    @property
    def start(self):
        return np.asarray(self.segments[0](np.array([0.0])))[0]

    @property
    def end(self):
        return np.asarray(self.segments[-1](np.array([1.0])))[0]

    def reversed(self):
        segs = tuple(_reverse_seg(s) for s in reversed(self.segments))
        return PathSpec(segs, self.samples_per_segment, self.weight)

    def then(self, other):
        return PathSpec(self.segments + other.segments, self.samples_per_segment, self.weight)


def _reverse_seg(seg):
    return lambda t: seg(1.0 - np.asarray(t))


def path_from_function(fn, samples=64, weight=WeightFamily("inverse_n")):
    """Single-segment path t -> fn(t), fn returning shape (len(t), N)."""
    return PathSpec((fn,), samples, weight)


def unwrap_args(values, threshold=np.pi, initial=None):
    """Continuous argument of each column of ``values`` (rows are samples).

    The first row takes Arg in [0, 2pi) unless ``initial`` supplies the
    starting arguments; each later step adds the principal increment,
    which must stay below ``threshold`` in modulus.
    """
    v = np.asarray(values, dtype=np.complex128)
    if v.ndim == 1:
        v = v[:, None]
    if np.any(v == 0):
        raise BranchUndefinedError("zero coordinate on path")
    ang = np.angle(v)
    start = np.mod(ang[0], TWO_PI) if initial is None else np.asarray(initial, dtype=np.float64)
    if initial is not None and np.any(np.abs(np.angle(np.exp(1j * (start - ang[0])))) > 1e-9):
        raise DomainError("initial argument inconsistent with first sample")
    step = np.angle(v[1:] / v[:-1])
    if step.size and np.max(np.abs(step)) > threshold - 1e-9:
        raise StepRefinementError("argument step reaches pi; resample the path")
    out = np.empty_like(ang)
    out[0] = start
    out[1:] = start + np.cumsum(step, axis=0)
    return out


def connect_path(w, z, samples=64):
    """Three-segment path from w to z avoiding the coordinate cross.

    Per coordinate: rotate w_n onto the positive axis at radius |w_n|,
    move radially to |z_n|, then rotate out to z_n.  Arguments are taken
    in [0, 2pi) so each rotation sweeps less than one full turn.
    """
    if w.N != z.N or w.weight != z.weight:
        raise ValueError("w and z must share weight and window")
    if dist_to_cross(w) <= 0 or dist_to_cross(z) <= 0:
        raise DomainError("endpoint lies on the closed coordinate cross")
    wv, zv = w.entries.copy(), z.entries.copy()
    if np.array_equal(wv, zv):
        const = lambda t: np.broadcast_to(zv, (np.size(t), zv.size))
        return PathSpec((const,), samples, w.weight)
    rw, aw = np.abs(wv), np.mod(np.angle(wv), TWO_PI)
    rz, az = np.abs(zv), np.mod(np.angle(zv), TWO_PI)

    def g0(t):
        t = np.asarray(t)[:, None]
        return rw * np.exp(1j * (1.0 - t) * aw)

    def g1(t):
        t = np.asarray(t)[:, None]
        return (1.0 - t) * rw + t * rz

    def g2(t):
        t = np.asarray(t)[:, None]
        return rz * np.exp(1j * t * az)

    return PathSpec((g0, g1, g2), samples, w.weight)


def path_dist_to_cross(path, samples=None):
    v = path.samples(samples)
    r = path.weight(np.arange(1, v.shape[1] + 1))
    return float(np.min(np.abs(v) / r))


def max_abs_arg(path, samples=None):
    """max |continuous Arg gamma_n(t)| over samples, starting from Arg in [0, 2pi)."""
    v = path.samples(samples)
    return float(np.max(np.abs(unwrap_args(v))))


def hyperplanes_meeting_ball(z0, perturb_weight, bound):
    """1-based n <= N with |z0_n| / rho_n <= bound."""
    if not bound > 0:
        raise ValueError("bound must be positive")
    if dist_to_cross(z0) <= 0:
        raise PreconditionError("z0 lies on the closed coordinate cross")
    n = np.arange(1, z0.N + 1)
    q = perturb_weight.log(n) - z0.weight.log(n)
    # rho_n / r_n -> 0: eventually decreasing and below its starting value
    if z0.N >= 2 and not (q[-1] < q[0] and np.all(np.diff(q[len(q) // 2:]) < 0)):
        raise PreconditionError("perturbation weight does not decay relative to the base weight")
    lr = np.log(np.abs(z0.entries)) - perturb_weight.log(n)
    return [int(i) for i in n[lr <= np.log(bound) + 1e-12]]
